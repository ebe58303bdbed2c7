#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace mgs {

// Exact element (a + b*sqrt2) / sqrt2^k of the ring D[sqrt2].
//
// Values are kept in canonical form: k is the least denominator exponent,
// so two equal values always have identical (a, b, k).  Zero is (0, 0, 0).
class RingScalar {
 public:
  RingScalar() = default;
  RingScalar(long v);  // NOLINT(google-explicit-constructor)
  RingScalar(mpz_class a, mpz_class b, long k = 0);

  static RingScalar sqrt2() { return RingScalar(0, 1, 0); }
  static RingScalar inv_sqrt2() { return RingScalar(1, 0, 1); }
  // sqrt2^e for any integer e.
  static RingScalar sqrt2_pow(long e);

  const mpz_class& a() const { return a_; }
  const mpz_class& b() const { return b_; }
  unsigned k() const { return k_; }

  bool is_zero() const { return k_ == 0 && sgn(a_) == 0 && sgn(b_) == 0; }
  bool is_integral() const { return k_ == 0; }

  RingScalar conj() const;
  // Multiplies by sqrt2^e (e may be negative).
  RingScalar scaled(long e) const;
  // Components of sqrt2^e * x, which must lie in Z[sqrt2].
  void integral_parts(long e, mpz_class& a, mpz_class& b) const;

  RingScalar operator-() const;
  RingScalar& operator+=(const RingScalar& y);
  RingScalar& operator-=(const RingScalar& y);
  RingScalar& operator*=(const RingScalar& y);

  friend RingScalar operator+(RingScalar x, const RingScalar& y) { return x += y; }
  friend RingScalar operator-(RingScalar x, const RingScalar& y) { return x -= y; }
  friend RingScalar operator*(const RingScalar& x, const RingScalar& y);
  friend bool operator==(const RingScalar& x, const RingScalar& y) {
    return x.k_ == y.k_ && x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend bool operator!=(const RingScalar& x, const RingScalar& y) { return !(x == y); }

  // "a,b,k"
  std::string str() const;
  // "(a+b√2)/√2^k"
  std::string pretty() const;
  static RingScalar parse(const std::string& text);

  std::size_t hash() const;

 private:
  void canonicalize(long k);

  mpz_class a_;
  mpz_class b_;
  unsigned k_ = 0;
};

std::ostream& operator<<(std::ostream& os, const RingScalar& x);

RingScalar add(const RingScalar& x, const RingScalar& y);
RingScalar mul(const RingScalar& x, const RingScalar& y);
inline RingScalar conj(const RingScalar& x) { return x.conj(); }

// Least denominator exponent; 0 for 0.
unsigned lde(const RingScalar& x);

// Componentwise parity of an element of Z[sqrt2].
struct Residue {
  bool a = false;
  bool b = false;

  friend bool operator==(Residue x, Residue y) { return x.a == y.a && x.b == y.b; }
  friend bool operator!=(Residue x, Residue y) { return !(x == y); }
  friend Residue operator+(Residue x, Residue y) { return {x.a != y.a, x.b != y.b}; }
  // (a1 + b1 r)(a2 + b2 r) with r^2 = 0 over Z2.
  friend Residue operator*(Residue x, Residue y) {
    return {x.a && y.a, (x.a && y.b) != (x.b && y.a)};
  }
  std::string str() const { return std::string{a ? '1' : '0', b ? '1' : '0'}; }
  static Residue parse(const std::string& text);
};

Residue residue(const RingScalar& x);
bool is_reducible(Residue r);
bool is_twice_reducible(Residue r);

double to_float(const RingScalar& x);

}  // namespace mgs

template <>
struct std::hash<mgs::RingScalar> {
  std::size_t operator()(const mgs::RingScalar& x) const noexcept { return x.hash(); }
};
