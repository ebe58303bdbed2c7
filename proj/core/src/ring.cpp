#include "mgs/ring.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "mgs/errors.hpp"

namespace mgs {

namespace {

// (a + b r) * r^m with r = sqrt2, in place.
void mul_sqrt2_pow(mpz_class& a, mpz_class& b, unsigned long m) {
  if (m % 2 == 1) {
    mpz_class t = 2 * b;
    b = a;
    a = t;
  }
  if (m / 2 > 0) {
    mpz_mul_2exp(a.get_mpz_t(), a.get_mpz_t(), m / 2);
    mpz_mul_2exp(b.get_mpz_t(), b.get_mpz_t(), m / 2);
  }
}

bool is_even(const mpz_class& v) { return mpz_even_p(v.get_mpz_t()) != 0; }

}  // namespace

RingScalar::RingScalar(long v) : a_(v), b_(0), k_(0) {}

RingScalar::RingScalar(mpz_class a, mpz_class b, long k) : a_(std::move(a)), b_(std::move(b)) {
  canonicalize(k);
}

void RingScalar::canonicalize(long k) {
  if (sgn(a_) == 0 && sgn(b_) == 0) {
    k_ = 0;
    return;
  }
  if (k < 0) {
    mul_sqrt2_pow(a_, b_, static_cast<unsigned long>(-k));
    k = 0;
  }
  // Strip whole factors of 2 in one go when both parts allow it.
  if (k >= 2) {
    auto za = sgn(a_) == 0 ? std::numeric_limits<unsigned long>::max() : mpz_scan1(a_.get_mpz_t(), 0);
    auto zb = sgn(b_) == 0 ? std::numeric_limits<unsigned long>::max() : mpz_scan1(b_.get_mpz_t(), 0);
    unsigned long twos = std::min({za, zb, static_cast<unsigned long>(k / 2)});
    if (twos > 0) {
      mpz_tdiv_q_2exp(a_.get_mpz_t(), a_.get_mpz_t(), twos);
      mpz_tdiv_q_2exp(b_.get_mpz_t(), b_.get_mpz_t(), twos);
      k -= static_cast<long>(2 * twos);
    }
  }
  while (k > 0 && is_even(a_)) {
    // (a + b r)/r = b + (a/2) r
    mpz_class half = a_ / 2;
    a_ = b_;
    b_ = half;
    --k;
  }
  k_ = static_cast<unsigned>(k);
}

RingScalar RingScalar::sqrt2_pow(long e) { return RingScalar(1, 0, -e); }

RingScalar RingScalar::conj() const {
  RingScalar r;
  r.a_ = a_;
  r.b_ = -b_;
  // sqrt2 -> -sqrt2 flips the sign of odd powers in the denominator.
  if (k_ % 2 == 1) {
    r.a_ = -r.a_;
    r.b_ = -r.b_;
  }
  r.k_ = k_;
  return r;
}

RingScalar RingScalar::scaled(long e) const {
  if (is_zero()) return {};
  return RingScalar(a_, b_, static_cast<long>(k_) - e);
}

void RingScalar::integral_parts(long e, mpz_class& a, mpz_class& b) const {
  if (is_zero()) {
    a = 0;
    b = 0;
    return;
  }
  long shift = e - static_cast<long>(k_);
  if (shift < 0) throw NotInRingError("value " + str() + " times sqrt2^" + std::to_string(e) + " is not in Z[sqrt2]");
  a = a_;
  b = b_;
  mul_sqrt2_pow(a, b, static_cast<unsigned long>(shift));
}

RingScalar RingScalar::operator-() const {
  RingScalar r = *this;
  r.a_ = -r.a_;
  r.b_ = -r.b_;
  return r;
}

RingScalar& RingScalar::operator+=(const RingScalar& y) {
  if (y.is_zero()) return *this;
  if (is_zero()) return *this = y;
  unsigned K = std::max(k_, y.k_);
  mpz_class ya = y.a_, yb = y.b_;
  mul_sqrt2_pow(a_, b_, K - k_);
  mul_sqrt2_pow(ya, yb, K - y.k_);
  a_ += ya;
  b_ += yb;
  canonicalize(K);
  return *this;
}

RingScalar& RingScalar::operator-=(const RingScalar& y) { return *this += -y; }

RingScalar operator*(const RingScalar& x, const RingScalar& y) {
  if (x.is_zero() || y.is_zero()) return {};
  RingScalar r;
  r.a_ = x.a_ * y.a_ + 2 * x.b_ * y.b_;
  r.b_ = x.a_ * y.b_ + x.b_ * y.a_;
  r.canonicalize(static_cast<long>(x.k_ + y.k_));
  return r;
}

RingScalar& RingScalar::operator*=(const RingScalar& y) { return *this = *this * y; }

std::string RingScalar::str() const { return a_.get_str() + "," + b_.get_str() + "," + std::to_string(k_); }

std::string RingScalar::pretty() const {
  std::string s = "(" + a_.get_str() + (sgn(b_) < 0 ? "-" : "+") + mpz_class(abs(b_)).get_str() + "√2)";
  if (k_ > 0) s += "/√2^" + std::to_string(k_);
  return s;
}

RingScalar RingScalar::parse(const std::string& text) {
  std::istringstream in(text);
  std::string sa, sb, sk;
  if (!std::getline(in, sa, ',') || !std::getline(in, sb, ',') || !std::getline(in, sk)) {
    throw ParseError("expected \"a,b,k\", got \"" + text + "\"");
  }
  try {
    long k = std::stol(sk);
    if (k < 0) throw ParseError("negative scale exponent in \"" + text + "\"");
    return RingScalar(mpz_class(sa), mpz_class(sb), k);
  } catch (const std::invalid_argument&) {
    throw ParseError("malformed ring scalar \"" + text + "\"");
  }
}

std::size_t RingScalar::hash() const {
  auto limb = [](const mpz_class& v) -> std::size_t {
    if (sgn(v) == 0) return 0;
    return static_cast<std::size_t>(mpz_getlimbn(v.get_mpz_t(), 0)) ^
           (static_cast<std::size_t>(mpz_size(v.get_mpz_t())) << 48) ^ (sgn(v) < 0 ? 0x9e3779b97f4a7c15ULL : 0);
  };
  std::size_t h = limb(a_);
  h ^= limb(b_) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= static_cast<std::size_t>(k_) * 0xff51afd7ed558ccdULL;
  return h;
}

std::ostream& operator<<(std::ostream& os, const RingScalar& x) { return os << x.pretty(); }

RingScalar add(const RingScalar& x, const RingScalar& y) { return x + y; }
RingScalar mul(const RingScalar& x, const RingScalar& y) { return x * y; }

unsigned lde(const RingScalar& x) { return x.k(); }

Residue Residue::parse(const std::string& text) {
  if (text.size() != 2 || (text[0] != '0' && text[0] != '1') || (text[1] != '0' && text[1] != '1')) {
    throw ParseError("residue must be two bits, got \"" + text + "\"");
  }
  return {text[0] == '1', text[1] == '1'};
}

Residue residue(const RingScalar& x) {
  if (x.k() != 0) throw DomainError("residue requires an element of Z[sqrt2], got " + x.pretty());
  return {mpz_odd_p(x.a().get_mpz_t()) != 0, mpz_odd_p(x.b().get_mpz_t()) != 0};
}

bool is_reducible(Residue r) { return !r.a; }
bool is_twice_reducible(Residue r) { return !r.a && !r.b; }

double to_float(const RingScalar& x) {
  if (x.is_zero()) return 0.0;
  const mpz_class& a = x.a();
  const mpz_class& b = x.b();
  std::size_t bits = std::max(mpz_sizeinbase(a.get_mpz_t(), 2), mpz_sizeinbase(b.get_mpz_t(), 2));
  mp_bitcnt_t prec = static_cast<mp_bitcnt_t>(bits + 128);
  mpf_class r2(2, prec);
  mpf_sqrt(r2.get_mpf_t(), r2.get_mpf_t());

  mpf_class num(0, prec);
  if (sgn(a) * sgn(b) >= 0) {
    num = mpf_class(a, prec) + mpf_class(b, prec) * r2;
  } else {
    // a and b*sqrt2 nearly cancel: use (a^2 - 2b^2) / (a - b*sqrt2).
    mpz_class norm = a * a - 2 * b * b;
    mpf_class den = mpf_class(a, prec) - mpf_class(b, prec) * r2;
    num = mpf_class(norm, prec) / den;
  }
  unsigned k = x.k();
  if (k % 2 == 1) num /= r2;
  mpf_div_2exp(num.get_mpf_t(), num.get_mpf_t(), k / 2);

  long exp2 = 0;
  mpf_get_d_2exp(&exp2, num.get_mpf_t());
  if (exp2 > std::numeric_limits<double>::max_exponent) {
    throw OverflowError("ring scalar " + x.str() + " exceeds the double range");
  }
  // mpf_get_d truncates; round to nearest through a decimal-free path.
  double hi = num.get_d();
  mpf_class rem = num - mpf_class(hi, prec);
  return hi + rem.get_d();
}

}  // namespace mgs
