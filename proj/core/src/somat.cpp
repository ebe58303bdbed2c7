#include "mgs/somat.hpp"

#include "mgs/errors.hpp"

namespace mgs {

std::string kind_name(GateKind k) {
  switch (k) {
    case GateKind::Ttil: return "Ttil";
    case GateKind::TtilInv: return "TtilInv";
    case GateKind::Stil: return "Stil";
    case GateKind::StilInv: return "StilInv";
    case GateKind::Rtil: return "Rtil";
    case GateKind::RtilInv: return "RtilInv";
  }
  return "?";
}

GateKind parse_kind(const std::string& name) {
  for (GateKind k : kAllGateKinds) {
    if (kind_name(k) == name) return k;
  }
  throw ParseError("unknown gate kind \"" + name + "\"");
}

GateKind inverse(GateKind k) {
  switch (k) {
    case GateKind::Ttil: return GateKind::TtilInv;
    case GateKind::TtilInv: return GateKind::Ttil;
    case GateKind::Stil: return GateKind::StilInv;
    case GateKind::StilInv: return GateKind::Stil;
    case GateKind::Rtil: return GateKind::RtilInv;
    case GateKind::RtilInv: return GateKind::Rtil;
  }
  return k;
}

std::string GeneratorId::str() const { return kind_name(kind) + "(" + std::to_string(q) + ")"; }

void check_site(int n, const GeneratorId& g) {
  int hi = is_bond_kind(g.kind) ? n - 1 : n;
  if (g.q < 1 || g.q > hi) {
    throw RangeError("site " + std::to_string(g.q) + " out of range for " + kind_name(g.kind) + " on " +
                     std::to_string(n) + " qubits");
  }
}

TransferMatrix::TransferMatrix(int n) : n_(n), e_(static_cast<std::size_t>(4 * n * n)) {
  if (n < 1) throw DimensionError("transfer matrix needs n >= 1");
}

TransferMatrix TransferMatrix::identity(int n) {
  TransferMatrix m(n);
  for (int i = 0; i < m.dim(); ++i) m.e_[static_cast<std::size_t>(i * m.dim() + i)] = 1;
  m.verified_ = true;
  return m;
}

void TransferMatrix::set(int i, int j, RingScalar v) {
  e_[static_cast<std::size_t>(i * dim() + j)] = std::move(v);
  verified_ = false;
  k_max_.reset();
}

unsigned TransferMatrix::k_max() const {
  if (!k_max_) {
    unsigned k = 0;
    for (const auto& x : e_) k = std::max(k, x.k());
    k_max_ = k;
  }
  return *k_max_;
}

TransferMatrix TransferMatrix::transpose() const {
  TransferMatrix t(n_);
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) t.e_[static_cast<std::size_t>(j * dim() + i)] = (*this)(i, j);
  t.verified_ = verified_;
  return t;
}

TransferMatrix TransferMatrix::conj() const {
  TransferMatrix t(n_);
  for (std::size_t i = 0; i < e_.size(); ++i) t.e_[i] = e_[i].conj();
  t.verified_ = verified_;
  return t;
}

Eigen::MatrixXd TransferMatrix::to_float() const {
  Eigen::MatrixXd m(dim(), dim());
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) m(i, j) = mgs::to_float((*this)(i, j));
  return m;
}

void TransferMatrix::apply_left(const GeneratorId& g) {
  check_site(n_, g);
  const int r = g.plane_row();
  const int N = dim();
  RingScalar* x = &e_[static_cast<std::size_t>(r * N)];
  RingScalar* y = &e_[static_cast<std::size_t>((r + 1) * N)];
  static const RingScalar h = RingScalar::inv_sqrt2();
  for (int j = 0; j < N; ++j) {
    switch (g.kind) {
      case GateKind::Ttil: {
        // [[1, 1], [-1, 1]] / sqrt2
        RingScalar nx = (x[j] + y[j]) * h;
        y[j] = (y[j] - x[j]) * h;
        x[j] = std::move(nx);
        break;
      }
      case GateKind::TtilInv: {
        RingScalar nx = (x[j] - y[j]) * h;
        y[j] = (x[j] + y[j]) * h;
        x[j] = std::move(nx);
        break;
      }
      case GateKind::Stil:
      case GateKind::Rtil: {
        // [[0, 1], [-1, 0]]
        RingScalar nx = y[j];
        y[j] = -x[j];
        x[j] = std::move(nx);
        break;
      }
      case GateKind::StilInv:
      case GateKind::RtilInv: {
        RingScalar nx = -y[j];
        y[j] = x[j];
        x[j] = std::move(nx);
        break;
      }
    }
  }
  k_max_.reset();
}

TransferMatrix generator(int n, const GeneratorId& g) {
  TransferMatrix m = TransferMatrix::identity(n);
  m.apply_left(g);
  m.mark_verified(true);
  return m;
}

TransferMatrix matmul(const TransferMatrix& x, const TransferMatrix& y) {
  if (x.n() != y.n()) throw DimensionError("matmul of matrices with different n");
  const int N = x.dim();
  TransferMatrix r(x.n());
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      RingScalar acc;
      for (int l = 0; l < N; ++l) {
        if (x(i, l).is_zero() || y(l, j).is_zero()) continue;
        acc += x(i, l) * y(l, j);
      }
      r.set(i, j, std::move(acc));
    }
  }
  r.mark_verified(x.verified() && y.verified());
  return r;
}

TransferMatrix operator*(const TransferMatrix& x, const TransferMatrix& y) { return matmul(x, y); }

bool is_orthogonal(const TransferMatrix& q) {
  const int N = q.dim();
  for (int i = 0; i < N; ++i) {
    for (int j = i; j < N; ++j) {
      RingScalar acc;
      for (int l = 0; l < N; ++l) {
        if (q(l, i).is_zero() || q(l, j).is_zero()) continue;
        acc += q(l, i) * q(l, j);
      }
      if (acc != RingScalar(i == j ? 1 : 0)) return false;
    }
  }
  return true;
}

namespace {

// Element of Z[sqrt2] used by the fraction-free determinant.
struct Zr {
  mpz_class a, b;
  bool zero() const { return sgn(a) == 0 && sgn(b) == 0; }
};

Zr zmul(const Zr& x, const Zr& y) { return {x.a * y.a + 2 * x.b * y.b, x.a * y.b + x.b * y.a}; }
Zr zsub(const Zr& x, const Zr& y) { return {x.a - y.a, x.b - y.b}; }

// Exact division x / y, valid when y divides x in Z[sqrt2].
Zr zdiv(const Zr& x, const Zr& y) {
  mpz_class norm = y.a * y.a - 2 * y.b * y.b;
  Zr num = zmul(x, Zr{y.a, -y.b});
  Zr q;
  mpz_divexact(q.a.get_mpz_t(), num.a.get_mpz_t(), norm.get_mpz_t());
  mpz_divexact(q.b.get_mpz_t(), num.b.get_mpz_t(), norm.get_mpz_t());
  return q;
}

}  // namespace

RingScalar determinant(const TransferMatrix& q) {
  const int N = q.dim();
  const long K = q.k_max();
  std::vector<Zr> m(static_cast<std::size_t>(N * N));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) q(i, j).integral_parts(K, m[i * N + j].a, m[i * N + j].b);

  auto at = [&](int i, int j) -> Zr& { return m[static_cast<std::size_t>(i * N + j)]; };
  int sign = 1;
  Zr prev{1, 0};
  for (int p = 0; p < N; ++p) {
    if (at(p, p).zero()) {
      int s = p + 1;
      while (s < N && at(s, p).zero()) ++s;
      if (s == N) return {};
      for (int j = 0; j < N; ++j) std::swap(at(p, j), at(s, j));
      sign = -sign;
    }
    for (int i = p + 1; i < N; ++i) {
      for (int j = p + 1; j < N; ++j) {
        at(i, j) = zdiv(zsub(zmul(at(p, p), at(i, j)), zmul(at(i, p), at(p, j))), prev);
      }
      at(i, p) = Zr{0, 0};
    }
    prev = at(p, p);
  }
  const Zr& d = at(N - 1, N - 1);
  RingScalar det(sign * d.a, sign * d.b, K * N);
  return det;
}

bool is_special_orthogonal(const TransferMatrix& q) {
  return is_orthogonal(q) && determinant(q) == RingScalar(1);
}

unsigned k_max(const TransferMatrix& q) { return q.k_max(); }

TransferMatrix eval_product(int n, const std::vector<GeneratorId>& gates) {
  TransferMatrix m = TransferMatrix::identity(n);
  for (const auto& g : gates) m.apply_left(g);
  m.mark_verified(true);
  return m;
}

TransferMatrix vacuum_covariance(int n) {
  TransferMatrix g(n);
  for (int q = 0; q < n; ++q) {
    g.set(2 * q, 2 * q + 1, 1);
    g.set(2 * q + 1, 2 * q, -1);
  }
  g.mark_verified(true);
  return g;
}

}  // namespace mgs
