#include "mgs/spinrep.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "mgs/errors.hpp"

namespace mgs {

namespace {

void check_cap(int n, int cap) {
  if (n < 1) throw DimensionError("need at least one qubit");
  if (n > cap) {
    throw CapError("dense simulation of " + std::to_string(n) + " qubits exceeds the cap of " + std::to_string(cap));
  }
}

// Bit of qubit q (1-based) in a basis index.
inline int qubit_bit(int n, int q) { return n - q; }

// Dense Pauli string; ops[q-1] in {'I','X','Y','Z'}.
Eigen::MatrixXcd pauli_string(int n, const std::vector<char>& ops) {
  const int dim = 1 << n;
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(dim, dim);
  for (int col = 0; col < dim; ++col) {
    int row = col;
    cplx phase = 1.0;
    for (int q = 1; q <= n; ++q) {
      int bit = (col >> qubit_bit(n, q)) & 1;
      switch (ops[static_cast<std::size_t>(q - 1)]) {
        case 'X': row ^= 1 << qubit_bit(n, q); break;
        case 'Y':
          row ^= 1 << qubit_bit(n, q);
          phase *= bit ? cplx(0, -1) : cplx(0, 1);
          break;
        case 'Z':
          if (bit) phase = -phase;
          break;
        default: break;
      }
    }
    p(row, col) = phase;
  }
  return p;
}

}  // namespace

DenseUnitary identity_unitary(int n, int cap) {
  check_cap(n, cap);
  return {n, Eigen::MatrixXcd::Identity(1 << n, 1 << n)};
}

DenseUnitary rz(int n, int q, double theta, int cap) {
  check_cap(n, cap);
  if (q < 1 || q > n) throw RangeError("rz qubit out of range");
  const int dim = 1 << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  const cplx up = std::polar(1.0, theta / 2), down = std::polar(1.0, -theta / 2);
  for (int x = 0; x < dim; ++x) m(x, x) = ((x >> qubit_bit(n, q)) & 1) ? down : up;
  return {n, m};
}

DenseUnitary rxx(int n, int q, double theta, int cap) {
  check_cap(n, cap);
  if (q < 1 || q >= n) throw RangeError("rxx bond out of range");
  const int dim = 1 << n;
  const int flip = (1 << qubit_bit(n, q)) | (1 << qubit_bit(n, q + 1));
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (int x = 0; x < dim; ++x) {
    m(x, x) = std::cos(theta / 2);
    m(x ^ flip, x) = cplx(0, std::sin(theta / 2));
  }
  return {n, m};
}

DenseUnitary gate_unitary(int n, const GeneratorId& g, int cap) {
  check_site(n, g);
  constexpr double pi = std::numbers::pi;
  switch (g.kind) {
    case GateKind::Ttil: return rz(n, g.q, pi / 4, cap);
    case GateKind::TtilInv: return rz(n, g.q, -pi / 4, cap);
    case GateKind::Stil: return rz(n, g.q, pi / 2, cap);
    case GateKind::StilInv: return rz(n, g.q, -pi / 2, cap);
    case GateKind::Rtil: return rxx(n, g.q, pi / 2, cap);
    case GateKind::RtilInv: return rxx(n, g.q, -pi / 2, cap);
  }
  throw InternalError("unreachable gate kind");
}

DenseUnitary circuit_unitary(int n, const std::vector<GeneratorId>& gates, int cap) {
  DenseUnitary u = identity_unitary(n, cap);
  for (const auto& g : gates) u = gate_unitary(n, g, cap) * u;
  return u;
}

const std::vector<Eigen::MatrixXcd>& majoranas(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<Eigen::MatrixXcd>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<Eigen::MatrixXcd> cs;
  for (int q = 1; q <= n; ++q) {
    std::vector<char> ops(static_cast<std::size_t>(n), 'I');
    for (int p = 1; p < q; ++p) ops[static_cast<std::size_t>(p - 1)] = 'Z';
    ops[static_cast<std::size_t>(q - 1)] = 'X';
    cs.push_back(pauli_string(n, ops));
    ops[static_cast<std::size_t>(q - 1)] = 'Y';
    cs.push_back(pauli_string(n, ops));
  }
  return cache.emplace(n, std::move(cs)).first->second;
}

Eigen::MatrixXd transfer_matrix(const DenseUnitary& u, double tol) {
  const int n = u.n;
  const auto& cs = majoranas(n);
  const int N = 2 * n;
  const double norm = 1.0 / static_cast<double>(1 << n);
  Eigen::MatrixXd q(N, N);
  for (int mu = 0; mu < N; ++mu) {
    Eigen::MatrixXcd a = u.m.adjoint() * cs[static_cast<std::size_t>(mu)] * u.m;
    for (int nu = 0; nu < N; ++nu) {
      cplx tr = (cs[static_cast<std::size_t>(nu)].transpose().cwiseProduct(a)).sum();
      q(mu, nu) = tr.real() * norm;
    }
  }
  double err = (q.transpose() * q - Eigen::MatrixXd::Identity(N, N)).cwiseAbs().maxCoeff();
  if (err > tol) throw NotMatchgateError("transfer matrix is not orthogonal (deviation " + std::to_string(err) + ")");
  return q;
}

double op_norm(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues()(0);
}

double op_norm_dist(const DenseUnitary& u, const DenseUnitary& v) {
  if (u.m.rows() != v.m.rows()) throw DimensionError("op_norm_dist of unitaries of different size");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(u.m - v.m);
  return svd.singularValues()(0);
}

double adjoint_dist(const DenseUnitary& u, const DenseUnitary& v) {
  if (u.m.rows() != v.m.rows()) throw DimensionError("adjoint_dist of unitaries of different size");
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(u.m.adjoint() * v.m, false);
  const auto& ev = es.eigenvalues();
  double best = 0;
  for (Eigen::Index j = 0; j < ev.size(); ++j) {
    for (Eigen::Index k = j + 1; k < ev.size(); ++k) {
      // |e^{i(a-b)} - 1| with unit-modulus eigenvalues.
      cplx rel = ev(j) * std::conj(ev(k)) / (std::abs(ev(j)) * std::abs(ev(k)));
      best = std::max(best, std::abs(rel - 1.0));
    }
  }
  return best;
}

double operator_entanglement(const DenseUnitary& u) {
  if (u.m.rows() != 4 || u.m.cols() != 4) throw DimensionError("operator entanglement needs a two-qubit unitary");
  Eigen::MatrixXcd r(4, 4);
  for (int i1 = 0; i1 < 2; ++i1)
    for (int i2 = 0; i2 < 2; ++i2)
      for (int j1 = 0; j1 < 2; ++j1)
        for (int j2 = 0; j2 < 2; ++j2) r(i1 * 2 + j1, i2 * 2 + j2) = u.m(i1 * 2 + i2, j1 * 2 + j2);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(r);
  Eigen::VectorXd s2 = svd.singularValues().array().square();
  double total = s2.sum();
  double p4 = 0;
  for (Eigen::Index i = 0; i < s2.size(); ++i) p4 += (s2(i) / total) * (s2(i) / total);
  return 1.0 - p4;
}

namespace {

struct CanonicalForm {
  Eigen::MatrixXd basis;
  std::vector<std::array<int, 2>> planes;
  std::vector<double> angles;
};

CanonicalForm canonical_form(const Eigen::MatrixXd& r) {
  const int N = static_cast<int>(r.rows());
  Eigen::RealSchur<Eigen::MatrixXd> schur(r);
  const Eigen::MatrixXd& t = schur.matrixT();
  CanonicalForm cf;
  cf.basis = schur.matrixU();
  std::vector<int> minus;
  int i = 0;
  while (i < N) {
    if (i + 1 < N && std::abs(t(i + 1, i)) > 1e-14) {
      cf.planes.push_back({i, i + 1});
      cf.angles.push_back(std::atan2(t(i, i + 1), t(i, i)));
      i += 2;
    } else {
      if (t(i, i) < 0) minus.push_back(i);
      i += 1;
    }
  }
  if (minus.size() % 2 != 0) throw ReflectionError("matrix has determinant -1");
  for (std::size_t j = 0; j < minus.size(); j += 2) {
    cf.planes.push_back({minus[j], minus[j + 1]});
    cf.angles.push_back(std::numbers::pi);
  }
  return cf;
}

}  // namespace

std::vector<double> canonical_angles(const Eigen::MatrixXd& r) { return canonical_form(r).angles; }

DenseUnitary lift_rotation(const Eigen::MatrixXd& r) {
  const int N = static_cast<int>(r.rows());
  const int n = N / 2;
  const auto& cs = majoranas(n);
  CanonicalForm cf = canonical_form(r);
  DenseUnitary u = identity_unitary(n, kDefaultQubitCap);
  const int dim = 1 << n;
  for (std::size_t p = 0; p < cf.planes.size(); ++p) {
    Eigen::MatrixXcd ca = Eigen::MatrixXcd::Zero(dim, dim), cb = Eigen::MatrixXcd::Zero(dim, dim);
    for (int nu = 0; nu < N; ++nu) {
      ca += cf.basis(nu, cf.planes[p][0]) * cs[static_cast<std::size_t>(nu)];
      cb += cf.basis(nu, cf.planes[p][1]) * cs[static_cast<std::size_t>(nu)];
    }
    const double lam = cf.angles[p];
    Eigen::MatrixXcd f = std::cos(lam / 2) * Eigen::MatrixXcd::Identity(dim, dim) + std::sin(lam / 2) * (ca * cb);
    u.m = f * u.m;
  }
  return u;
}

Theorem2Record check_theorem2(const Eigen::MatrixXd& q, const Eigen::MatrixXd& q_eps) {
  if (q.rows() != q_eps.rows() || q.rows() != q.cols() || q.rows() % 2 != 0) {
    throw DimensionError("check_theorem2 needs two 2n x 2n matrices");
  }
  const int N = static_cast<int>(q.rows());
  const int n = N / 2;
  for (const Eigen::MatrixXd* m : {&q, &q_eps}) {
    double dev = ((*m).transpose() * (*m) - Eigen::MatrixXd::Identity(N, N)).cwiseAbs().maxCoeff();
    if (dev > 1e-9) throw NotOrthogonalError("input is not orthogonal within 1e-9");
  }
  Theorem2Record rec;
  rec.eps_so = op_norm(q - q_eps);
  Eigen::MatrixXd r = q.transpose() * q_eps;
  // d(U_Q, U_Q U_R) = d(I, U_R) by invariance of the adjoint distance.
  DenseUnitary ur = lift_rotation(r);
  rec.eps_spin = adjoint_dist(identity_unitary(n), ur);

  std::vector<double> lam = canonical_angles(r);
  const std::size_t m = lam.size();
  std::size_t combos = 1;
  for (std::size_t j = 0; j < m; ++j) combos *= 3;
  for (std::size_t c = 0; c < combos; ++c) {
    std::size_t code = c;
    double phi = 0;
    for (std::size_t j = 0; j < m; ++j, code /= 3) phi += (static_cast<double>(code % 3) - 1.0) * lam[j];
    rec.eps_spin_analytic = std::max(rec.eps_spin_analytic, 2 * std::abs(std::sin(phi / 2)));
  }
  rec.bound = std::numbers::pi / 2 * n * rec.eps_so;
  rec.holds = rec.eps_spin <= rec.bound + 1e-9;
  return rec;
}

Eigen::VectorXcd zero_state(int n) {
  Eigen::VectorXcd s = Eigen::VectorXcd::Zero(1 << n);
  s(0) = 1;
  return s;
}

double stabilizer_entropy(const Eigen::VectorXcd& state) {
  const Eigen::Index dim = state.size();
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim || n > kDefaultQubitCap) throw DimensionError("state size must be 2^n with n <= cap");
  if (std::abs(state.norm() - 1.0) > 1e-9) throw NormalizationError("state is not normalized");
  static const cplx ipow[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
  double total = 0;
  for (Eigen::Index x = 0; x < dim; ++x) {
    for (Eigen::Index z = 0; z < dim; ++z) {
      cplx acc = 0;
      for (Eigen::Index j = 0; j < dim; ++j) {
        double sign = (__builtin_popcountll(static_cast<unsigned long long>(z & j)) & 1) ? -1.0 : 1.0;
        acc += std::conj(state(j ^ x)) * sign * state(j);
      }
      acc *= ipow[__builtin_popcountll(static_cast<unsigned long long>(x & z)) & 3];
      double e = acc.real();
      total += e * e * e * e;
    }
  }
  return total / static_cast<double>(dim);
}

}  // namespace mgs
