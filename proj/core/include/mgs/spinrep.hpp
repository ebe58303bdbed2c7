#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "mgs/somat.hpp"

namespace mgs {

using cplx = std::complex<double>;

inline constexpr int kDefaultQubitCap = 6;

// Dense 2^n x 2^n unitary.  Qubit 1 is the most significant tensor factor.
struct DenseUnitary {
  int n = 0;
  Eigen::MatrixXcd m;

  DenseUnitary operator*(const DenseUnitary& o) const { return {n, m * o.m}; }
  DenseUnitary adjoint() const { return {n, m.adjoint()}; }
};

DenseUnitary identity_unitary(int n, int cap = kDefaultQubitCap);
// exp(i theta Z_q / 2)
DenseUnitary rz(int n, int q, double theta, int cap = kDefaultQubitCap);
// exp(i theta X_q X_{q+1} / 2)
DenseUnitary rxx(int n, int q, double theta, int cap = kDefaultQubitCap);
DenseUnitary gate_unitary(int n, const GeneratorId& g, int cap = kDefaultQubitCap);
// U_d ... U_1 for a gate list in time order.
DenseUnitary circuit_unitary(int n, const std::vector<GeneratorId>& gates, int cap = kDefaultQubitCap);

// Jordan-Wigner Majoranas c_1..c_2n (returned 0-based).
const std::vector<Eigen::MatrixXcd>& majoranas(int n);

// Q with U^dag c_mu U = sum_nu Q(mu, nu) c_nu.
Eigen::MatrixXd transfer_matrix(const DenseUnitary& u, double tol = 1e-9);

double op_norm_dist(const DenseUnitary& u, const DenseUnitary& v);
double adjoint_dist(const DenseUnitary& u, const DenseUnitary& v);
double op_norm(const Eigen::MatrixXd& a);

// 1 - sum s_i^4 over the normalized operator-Schmidt coefficients of a
// two-qubit unitary.
double operator_entanglement(const DenseUnitary& u);

// Spin lift of a floating SO(2n) matrix through its real Schur form.
DenseUnitary lift_rotation(const Eigen::MatrixXd& r);
// Rotation angles of the 2x2 blocks of the canonical form of r.
std::vector<double> canonical_angles(const Eigen::MatrixXd& r);

struct Theorem2Record {
  double eps_so = 0;
  double eps_spin = 0;
  double eps_spin_analytic = 0;
  double bound = 0;
  bool holds = true;
};

Theorem2Record check_theorem2(const Eigen::MatrixXd& q, const Eigen::MatrixXd& q_eps);

Eigen::VectorXcd zero_state(int n);
double stabilizer_entropy(const Eigen::VectorXcd& state);

}  // namespace mgs
