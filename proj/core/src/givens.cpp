#include <cmath>
#include <numbers>

#include "mgs/approx.hpp"
#include "mgs/errors.hpp"

namespace mgs {

double canonical_angle(double theta) {
  constexpr double two_pi = 2 * std::numbers::pi;
  double t = std::remainder(theta, two_pi);
  if (t <= -std::numbers::pi) t += two_pi;
  return t;
}

Eigen::MatrixXd plane_rotation(int dim, const PlanarRotation& r) {
  if (r.plane < 1 || r.plane >= dim) throw RangeError("rotation plane out of range");
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(dim, dim);
  const int a = r.plane - 1;
  const double c = std::cos(r.theta), s = std::sin(r.theta);
  g(a, a) = c;
  g(a, a + 1) = s;
  g(a + 1, a) = -s;
  g(a + 1, a + 1) = c;
  return g;
}

Eigen::MatrixXd rotations_product(int dim, const std::vector<PlanarRotation>& rots) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(dim, dim);
  for (const auto& r : rots) m = plane_rotation(dim, r) * m;
  return m;
}

DenseUnitary rotations_unitary(int n, const std::vector<PlanarRotation>& rots, int cap) {
  DenseUnitary u = identity_unitary(n, cap);
  for (const auto& r : rots) {
    if (r.plane % 2 == 1) {
      u = rz(n, (r.plane + 1) / 2, r.theta, cap) * u;
    } else {
      u = rxx(n, r.plane / 2, r.theta, cap) * u;
    }
  }
  return u;
}

std::vector<PlanarRotation> givens_decompose(const Eigen::MatrixXd& qf) {
  const Eigen::Index N = qf.rows();
  if (N != qf.cols() || N % 2 != 0 || N == 0) throw DimensionError("givens_decompose needs a 2n x 2n matrix");
  double dev = (qf.transpose() * qf - Eigen::MatrixXd::Identity(N, N)).cwiseAbs().maxCoeff();
  if (dev > 1e-9) throw NotOrthogonalError("target is not orthogonal within 1e-9");
  if (qf.determinant() < 0) throw ReflectionError("target has determinant -1");

  // Left-multiplying by adjacent-plane rotations G_m ... G_1 brings qf to the
  // identity, so qf = G_1^T ... G_m^T and the time order is reversed.
  Eigen::MatrixXd m = qf;
  std::vector<PlanarRotation> sweep;
  for (Eigen::Index j = 0; j + 1 < N; ++j) {
    for (Eigen::Index i = N - 1; i > j; --i) {
      const double x = m(i - 1, j), y = m(i, j);
      if (y == 0.0 && x >= 0.0) continue;
      const double r = std::hypot(x, y);
      const double c = x / r, s = y / r;
      for (Eigen::Index col = 0; col < N; ++col) {
        const double u = m(i - 1, col), v = m(i, col);
        m(i - 1, col) = c * u + s * v;
        m(i, col) = -s * u + c * v;
      }
      sweep.push_back({static_cast<int>(i), std::atan2(s, c)});
    }
  }
  std::vector<PlanarRotation> rots;
  for (auto it = sweep.rbegin(); it != sweep.rend(); ++it) {
    double t = canonical_angle(-it->theta);
    if (std::abs(t) < 1e-12) continue;
    rots.push_back({it->plane, t});
  }
  return rots;
}

}  // namespace mgs
