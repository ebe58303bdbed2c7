#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mgs/errors.hpp"
#include "mgs/exact.hpp"
#include "mgs/targets.hpp"

using namespace mgs;

TEST_CASE("XX target for four sites") {
  XxTarget t = xx_target(4);
  CHECK(is_special_orthogonal(t.q_dis));
  CHECK(t.q_dis.k_max() == 2);
  TransferMatrix d = t.q_dis * t.h_xx * t.q_dis.transpose();
  CHECK(is_block_antisymmetric(d));

  // Single-particle energies 2 cos(2 pi k / 4) = {2, 0, -2, 0} up to sign and order.
  std::vector<double> e;
  for (int k = 0; k < 4; ++k) e.push_back(std::abs(to_float(d(2 * k, 2 * k + 1))));
  std::sort(e.begin(), e.end());
  CHECK(e[0] == doctest::Approx(0));
  CHECK(e[1] == doctest::Approx(0));
  CHECK(e[2] == doctest::Approx(2));
  CHECK(e[3] == doctest::Approx(2));

  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) CHECK(t.h_xx(r, c) == -t.h_xx(c, r));

  SynthesisReport rep = synthesize(t.q_dis);
  CHECK(eval_circuit(rep.circuit) == t.q_dis);
}

TEST_CASE("XX target for eight sites") {
  XxTarget t = xx_target(8);
  CHECK(is_special_orthogonal(t.q_dis));
  CHECK(is_block_antisymmetric(t.q_dis * t.h_xx * t.q_dis.transpose()));
  CHECK_THROWS_AS(xx_target(6), UnsupportedSizeError);
}

TEST_CASE("random ring targets") {
  TransferMatrix c = random_ring_target(3, 0, 5);
  CHECK(c.k_max() == 0);
  for (int r = 0; r < 6; ++r) {
    int nz = 0;
    for (int col = 0; col < 6; ++col) {
      if (!c(r, col).is_zero()) {
        ++nz;
        CHECK((c(r, col) == RingScalar(1) || c(r, col) == RingScalar(-1)));
      }
    }
    CHECK(nz == 1);
  }
  CHECK(random_ring_target(1, 1, 9).k_max() <= 1);
  CHECK(random_ring_target(3, 6, 77) == random_ring_target(3, 6, 77));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto w = random_word(2, 5, seed);
    int t = 0;
    for (const auto& g : w) t += is_t_kind(g.kind);
    CHECK(t == 5);
    CHECK(eval_product(2, w).k_max() <= 5);
  }
}

TEST_CASE("Haar samples are special orthogonal") {
  for (int n = 1; n <= 5; ++n) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Eigen::MatrixXd q = random_haar_so(n, seed);
      CHECK((q.transpose() * q - Eigen::MatrixXd::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(q.determinant() == doctest::Approx(1.0));
    }
  }
  CHECK(random_haar_so(3, 4) == random_haar_so(3, 4));
}

TEST_CASE("first column of Haar samples is uniform on the sphere") {
  // For the unit sphere in R^4 one coordinate has density (2 / pi) sqrt(1 - x^2).
  auto cdf = [](double x) { return 0.5 + (x * std::sqrt(1 - x * x) + std::asin(x)) / std::numbers::pi; };
  const int samples = 10000, bins = 10;
  std::vector<int> count(bins, 0);
  for (int s = 0; s < samples; ++s) {
    const double x = random_haar_so(2, 100000 + s)(0, 0);
    count[std::min(bins - 1, static_cast<int>((x + 1) / 2 * bins))]++;
  }
  double chi2 = 0;
  for (int b = 0; b < bins; ++b) {
    const double lo = -1 + 2.0 * b / bins, hi = -1 + 2.0 * (b + 1) / bins;
    const double expect = samples * (cdf(hi) - cdf(lo));
    chi2 += (count[b] - expect) * (count[b] - expect) / expect;
  }
  // 99.9% quantile of chi-square with 9 degrees of freedom.
  CHECK(chi2 < 27.88);
}
