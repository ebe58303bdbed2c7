#include <doctest.h>

#include <cmath>
#include <random>

#include "mgs/errors.hpp"
#include "mgs/somat.hpp"

using namespace mgs;

namespace {

std::vector<GeneratorId> all_generators(int n) {
  std::vector<GeneratorId> out;
  for (GateKind k : kAllGateKinds) {
    const int sites = is_bond_kind(k) ? n - 1 : n;
    for (int q = 1; q <= sites; ++q) out.push_back({k, q});
  }
  return out;
}

std::vector<GeneratorId> random_gates(std::mt19937_64& rng, int n, int len) {
  auto gens = all_generators(n);
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  std::vector<GeneratorId> w;
  for (int i = 0; i < len; ++i) w.push_back(gens[pick(rng)]);
  return w;
}

}  // namespace

TEST_CASE("generators are special orthogonal and invert") {
  for (int n = 1; n <= 4; ++n) {
    for (const auto& g : all_generators(n)) {
      TransferMatrix m = generator(n, g);
      CHECK(is_special_orthogonal(m));
      CHECK(m * generator(n, g.inverse()) == TransferMatrix::identity(n));
      CHECK(m.k_max() == (is_t_kind(g.kind) ? 1u : 0u));
    }
  }
}

TEST_CASE("generator blocks sit on the documented planes") {
  TransferMatrix t = generator(2, {GateKind::Ttil, 2});
  const RingScalar h = RingScalar::inv_sqrt2();
  CHECK(t(2, 2) == h);
  CHECK(t(2, 3) == h);
  CHECK(t(3, 2) == -h);
  CHECK(t(3, 3) == h);
  CHECK(t(0, 0) == RingScalar(1));

  TransferMatrix r = generator(3, {GateKind::Rtil, 2});
  CHECK(r(3, 4) == RingScalar(1));
  CHECK(r(4, 3) == RingScalar(-1));
  CHECK(r(3, 3).is_zero());
  CHECK(r(0, 0) == RingScalar(1));

  CHECK(generator(1, {GateKind::Ttil, 1}) * generator(1, {GateKind::Ttil, 1}) == generator(1, {GateKind::Stil, 1}));
}

TEST_CASE("site checks") {
  CHECK_THROWS_AS(generator(2, {GateKind::Rtil, 2}), DomainError);
  CHECK_THROWS_AS(generator(2, {GateKind::Ttil, 0}), DomainError);
  CHECK_THROWS_AS(generator(1, {GateKind::Rtil, 1}), DomainError);
  CHECK(parse_kind(kind_name(GateKind::RtilInv)) == GateKind::RtilInv);
  CHECK_THROWS_AS(parse_kind("H"), ParseError);
}

TEST_CASE("products agree with floating matrix products") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    auto w = random_gates(rng, n, 20);
    TransferMatrix q = eval_product(n, w);
    Eigen::MatrixXd f = Eigen::MatrixXd::Identity(2 * n, 2 * n);
    for (const auto& g : w) f = generator(n, g).to_float() * f;
    CHECK((q.to_float() - f).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(is_special_orthogonal(q));

    TransferMatrix inc = TransferMatrix::identity(n);
    for (const auto& g : w) inc.apply_left(g);
    CHECK(inc == q);
  }
}

TEST_CASE("exact determinant matches Eigen") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    TransferMatrix m(n);
    for (int i = 0; i < m.dim(); ++i)
      for (int j = 0; j < m.dim(); ++j)
        m.set(i, j, RingScalar(static_cast<long>(rng() % 7) - 3, static_cast<long>(rng() % 5) - 2, static_cast<long>(rng() % 3)));
    CHECK(to_float(determinant(m)) == doctest::Approx(m.to_float().determinant()).epsilon(1e-9).scale(1.0));
  }
  TransferMatrix refl = TransferMatrix::identity(2);
  refl.set(0, 0, -1);
  CHECK(is_orthogonal(refl));
  CHECK_FALSE(is_special_orthogonal(refl));
  CHECK(determinant(refl) == RingScalar(-1));
}

TEST_CASE("k_max is the largest entry exponent") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    auto w = random_gates(rng, 3, 25);
    TransferMatrix q = eval_product(3, w);
    unsigned k = 0;
    for (int i = 0; i < q.dim(); ++i)
      for (int j = 0; j < q.dim(); ++j) k = std::max(k, lde(q(i, j)));
    CHECK(k_max(q) == k);
    int t = 0;
    for (const auto& g : w) t += is_t_kind(g.kind);
    CHECK(k_max(q) <= static_cast<unsigned>(t));
  }
}

TEST_CASE("vacuum covariance squares to minus identity") {
  TransferMatrix g = vacuum_covariance(3);
  TransferMatrix sq = g * g;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(sq(i, j) == RingScalar(i == j ? -1 : 0));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(g(i, j) == -g(j, i));
}
