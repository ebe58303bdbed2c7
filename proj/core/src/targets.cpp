#include "mgs/targets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "mgs/errors.hpp"
#include "mgs/spinrep.hpp"

namespace mgs {

namespace {

using Gate4 = Eigen::Matrix4cd;

Gate4 fswap_gate() {
  Gate4 g = Gate4::Zero();
  g(0, 0) = 1;
  g(1, 2) = 1;
  g(2, 1) = 1;
  g(3, 3) = -1;
  return g;
}

// Two-mode Fourier gate with alpha = e^{2 pi i k / n}.
Gate4 fourier_gate(int k, int n) {
  const cplx alpha = std::polar(1.0, 2 * std::numbers::pi * k / n);
  const double h = 1 / std::sqrt(2.0);
  Gate4 g = Gate4::Zero();
  g(0, 0) = 1;
  g(1, 1) = h;
  g(1, 2) = alpha * h;
  g(2, 1) = h;
  g(2, 2) = -alpha * h;
  g(3, 3) = -alpha;
  return g;
}

// Bogoliubov gate with theta = 2 pi k / n.
Gate4 bogoliubov_gate(int k, int n) {
  const double th = 2 * std::numbers::pi * k / n;
  Gate4 g = Gate4::Identity();
  g(0, 0) = std::cos(th);
  g(3, 3) = std::cos(th);
  g(0, 3) = cplx(0, std::sin(th));
  g(3, 0) = cplx(0, std::sin(th));
  return g;
}

// Nearest value (a + b sqrt2) / 4 with small integers a, b.
RingScalar snap(double x) {
  const double r2 = std::sqrt(2.0);
  for (long b = -8; b <= 8; ++b) {
    const double a = std::round(4 * x - static_cast<double>(b) * r2);
    if (std::abs((a + static_cast<double>(b) * r2) / 4 - x) < 1e-9) return RingScalar(static_cast<long>(a), b, 4);
  }
  throw InternalError("gate transfer matrix entry " + std::to_string(x) + " is not a small ring element");
}

// Transfer matrix of a two-qubit matchgate on Majoranas c_1..c_4.
TransferMatrix two_site_transfer(const Gate4& g) {
  Eigen::MatrixXd f = transfer_matrix(DenseUnitary{2, g});
  TransferMatrix t(2);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) t.set(r, c, snap(f(r, c)));
  if (!is_special_orthogonal(t)) throw InternalError("snapped gate transfer matrix is not special orthogonal");
  return t;
}

// The diagonalizing network is assembled in the order in which it acts on
// the fermionic modes (position space to momentum space) and then applied in
// reverse.  Each wire carries a label naming the mode it currently holds.
class Network {
 public:
  explicit Network(int n) : n_(n), next_label_(n), wire_(static_cast<std::size_t>(n)) {
    for (int w = 0; w < n; ++w) wire_[static_cast<std::size_t>(w)] = w;
  }

  void gate(int site, const Gate4& g) { ops_.push_back({site, g}); }

  // Reorders wires [s, s + want.size()) with adjacent fermionic swaps so that
  // wire s + i holds label want[i].
  void arrange(int s, const std::vector<int>& want) {
    const auto base = static_cast<std::size_t>(s);
    std::vector<std::size_t> rank(want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
      rank[i] = static_cast<std::size_t>(std::find(want.begin(), want.end(), wire_[base + i]) - want.begin());
    }
    for (std::size_t pass = 0; pass < rank.size(); ++pass) {
      for (std::size_t i = 0; i + 1 < rank.size(); ++i) {
        if (rank[i] > rank[i + 1]) {
          gate(s + static_cast<int>(i), fswap_gate());
          std::swap(rank[i], rank[i + 1]);
          std::swap(wire_[base + i], wire_[base + i + 1]);
        }
      }
    }
  }

  // Radix-2 decimation in frequency over the labels `in` (natural input
  // order), which occupy wires [s, s + in.size()).  Each two-mode Fourier
  // gate takes x_{j+L/2} and x_j to the twiddled difference and the sum;
  // sums feed the even frequencies, differences the odd ones.  Returns the
  // output labels in natural frequency order.
  std::vector<int> dif(int s, const std::vector<int>& in) {
    const std::size_t len = in.size();
    if (len == 1) return in;
    const std::size_t half = len / 2;
    std::vector<int> pairs;
    for (std::size_t j = 0; j < half; ++j) {
      pairs.push_back(in[j + half]);
      pairs.push_back(in[j]);
    }
    arrange(s, pairs);
    std::vector<int> evens, odds;
    for (std::size_t j = 0; j < half; ++j) {
      const int site = s + 2 * static_cast<int>(j);
      const auto w = static_cast<std::size_t>(site);
      gate(site, fourier_gate(static_cast<int>(j) * n_ / static_cast<int>(len), n_));
      odds.push_back(wire_[w] = next_label_++);
      evens.push_back(wire_[w + 1] = next_label_++);
    }
    std::vector<int> split = evens;
    split.insert(split.end(), odds.begin(), odds.end());
    arrange(s, split);
    const std::vector<int> e = dif(s, evens);
    const std::vector<int> o = dif(s + static_cast<int>(half), odds);
    std::vector<int> out(len);
    for (std::size_t r = 0; r < half; ++r) {
      out[2 * r] = e[r];
      out[2 * r + 1] = o[r];
    }
    return out;
  }

  // Product of the recorded gates, the last recorded acting first.
  TransferMatrix product() const {
    TransferMatrix q = TransferMatrix::identity(n_);
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
      const TransferMatrix t = two_site_transfer(it->g);
      TransferMatrix e = TransferMatrix::identity(n_);
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) e.set(2 * it->site + r, 2 * it->site + c, t(r, c));
      q = e * q;
    }
    return q;
  }

 private:
  struct Op {
    int site;
    Gate4 g;
  };

  int n_;
  int next_label_;
  std::vector<int> wire_;
  std::vector<Op> ops_;
};

}  // namespace

XxTarget xx_target(int n) {
  if (n != 4 && n != 8) throw UnsupportedSizeError("xx_target supports n = 4 and n = 8");
  XxTarget t;
  t.n = n;
  t.h_xx = TransferMatrix(n);
  t.gamma0 = vacuum_covariance(n);

  for (int j = 0; j < n; ++j) {
    for (int l : {(j + 1) % n, (j + n - 1) % n}) {
      t.h_xx.set(2 * j, 2 * l + 1, 1);
      t.h_xx.set(2 * l + 1, 2 * j, -1);
    }
  }

  // Fourier network, then momenta k and n - k are brought next to each other
  // for the Bogoliubov gate.
  Network net(n);
  std::vector<int> sites(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) sites[static_cast<std::size_t>(j)] = j;
  const std::vector<int> x = net.dif(0, sites);
  std::vector<int> paired = {x[0], x[static_cast<std::size_t>(n / 2)]};
  for (int k = 1; k < n / 2; ++k) {
    paired.push_back(x[static_cast<std::size_t>(k)]);
    paired.push_back(x[static_cast<std::size_t>(n - k)]);
  }
  net.arrange(0, paired);
  // A Bogoliubov rotation by 2 pi k / n keeps the couplings block diagonal
  // only when the pair (k, n - k) has zero single-particle energy, 4k = n.
  for (int k = 1; k < n / 2; ++k) {
    if (4 * k == n) net.gate(2 * k, bogoliubov_gate(k, n));
  }

  // H = U H~ U^dag, so the Majorana action of U^dag carries the couplings
  // to the decoupled form.
  t.q_dis = net.product().transpose();
  if (!is_special_orthogonal(t.q_dis)) throw InternalError("XX network transfer matrix is not special orthogonal");
  t.q_dis.mark_verified(true);
  if (!is_block_antisymmetric(t.q_dis * t.h_xx * t.q_dis.transpose())) {
    throw InternalError("XX network does not block-diagonalize the couplings");
  }
  return t;
}

bool is_block_antisymmetric(const TransferMatrix& m) {
  for (int r = 0; r < m.dim(); ++r) {
    for (int c = 0; c < m.dim(); ++c) {
      if (r / 2 != c / 2) {
        if (!m(r, c).is_zero()) return false;
      } else if (m(r, c) != -m(c, r)) {
        return false;
      }
    }
  }
  return true;
}

std::vector<GeneratorId> random_word(int n, int t_budget, std::uint64_t seed) {
  if (n < 1) throw DimensionError("random_ring_target needs n >= 1");
  if (t_budget < 0) throw RangeError("t_budget must be nonnegative");
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  std::vector<GeneratorId> cliffords;
  for (int q = 1; q <= n; ++q) {
    cliffords.push_back({GateKind::Stil, q});
    cliffords.push_back({GateKind::StilInv, q});
  }
  for (int b = 1; b < n; ++b) {
    cliffords.push_back({GateKind::Rtil, b});
    cliffords.push_back({GateKind::RtilInv, b});
  }

  std::vector<GeneratorId> word;
  for (int t = 0; t < t_budget; ++t) {
    for (int c = pick(0, 3); c > 0; --c) word.push_back(cliffords[static_cast<std::size_t>(pick(0, static_cast<int>(cliffords.size()) - 1))]);
    word.push_back({pick(0, 1) ? GateKind::Ttil : GateKind::TtilInv, pick(1, n)});
  }
  for (int c = pick(0, 3); c > 0; --c) word.push_back(cliffords[static_cast<std::size_t>(pick(0, static_cast<int>(cliffords.size()) - 1))]);
  return word;
}

TransferMatrix random_ring_target(int n, int t_budget, std::uint64_t seed) {
  return eval_product(n, random_word(n, t_budget, seed));
}

Eigen::MatrixXd random_haar_so(int n, std::uint64_t seed) {
  if (n < 1) throw DimensionError("random_haar_so needs n >= 1");
  const int N = 2 * n;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd g(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < N; ++j)
    if (r(j, j) < 0) q.col(j) *= -1;
  if (q.determinant() < 0) q.col(0) *= -1;
  return q;
}

}  // namespace mgs
