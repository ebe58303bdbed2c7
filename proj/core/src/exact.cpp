#include "mgs/exact.hpp"

#include <algorithm>

#include "mgs/errors.hpp"

namespace mgs {

int Circuit::t_count() const {
  int c = 0;
  for (const auto& layer : layers)
    for (const auto& g : layer) c += is_t_kind(g.kind) ? 1 : 0;
  return c;
}

int Circuit::gate_count() const {
  int c = 0;
  for (const auto& layer : layers) c += static_cast<int>(layer.size());
  return c;
}

int Circuit::clifford_count() const { return gate_count() - t_count(); }

int Circuit::t_depth() const {
  int d = 0;
  for (const auto& layer : layers) {
    if (std::any_of(layer.begin(), layer.end(), [](const GeneratorId& g) { return is_t_kind(g.kind); })) ++d;
  }
  return d;
}

std::vector<GeneratorId> Circuit::flatten() const {
  std::vector<GeneratorId> out;
  for (const auto& layer : layers) out.insert(out.end(), layer.begin(), layer.end());
  return out;
}

bool Circuit::layers_disjoint() const {
  for (const auto& layer : layers) {
    std::vector<int> used(static_cast<std::size_t>(n + 2), 0);
    for (const auto& g : layer) {
      for (int q = g.first_qubit(); q <= g.last_qubit(); ++q) {
        if (q < 1 || q > n || used[static_cast<std::size_t>(q)]++) return false;
      }
    }
  }
  return true;
}

Circuit Circuit::from_gates(int n, const std::vector<GeneratorId>& gates, std::string provenance) {
  Circuit c;
  c.n = n;
  c.provenance = std::move(provenance);
  std::vector<int> last(static_cast<std::size_t>(n + 2), -1);
  for (const auto& g : gates) {
    check_site(n, g);
    int layer = 0;
    for (int q = g.first_qubit(); q <= g.last_qubit(); ++q) layer = std::max(layer, last[static_cast<std::size_t>(q)] + 1);
    if (layer >= c.depth()) c.layers.resize(static_cast<std::size_t>(layer + 1));
    c.layers[static_cast<std::size_t>(layer)].push_back(g);
    for (int q = g.first_qubit(); q <= g.last_qubit(); ++q) last[static_cast<std::size_t>(q)] = layer;
  }
  return c;
}

TransferMatrix eval_circuit(const Circuit& c) { return eval_product(c.n, c.flatten()); }

GateCountBounds gate_count_bounds(int n, unsigned long k_max) {
  if (n < 1) throw DomainError("gate_count_bounds needs n >= 1");
  mpz_class N = n, k = k_max;
  GateCountBounds b;
  b.nt_bound = k * (4 * N * N * N + 9 * N * N - 7 * N) / 6;
  mpz_class p = N * (N - 1) * (N + 2) * (2 * N - 1);
  b.nc_bound = 2 * k * p / 3 + N * (2 * N + 3);
  return b;
}

unsigned t_depth_lower_bound(const TransferMatrix& q) { return q.k_max(); }

namespace {

class ColumnReducer {
 public:
  explicit ColumnReducer(const TransferMatrix& q) : m_(q), N_(q.dim()) {}

  std::vector<GeneratorId> run() {
    for (int j = 0; j + 1 < N_; ++j) reduce_column(j);
    if (m_(N_ - 1, N_ - 1) != RingScalar(1)) throw InternalError("column reduction left a -1 in the last corner");
    std::vector<GeneratorId> gates;
    gates.reserve(ops_.size());
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) gates.push_back(it->inverse());
    return gates;
  }

 private:
  // Signed transposition acting on rows (p, p+1).
  GeneratorId swap_gen(int p, bool inverse) const {
    if (p % 2 == 0) return {inverse ? GateKind::StilInv : GateKind::Stil, p / 2 + 1};
    return {inverse ? GateKind::RtilInv : GateKind::Rtil, (p + 1) / 2};
  }

  void apply(const GeneratorId& g) {
    m_.apply_left(g);
    ops_.push_back(g);
  }

  unsigned column_lde(int j) const {
    unsigned k = 0;
    for (int i = j; i < N_; ++i) k = std::max(k, m_(i, j).k());
    return k;
  }

  void reduce_column(int j) {
    unsigned k = column_lde(j);
    while (k > 0) {
      for (;;) {
        std::vector<int> odd_even, odd_odd;
        mpz_class a, b;
        for (int i = j; i < N_; ++i) {
          m_(i, j).integral_parts(k, a, b);
          if (mpz_odd_p(a.get_mpz_t())) (mpz_odd_p(b.get_mpz_t()) ? odd_odd : odd_even).push_back(i);
        }
        if (odd_even.size() % 2 != 0 || odd_odd.size() % 2 != 0) {
          throw InternalError("odd number of irreducible entries in column " + std::to_string(j));
        }
        const std::vector<int>& pick = odd_even.empty() ? odd_odd : odd_even;
        if (pick.empty()) break;
        int t = route_pair(j, pick[0], pick[1]);
        apply({GateKind::TtilInv, t / 2 + 1});
      }
      unsigned next = column_lde(j);
      if (next >= k) throw InternalError("column LDE did not decrease");
      k = next;
    }
    place_unit(j);
  }

  // Moves rows r1 < r2 onto a T-plane (t, t+1) with t even and t >= j.
  int route_pair(int j, int r1, int r2) {
    while (r2 > r1 + 1) {
      apply(swap_gen(r2 - 1, false));
      --r2;
    }
    if (r1 % 2 == 0) return r1;
    if (r1 - 1 >= j) {
      apply(swap_gen(r1 - 1, false));
      apply(swap_gen(r1, false));
      return r1 - 1;
    }
    apply(swap_gen(r1 + 1, false));
    apply(swap_gen(r1, false));
    return r1 + 1;
  }

  void place_unit(int j) {
    int r = -1;
    for (int i = j; i < N_; ++i) {
      if (m_(i, j).is_zero()) continue;
      if (r >= 0) throw InternalError("column is not a signed unit vector after reduction");
      r = i;
    }
    if (r < 0) throw InternalError("column vanished during reduction");
    for (int p = r - 1; p >= j; --p) {
      bool positive = m_(p + 1, j) == RingScalar(1);
      apply(swap_gen(p, !positive));
    }
    if (m_(j, j) == RingScalar(-1)) {
      // X^2 = -1 on the plane (j, j+1).
      apply(swap_gen(j, false));
      apply(swap_gen(j, false));
    }
    if (m_(j, j) != RingScalar(1)) throw InternalError("unit entry could not be normalized");
  }

  TransferMatrix m_;
  int N_;
  std::vector<GeneratorId> ops_;
};

}  // namespace

SynthesisReport synthesize(const TransferMatrix& q) {
  if (!q.verified()) {
    if (!is_orthogonal(q)) throw NotOrthogonalError("target is not orthogonal");
    if (determinant(q) != RingScalar(1)) throw NotOrthogonalError("target has determinant -1");
  }
  SynthesisReport rep;
  rep.k_max_in = q.k_max();
  GateCountBounds b = gate_count_bounds(q.n(), rep.k_max_in);
  rep.nt_bound = b.nt_bound;
  rep.nc_bound = b.nc_bound;
  rep.t_depth_lb = t_depth_lower_bound(q);

  std::vector<GeneratorId> gates = ColumnReducer(q).run();
  rep.circuit = Circuit::from_gates(q.n(), gates, "exact");
  if (eval_circuit(rep.circuit) != q) throw InternalError("synthesized circuit does not reproduce the target");
  return rep;
}

}  // namespace mgs
