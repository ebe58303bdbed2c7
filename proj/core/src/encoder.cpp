#include <algorithm>
#include <array>
#include <unordered_map>

#include "mgs/errors.hpp"
#include "mgs/satenc.hpp"

namespace mgs {

namespace {

// Literal with two reserved constants.  Negation is arithmetic negation.
constexpr int kTrue = 1 << 30;
constexpr int kFalse = -kTrue;

bool is_const(int l) { return l == kTrue || l == kFalse; }

using Bits = std::vector<int>;  // two's complement, least significant first

struct Value {
  Bits a, b;  // a + b sqrt2
};

using Row = std::vector<Value>;

class Builder {
 public:
  explicit Builder(CnfInstance& inst) : inst_(inst) {}

  int fresh() { return ++inst_.num_vars; }

  void clause(std::vector<int> c) {
    std::vector<int> out;
    for (int l : c) {
      if (l == kTrue) return;
      if (l == kFalse) continue;
      if (std::find(out.begin(), out.end(), -l) != out.end()) return;
      if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
    }
    if (out.empty()) {
      contradiction_ = true;
      return;
    }
    inst_.clauses.push_back(std::move(out));
  }

  bool contradiction() const { return contradiction_; }

  int and2(int x, int y) {
    if (x == kFalse || y == kFalse || x == -y) return kFalse;
    if (x == kTrue) return y;
    if (y == kTrue || x == y) return x;
    if (x > y) std::swap(x, y);
    auto [it, fresh_key] = and_cache_.try_emplace(key(x, y), 0);
    if (!fresh_key) return it->second;
    int v = fresh();
    clause({-v, x});
    clause({-v, y});
    clause({v, -x, -y});
    it->second = v;
    return v;
  }

  int or2(int x, int y) { return -and2(-x, -y); }

  int xor2(int x, int y) {
    if (x == kFalse) return y;
    if (y == kFalse) return x;
    if (x == kTrue) return -y;
    if (y == kTrue) return -x;
    if (x == y) return kFalse;
    if (x == -y) return kTrue;
    // Normalize signs so the cache sees one representative.
    bool flip = false;
    if (x < 0) x = -x, flip = !flip;
    if (y < 0) y = -y, flip = !flip;
    if (x > y) std::swap(x, y);
    auto [it, fresh_key] = xor_cache_.try_emplace(key(x, y), 0);
    if (fresh_key) {
      int v = fresh();
      clause({-v, x, y});
      clause({-v, -x, -y});
      clause({v, -x, y});
      clause({v, x, -y});
      it->second = v;
    }
    return flip ? -it->second : it->second;
  }

  // Sum and carry of x + y + z.
  std::pair<int, int> full_add(int x, int y, int z) {
    std::array<int, 3> v{x, y, z};
    auto c = std::find_if(v.begin(), v.end(), is_const);
    if (c != v.end()) {
      std::iter_swap(c, v.begin() + 2);
      const int p = v[0], q = v[1];
      if (v[2] == kFalse) return {xor2(p, q), and2(p, q)};
      return {-xor2(p, q), or2(p, q)};
    }
    const int s = fresh(), m = fresh();
    clause({-x, -y, -z, s});
    clause({-x, y, z, s});
    clause({x, -y, z, s});
    clause({x, y, -z, s});
    clause({x, y, z, -s});
    clause({x, -y, -z, -s});
    clause({-x, y, -z, -s});
    clause({-x, -y, z, -s});
    clause({-x, -y, m});
    clause({-x, -z, m});
    clause({-y, -z, m});
    clause({x, y, -m});
    clause({x, z, -m});
    clause({y, z, -m});
    return {s, m};
  }

  Bits add(const Bits& x, const Bits& y, std::size_t w) {
    Bits xs = extend(x, w), ys = extend(y, w), out(w);
    int carry = kFalse;
    for (std::size_t t = 0; t < w; ++t) std::tie(out[t], carry) = full_add(xs[t], ys[t], carry);
    return out;
  }

  Bits negate(const Bits& x, std::size_t w) {
    Bits xs = extend(x, w), out(w);
    int carry = kTrue;
    for (std::size_t t = 0; t < w; ++t) {
      out[t] = xor2(-xs[t], carry);
      carry = and2(-xs[t], carry);
    }
    return out;
  }

  static Bits extend(const Bits& x, std::size_t w) {
    Bits out(w);
    for (std::size_t t = 0; t < w; ++t) out[t] = t < x.size() ? x[t] : x.back();
    return out;
  }

  static Bits shift(const Bits& x, std::size_t w) {
    Bits out(w, kFalse);
    for (std::size_t t = 1; t < w; ++t) out[t] = t - 1 < x.size() ? x[t - 1] : x.back();
    return out;
  }

  static Bits constant(const mpz_class& v, std::size_t w) {
    Bits out(w);
    for (std::size_t t = 0; t < w; ++t) out[t] = mpz_tstbit(v.get_mpz_t(), t) ? kTrue : kFalse;
    return out;
  }

  void equal(int x, int y) {
    clause({-x, y});
    clause({x, -y});
  }

  // Output bit equal to the value of whichever condition holds.  At most one
  // condition is true; when none is, the output is `fallback`.
  int mux(const std::vector<std::pair<int, int>>& options, int fallback) {
    bool same = std::all_of(options.begin(), options.end(), [&](const auto& o) { return o.second == fallback; });
    if (same) return fallback;
    int o = fresh();
    std::vector<int> none_hi, none_lo;
    for (const auto& [cond, val] : options) {
      clause({-cond, -val, o});
      clause({-cond, val, -o});
      none_hi.push_back(cond);
      none_lo.push_back(cond);
    }
    none_hi.push_back(-fallback);
    none_hi.push_back(o);
    none_lo.push_back(fallback);
    none_lo.push_back(-o);
    clause(std::move(none_hi));
    clause(std::move(none_lo));
    return o;
  }

 private:
  static std::uint64_t key(int x, int y) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) | static_cast<std::uint32_t>(y);
  }

  CnfInstance& inst_;
  bool contradiction_ = false;
  std::unordered_map<std::uint64_t, int> and_cache_, xor_cache_;
};

Value sqrt2_times(const Value& x, std::size_t w) { return {Builder::shift(x.b, w), Builder::extend(x.a, w)}; }

std::size_t layer_width(int i) { return static_cast<std::size_t>((i + 1) / 2 + 2); }

void check_square_ring(const TransferMatrix& q) {
  if (q.dim() < 2) throw DimensionError("encoder needs n >= 1");
}

CnfInstance trivial_instance(int n, int d, bool parallel, bool sat, std::string note) {
  CnfInstance inst;
  inst.n = n;
  inst.depth = d;
  inst.parallel = parallel;
  inst.generators = encoder_generators(n);
  inst.trivial = true;
  inst.note = std::move(note);
  if (!sat) {
    inst.num_vars = 1;
    inst.clauses = {{1}, {-1}};
  }
  return inst;
}

std::uint64_t estimate_vars(int n, int d) {
  const std::uint64_t N = 2 * static_cast<std::uint64_t>(n);
  const std::uint64_t w = layer_width(d);
  // Per layer: one negation per row, three adds per plane, one mux per entry bit.
  return static_cast<std::uint64_t>(d) * N * N * 2 * w * (2 + 3 * 2 + 1) + 6 * static_cast<std::uint64_t>(n) * d;
}

// Shared skeleton: selectors, structural clauses and the layer products.
// Returns the final scaled state sqrt2^d W_d.
std::vector<Row> build_layers(Builder& bld, CnfInstance& inst, int n, int d, bool parallel) {
  const int N = 2 * n;
  inst.n = n;
  inst.depth = d;
  inst.parallel = parallel;
  inst.generators = encoder_generators(n);
  const auto G = static_cast<int>(inst.generators.size());

  inst.selectors.assign(static_cast<std::size_t>(d), std::vector<int>(static_cast<std::size_t>(G)));
  for (auto& layer : inst.selectors)
    for (int& v : layer) v = bld.fresh();
  inst.aux_first = inst.num_vars + 1;

  for (const auto& layer : inst.selectors) {
    bld.clause(layer);
    if (!parallel) {
      for (int j = 0; j < G; ++j)
        for (int k = j + 1; k < G; ++k) bld.clause({-layer[j], -layer[k]});
      continue;
    }
    for (int q = 1; q <= n; ++q) {
      std::vector<int> touching;
      for (int j = 0; j < G; ++j) {
        const auto& g = inst.generators[static_cast<std::size_t>(j)];
        if (g.first_qubit() <= q && q <= g.last_qubit()) touching.push_back(layer[static_cast<std::size_t>(j)]);
      }
      for (std::size_t j = 0; j < touching.size(); ++j)
        for (std::size_t k = j + 1; k < touching.size(); ++k) bld.clause({-touching[j], -touching[k]});
    }
  }

  // Scaled identity at layer 0.
  std::vector<Row> w(static_cast<std::size_t>(N), Row(static_cast<std::size_t>(N)));
  inst.layer_width.push_back(static_cast<int>(layer_width(0)));
  for (int r = 0; r < N; ++r) {
    for (int c = 0; c < N; ++c) {
      w[r][c].a = Builder::constant(r == c ? 1 : 0, layer_width(0));
      w[r][c].b = Builder::constant(0, layer_width(0));
    }
  }

  for (int i = 1; i <= d; ++i) {
    const std::size_t wd = layer_width(i);
    inst.layer_width.push_back(static_cast<int>(wd));
    const auto& sel = inst.selectors[static_cast<std::size_t>(i - 1)];

    std::vector<Row> neg(static_cast<std::size_t>(N));
    auto negated = [&](int r) -> const Row& {
      Row& out = neg[static_cast<std::size_t>(r)];
      if (out.empty()) {
        out.resize(static_cast<std::size_t>(N));
        for (int c = 0; c < N; ++c) out[c] = {bld.negate(w[r][c].a, wd), bld.negate(w[r][c].b, wd)};
      }
      return out;
    };
    auto add_rows = [&](const Row& x, const Row& y) {
      Row out(static_cast<std::size_t>(N));
      for (int c = 0; c < N; ++c) out[c] = {bld.add(x[c].a, y[c].a, wd), bld.add(x[c].b, y[c].b, wd)};
      return out;
    };
    auto sqrt2_row = [&](const Row& x) {
      Row out(static_cast<std::size_t>(N));
      for (int c = 0; c < N; ++c) out[c] = sqrt2_times(x[c], wd);
      return out;
    };

    // Candidate rows, keyed by the selector that picks them.
    std::vector<std::vector<std::pair<int, Row>>> cand(static_cast<std::size_t>(N));
    for (int j = 0; j < static_cast<int>(inst.generators.size()); ++j) {
      const auto& g = inst.generators[static_cast<std::size_t>(j)];
      if (g.kind != GateKind::Ttil && g.kind != GateKind::Stil && g.kind != GateKind::Rtil) continue;
      const int lo = g.plane_row(), hi = lo + 1;
      const int s = sel[static_cast<std::size_t>(j)], s_inv = sel[static_cast<std::size_t>(j + 1)];
      if (g.kind == GateKind::Ttil) {
        // Scaled Ttil rows (1, 1), (-1, 1); TtilInv is the transpose.
        Row sum = add_rows(w[lo], w[hi]);
        cand[lo].push_back({s, sum});
        cand[hi].push_back({s, add_rows(w[hi], negated(lo))});
        cand[lo].push_back({s_inv, add_rows(w[lo], negated(hi))});
        cand[hi].push_back({s_inv, sum});
      } else {
        cand[lo].push_back({s, sqrt2_row(w[hi])});
        cand[hi].push_back({s, sqrt2_row(negated(lo))});
        cand[lo].push_back({s_inv, sqrt2_row(negated(hi))});
        cand[hi].push_back({s_inv, sqrt2_row(w[lo])});
      }
    }

    std::vector<Row> next(static_cast<std::size_t>(N), Row(static_cast<std::size_t>(N)));
    for (int r = 0; r < N; ++r) {
      Row idle = sqrt2_row(w[r]);
      for (int c = 0; c < N; ++c) {
        for (int part = 0; part < 2; ++part) {
          Bits out(wd);
          for (std::size_t t = 0; t < wd; ++t) {
            std::vector<std::pair<int, int>> options;
            for (const auto& [s, row] : cand[r]) options.push_back({s, (part ? row[c].b : row[c].a)[t]});
            out[t] = bld.mux(options, (part ? idle[c].b : idle[c].a)[t]);
          }
          (part ? next[r][c].b : next[r][c].a) = std::move(out);
        }
      }
    }
    w = std::move(next);
  }
  return w;
}

void finish(Builder& bld, CnfInstance& inst) {
  inst.aux_last = inst.num_vars;
  if (bld.contradiction()) {
    // The constraints folded to false; keep the instance well formed.
    const int v = bld.fresh();
    inst.clauses.push_back({v});
    inst.clauses.push_back({-v});
    inst.aux_last = inst.num_vars;
  }
}

void require_fits(const mpz_class& v, std::size_t w) {
  mpz_class lim = mpz_class(1) << (w - 1);
  if (v >= lim || v < -lim) throw NotOrthogonalError("target entry exceeds the orthogonality bound");
}

}  // namespace

CnfInstance encode(const TransferMatrix& q, int d, const EncodeOptions& opt) {
  check_square_ring(q);
  if (d < 0) throw RangeError("depth must be nonnegative");
  if (!q.verified() && !is_special_orthogonal(q)) throw NotOrthogonalError("target is not special orthogonal");
  const int n = q.n();
  const auto k = static_cast<int>(q.k_max());
  if (d == 0) {
    bool id = q == TransferMatrix::identity(n);
    return trivial_instance(n, 0, opt.parallel, id, id ? "identity at depth 0" : "depth 0 needs the identity");
  }
  if (d < k) return trivial_instance(n, d, opt.parallel, false, "depth below k_max");
  if (estimate_vars(n, d) > opt.max_vars) {
    throw CapacityError("estimated " + std::to_string(estimate_vars(n, d)) + " variables exceeds the limit " +
                        std::to_string(opt.max_vars));
  }

  CnfInstance inst;
  Builder bld(inst);
  auto w = build_layers(bld, inst, n, d, opt.parallel);
  const std::size_t wd = layer_width(d);
  mpz_class a, b;
  for (int r = 0; r < q.dim(); ++r) {
    for (int c = 0; c < q.dim(); ++c) {
      q(r, c).integral_parts(d, a, b);
      require_fits(a, wd);
      require_fits(b, wd);
      Bits ta = Builder::constant(a, wd), tb = Builder::constant(b, wd);
      for (std::size_t t = 0; t < wd; ++t) {
        bld.equal(w[r][c].a[t], ta[t]);
        bld.equal(w[r][c].b[t], tb[t]);
      }
    }
  }
  finish(bld, inst);
  return inst;
}

WcnfInstance encode_maxsat(const TransferMatrix& q, int d, const EncodeOptions& opt) {
  WcnfInstance out;
  out.hard = encode(q, d, opt);
  for (const auto& layer : out.hard.selectors) {
    for (std::size_t j = 0; j < layer.size(); ++j) {
      if (is_t_kind(out.hard.generators[j].kind)) out.soft.push_back(-layer[j]);
    }
  }
  return out;
}

CnfInstance encode_stateprep(const TransferMatrix& gamma, int d, const EncodeOptions& opt) {
  check_square_ring(gamma);
  if (d < 0) throw RangeError("depth must be nonnegative");
  const int n = gamma.n(), N = gamma.dim();
  TransferMatrix sq = gamma * gamma;
  for (int r = 0; r < N; ++r) {
    for (int c = 0; c < N; ++c) {
      if (gamma(r, c) != -gamma(c, r)) throw NotCovarianceError("covariance must be antisymmetric");
      if (sq(r, c) != RingScalar(r == c ? -1 : 0)) throw NotCovarianceError("covariance must square to -1");
    }
  }
  const TransferMatrix g0 = vacuum_covariance(n);
  const auto kg = static_cast<int>(gamma.k_max());
  if (d == 0) {
    bool same = gamma == g0;
    return trivial_instance(n, 0, opt.parallel, same, same ? "reference state at depth 0" : "depth 0 needs the reference state");
  }
  // W Gamma0 W^T has denominator exponent at most 2 k_max(W) <= 2d.
  if (kg > 2 * d) return trivial_instance(n, d, opt.parallel, false, "covariance exponent above 2d");
  if (estimate_vars(n, d) > opt.max_vars) throw CapacityError("estimated variable count exceeds the limit");

  CnfInstance inst;
  Builder bld(inst);
  auto w = build_layers(bld, inst, n, d, opt.parallel);
  const std::size_t wd = static_cast<std::size_t>((kg + d + 1) / 2 + 2);

  // Left side: sqrt2^kg (W Gamma0), a signed column swap within each block.
  auto scale = [&](Value v) {
    v.a = Builder::extend(v.a, wd);
    v.b = Builder::extend(v.b, wd);
    for (int e = 0; e < kg; ++e) v = sqrt2_times(v, wd);
    return v;
  };
  // Right side: (sqrt2^kg Gamma) W with integral constants.
  auto times_const = [&](const Bits& x, const mpz_class& c) {
    mpz_class mag = abs(c);
    Bits acc = Builder::constant(0, wd), xs = Builder::extend(x, wd);
    for (std::size_t t = 0; t < wd && mag != 0; ++t) {
      if (mpz_tstbit(mag.get_mpz_t(), t)) acc = bld.add(acc, xs, wd);
      xs = Builder::shift(xs, wd);
    }
    return sgn(c) < 0 ? bld.negate(acc, wd) : acc;
  };

  for (int r = 0; r < N; ++r) {
    for (int c = 0; c < N; ++c) {
      const int partner = c % 2 == 0 ? c + 1 : c - 1;
      Value lhs = scale(w[r][partner]);
      if (c % 2 == 0) lhs = {bld.negate(lhs.a, wd), bld.negate(lhs.b, wd)};

      Value rhs{Builder::constant(0, wd), Builder::constant(0, wd)};
      mpz_class alpha, beta;
      for (int s = 0; s < N; ++s) {
        gamma(r, s).integral_parts(kg, alpha, beta);
        if (alpha == 0 && beta == 0) continue;
        const Value& x = w[s][c];
        // (alpha + beta sqrt2)(a + b sqrt2) = (alpha a + 2 beta b) + (alpha b + beta a) sqrt2
        Bits pa = bld.add(times_const(x.a, alpha), times_const(x.b, 2 * beta), wd);
        Bits pb = bld.add(times_const(x.b, alpha), times_const(x.a, beta), wd);
        rhs = {bld.add(rhs.a, pa, wd), bld.add(rhs.b, pb, wd)};
      }
      for (std::size_t t = 0; t < wd; ++t) {
        bld.equal(lhs.a[t], rhs.a[t]);
        bld.equal(lhs.b[t], rhs.b[t]);
      }
    }
  }
  finish(bld, inst);
  return inst;
}

}  // namespace mgs
