#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>
#include <unordered_set>

#include "mgs/approx.hpp"
#include "mgs/errors.hpp"

namespace mgs {

namespace {

constexpr double kPi = std::numbers::pi;

// SU(2) element [[a, b], [-conj(b), conj(a)]].
struct Q2 {
  cplx a{1, 0};
  cplx b{0, 0};
};

Q2 operator*(const Q2& x, const Q2& y) { return {x.a * y.a - x.b * std::conj(y.b), x.a * y.b + x.b * std::conj(y.a)}; }
Q2 dagger(const Q2& x) { return {std::conj(x.a), -x.b}; }

std::array<double, 4> coords(const Q2& x) { return {x.a.real(), x.a.imag(), x.b.real(), x.b.imag()}; }

Q2 from_su2(const Su2& u) { return {u(0, 0), u(0, 1)}; }

Q2 t_power(int a) { return {std::polar(1.0, kPi * a / 8), 0}; }
const Q2 kW{cplx(0, 1 / std::numbers::sqrt2), cplx(1 / std::numbers::sqrt2, 0)};

// For x^dag y = cos(p) + i sin(p) n.sigma the adjoint distance is 2|sin p|;
// reading sin p off the vector part avoids cancellation near p = 0.
double adjoint_between(const Q2& x, const Q2& y) {
  Q2 r = dagger(x) * y;
  return 2 * std::sqrt(r.a.imag() * r.a.imag() + std::norm(r.b));
}

struct Entry {
  Q2 u;
  std::int32_t parent;  // -1 for a bare T power
  std::uint8_t tpow;    // leading T^tpow
  std::uint8_t letters;
};

std::size_t run_letters(int a) {
  a = ((a % 8) + 8) % 8;
  return static_cast<std::size_t>(std::min(a, 8 - a));
}

}  // namespace

Su2 letter_unitary(Letter l) {
  const double h = 1 / std::numbers::sqrt2;
  Su2 m;
  switch (l) {
    case Letter::T: m << std::polar(1.0, kPi / 8), 0, 0, std::polar(1.0, -kPi / 8); break;
    case Letter::Tinv: m << std::polar(1.0, -kPi / 8), 0, 0, std::polar(1.0, kPi / 8); break;
    case Letter::W: m << cplx(0, h), h, -h, cplx(0, -h); break;
    case Letter::Winv: m << cplx(0, -h), -h, h, cplx(0, h); break;
  }
  return m;
}

Su2 word_unitary(const std::vector<Letter>& letters) {
  Su2 u = Su2::Identity();
  for (Letter l : letters) u = u * letter_unitary(l);
  return u;
}

double su2_adjoint_dist(const Su2& u, const Su2& v) { return adjoint_between(from_su2(u), from_su2(v)); }

Su2 su2_rz(double theta) {
  Su2 m;
  m << std::polar(1.0, theta / 2), 0, 0, std::polar(1.0, -theta / 2);
  return m;
}

Su2 su2_rx(double theta) {
  Su2 m;
  m << std::cos(theta / 2), cplx(0, std::sin(theta / 2)), cplx(0, std::sin(theta / 2)), std::cos(theta / 2);
  return m;
}

std::string Su2Word::str() const {
  std::string s;
  for (Letter l : letters) {
    if (!s.empty()) s += ' ';
    switch (l) {
      case Letter::W: s += "W"; break;
      case Letter::T: s += "T"; break;
      case Letter::Winv: s += "Winv"; break;
      case Letter::Tinv: s += "Tinv"; break;
    }
  }
  return s;
}

Su2Word Su2Word::parse(const std::string& text) {
  Su2Word w;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == ' ' || text[i] == ',') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != ',') ++j;
    std::string tok = text.substr(i, j - i);
    if (tok == "W") w.letters.push_back(Letter::W);
    else if (tok == "T") w.letters.push_back(Letter::T);
    else if (tok == "Winv") w.letters.push_back(Letter::Winv);
    else if (tok == "Tinv") w.letters.push_back(Letter::Tinv);
    else throw ParseError("unknown letter \"" + tok + "\"; words must be over {W, T, Winv, Tinv}");
    i = j;
  }
  w.unitary = word_unitary(w.letters);
  return w;
}

std::size_t Su2Word::t_count() const {
  return static_cast<std::size_t>(
      std::count_if(letters.begin(), letters.end(), [](Letter l) { return l == Letter::T || l == Letter::Tinv; }));
}

std::vector<Letter> reduce_word(const std::vector<Letter>& letters) {
  // Syllables: T-run exponents separated by single W's (W^2 = -1).
  std::vector<int> runs{0};
  for (Letter l : letters) {
    switch (l) {
      case Letter::T: runs.back() += 1; break;
      case Letter::Tinv: runs.back() -= 1; break;
      case Letter::W:
      case Letter::Winv:
        if (runs.size() > 1 && ((runs.back() % 8) + 8) % 8 == 0) {
          // W T^0 W collapses; merge the surrounding runs.
          runs.pop_back();
        } else {
          runs.push_back(0);
        }
        break;
    }
  }
  std::vector<Letter> out;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (i > 0) out.push_back(Letter::W);
    int a = ((runs[i] % 8) + 8) % 8;
    if (a <= 4) out.insert(out.end(), static_cast<std::size_t>(a), Letter::T);
    else out.insert(out.end(), static_cast<std::size_t>(8 - a), Letter::Tinv);
  }
  return out;
}

struct Su2Searcher::Impl {
  Su2SearchConfig cfg;
  std::vector<Entry> table;
  std::vector<std::size_t> level_start;  // table index where each level begins
  std::unordered_set<std::uint64_t> seen;

  double cell = 0;
  std::unordered_map<std::uint64_t, std::uint32_t> heads;
  std::vector<std::uint32_t> next;
  std::size_t indexed = 0;

  struct Clifford {
    Q2 u;
    std::vector<Letter> word;
  };
  std::vector<Clifford> cliffords;

  void build_cliffords() {
    // Projective single-qubit Clifford group generated by W and T^2.
    const Q2 s2 = t_power(2);
    cliffords.push_back({Q2{}, {}});
    std::unordered_set<std::uint64_t> known{element_key(Q2{})};
    for (std::size_t i = 0; i < cliffords.size(); ++i) {
      for (int g = 0; g < 2; ++g) {
        Clifford c{g == 0 ? kW * cliffords[i].u : s2 * cliffords[i].u, {}};
        c.word = g == 0 ? std::vector<Letter>{Letter::W} : std::vector<Letter>{Letter::T, Letter::T};
        c.word.insert(c.word.end(), cliffords[i].word.begin(), cliffords[i].word.end());
        if (known.insert(element_key(c.u)).second) cliffords.push_back(std::move(c));
      }
    }
    if (cliffords.size() != 24) throw InternalError("Clifford enumeration produced " + std::to_string(cliffords.size()));
  }

  static std::array<std::int64_t, 4> rounded(const Q2& u) {
    auto c = coords(u);
    // Projective class: fix the sign by the first clearly nonzero coordinate.
    for (double v : c) {
      if (std::abs(v) > 1e-7) {
        if (v < 0)
          for (double& w : c) w = -w;
        break;
      }
    }
    std::array<std::int64_t, 4> r{};
    for (int d = 0; d < 4; ++d) r[d] = std::llround(c[d] * 1e8);
    return r;
  }

  static std::uint64_t hash_rounded(const std::array<std::int64_t, 4>& r) {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto q : r) {
      h ^= static_cast<std::uint64_t>(q);
      h *= 1099511628211ULL;
      h ^= h >> 29;
    }
    return h;
  }

  static std::uint64_t element_key(const Q2& u) { return hash_rounded(rounded(u)); }

  // Key of the right coset u * Clifford.
  std::uint64_t fingerprint(const Q2& u) const {
    std::array<std::int64_t, 4> best = rounded(u);
    for (const auto& c : cliffords) best = std::min(best, rounded(u * c.u));
    return hash_rounded(best);
  }

  void add(const Entry& e) {
    if (seen.insert(fingerprint(e.u)).second) table.push_back(e);
  }

  bool grow() {
    if (table.empty()) {
      level_start.push_back(0);
      for (int a = 0; a < 8; ++a) add({t_power(a), -1, static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(run_letters(a))});
      return true;
    }
    if (table.size() >= cfg.max_table) return false;
    std::size_t lo = level_start.back(), hi = table.size();
    level_start.push_back(hi);
    for (std::size_t i = lo; i < hi && table.size() < cfg.max_table; ++i) {
      Q2 wx = kW * table[i].u;
      std::size_t len = table[i].letters + 1;
      for (int a = 0; a < 8; ++a) {
        std::size_t l = len + run_letters(a);
        if (l > 255) continue;
        add({t_power(a) * wx, static_cast<std::int32_t>(i), static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(l)});
      }
    }
    return table.size() > hi;
  }

  std::uint64_t cell_key(const std::array<std::int64_t, 4>& idx) const {
    std::uint64_t k = 0;
    for (auto v : idx) k = (k << 16) | (static_cast<std::uint64_t>(v) & 0xffff);
    return k;
  }

  std::array<std::int64_t, 4> cell_of(const std::array<double, 4>& c) const {
    std::array<std::int64_t, 4> idx{};
    for (int d = 0; d < 4; ++d) idx[d] = static_cast<std::int64_t>(std::floor((c[d] + 1.0) / cell));
    return idx;
  }

  void reindex(double radius) {
    double want = std::max(2 * radius, 1.0 / 30000);
    if (want != cell) {
      cell = want;
      heads.clear();
      next.clear();
      indexed = 0;
    }
    next.resize(table.size());
    for (; indexed < table.size(); ++indexed) {
      std::uint64_t key = cell_key(cell_of(coords(table[indexed].u)));
      auto it = heads.find(key);
      next[indexed] = it == heads.end() ? std::numeric_limits<std::uint32_t>::max() : it->second;
      heads[key] = static_cast<std::uint32_t>(indexed);
    }
  }

  // Visits table entries whose coordinates may lie within the index radius of +-p.
  template <typename F>
  void neighbours(const Q2& p, F&& visit) const {
    for (int sgn : {1, -1}) {
      auto c = coords(p);
      if (sgn < 0)
        for (double& v : c) v = -v;
      std::array<std::int64_t, 4> base = cell_of(c), lo{};
      for (int d = 0; d < 4; ++d) {
        double frac = (c[d] + 1.0) / cell - static_cast<double>(base[d]);
        lo[d] = frac < 0.5 ? base[d] - 1 : base[d];
      }
      for (int mask = 0; mask < 16; ++mask) {
        std::array<std::int64_t, 4> idx{};
        for (int d = 0; d < 4; ++d) idx[d] = lo[d] + ((mask >> d) & 1);
        auto it = heads.find(cell_key(idx));
        if (it == heads.end()) continue;
        for (std::uint32_t e = it->second; e != std::numeric_limits<std::uint32_t>::max(); e = next[e]) visit(e);
      }
    }
  }

  void append_letters(std::size_t idx, std::vector<Letter>& out) const {
    for (std::int32_t i = static_cast<std::int32_t>(idx); i >= 0; i = table[static_cast<std::size_t>(i)].parent) {
      const Entry& e = table[static_cast<std::size_t>(i)];
      out.insert(out.end(), e.tpow, Letter::T);
      if (e.parent >= 0) out.push_back(Letter::W);
    }
  }

  Su2Word search(const Su2& target, double eps) {
    if (!(eps >= cfg.eps_floor)) {
      throw SearchExhaustedError("eps " + std::to_string(eps) + " is below the search floor " +
                                 std::to_string(cfg.eps_floor));
    }
    const Q2 t = from_su2(target);
    const double phi = std::asin(std::min(1.0, eps / 2));
    const double radius = 2 * std::sin(phi / 2) * (1 + 1e-9);

    if (cliffords.empty()) build_cliffords();
    if (table.empty()) grow();
    while (table.size() < cfg.initial_table && grow()) {
    }
    for (;;) {
      reindex(radius);
      // Prefixes level by level against the whole table.
      std::size_t best_len = std::numeric_limits<std::size_t>::max();
      std::size_t best_a = 0, best_b = 0;
      std::size_t best_c1 = 0, best_c2 = 0;
      const std::size_t combos = cliffords.size() * cliffords.size();
      bool scanned_all = true;
      std::size_t prefixes = 0;
      for (std::size_t level = 0; level < level_start.size(); ++level) {
        std::size_t lo = level_start[level];
        std::size_t hi = level + 1 < level_start.size() ? level_start[level + 1] : table.size();
        // Once the prefix side outgrows the table it is cheaper to deepen the table.
        if (prefixes > 0 && prefixes * combos * 8 > table.size() && table.size() < cfg.max_table) {
          scanned_all = false;
          break;
        }
        prefixes += hi - lo;
        for (std::size_t a = lo; a < hi; ++a) {
          if (table[a].letters >= best_len) continue;
          for (std::size_t c1 = 0; c1 < cliffords.size(); ++c1) {
            const Q2 rest = dagger(table[a].u * cliffords[c1].u) * t;
            const std::size_t head = table[a].letters + cliffords[c1].word.size();
            for (std::size_t c2 = 0; c2 < cliffords.size(); ++c2) {
              const std::size_t fixed = head + cliffords[c2].word.size();
              if (fixed >= best_len) continue;
              const Q2 q = rest * dagger(cliffords[c2].u);
              neighbours(q, [&](std::uint32_t b) {
                std::size_t len = fixed + table[b].letters;
                if (len >= best_len) return;
                if (adjoint_between(table[b].u, q) > eps) return;
                best_len = len;
                best_a = a;
                best_b = b;
                best_c1 = c1;
                best_c2 = c2;
              });
            }
          }
        }
        if (best_len != std::numeric_limits<std::size_t>::max()) break;
      }
      if (best_len != std::numeric_limits<std::size_t>::max()) {
        std::vector<Letter> raw;
        append_letters(best_a, raw);
        raw.insert(raw.end(), cliffords[best_c1].word.begin(), cliffords[best_c1].word.end());
        append_letters(best_b, raw);
        raw.insert(raw.end(), cliffords[best_c2].word.begin(), cliffords[best_c2].word.end());
        Su2Word w;
        w.letters = reduce_word(raw);
        w.unitary = word_unitary(w.letters);
        w.error = su2_adjoint_dist(w.unitary, target);
        if (w.letters.size() > cfg.max_letters) {
          throw SearchExhaustedError("shortest word found has " + std::to_string(w.letters.size()) +
                                     " letters, above the cap of " + std::to_string(cfg.max_letters));
        }
        return w;
      }
      if (!grow() && scanned_all) {
        throw SearchExhaustedError("search table exhausted (" + std::to_string(table.size()) +
                                   " entries) before reaching eps " + std::to_string(eps));
      }
    }
  }
};

Su2Searcher::Su2Searcher(Su2SearchConfig cfg) : impl_(std::make_unique<Impl>()) { impl_->cfg = cfg; }
Su2Searcher::~Su2Searcher() = default;
Su2Searcher::Su2Searcher(Su2Searcher&&) noexcept = default;
Su2Searcher& Su2Searcher::operator=(Su2Searcher&&) noexcept = default;

Su2Word Su2Searcher::search(const Su2& target, double eps) { return impl_->search(target, eps); }
std::size_t Su2Searcher::table_size() const { return impl_->table.size(); }

Su2Word su2_search(const Su2& target, double eps, const Su2SearchConfig& cfg) {
  Su2Searcher s(cfg);
  return s.search(target, eps);
}

}  // namespace mgs
