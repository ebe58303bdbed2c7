#include <map>

#include "mgs/errors.hpp"
#include "mgs/satenc.hpp"

namespace mgs {

DepthSearchResult search_depth(const TransferMatrix& q, int d_max, const SolverConfig& cfg, const EncodeOptions& opt) {
  const int k = static_cast<int>(q.k_max());
  if (d_max < k) throw RangeError("d_max " + std::to_string(d_max) + " is below k_max " + std::to_string(k));

  DepthSearchResult res;
  std::map<int, Verdict> known;
  auto probe = [&](int d) -> Verdict {
    if (d < 0) return Verdict::Unsat;
    if (auto it = known.find(d); it != known.end()) return it->second;
    CnfInstance inst = encode(q, d, opt);
    SolveResult r = solve(inst, cfg);
    if (r.verdict == Verdict::Sat) {
      Circuit c = decode(inst, r.model, q);
      if (!res.upper || d < *res.upper) {
        res.upper = d;
        res.circuit = std::move(c);
      }
    }
    known[d] = r.verdict;
    res.probes.push_back({d, r.verdict, r.seconds});
    return r.verdict;
  };

  if (probe(0) == Verdict::Sat) {
    res.optimal_d = 0;
    res.lower = 0;
    return res;
  }
  for (int d = 1; d < k; ++d) known[d] = Verdict::Unsat;  // scale bound, no probe needed

  // SAT at d implies SAT at d + 2, so "SAT at d or d - 1" is monotone in d.
  // Binary search for the smallest depth where it holds.
  auto holds = [&](int d) -> std::optional<bool> {
    const Verdict a = probe(d);
    if (a == Verdict::Sat) return true;
    const Verdict b = probe(d - 1);
    if (b == Verdict::Sat) return true;
    if (a == Verdict::Unknown || b == Verdict::Unknown) return std::nullopt;
    return false;
  };

  // A false predicate at d proves every depth up to d UNSAT.
  int lo = std::max(k, 1), hi = d_max;
  res.lower = lo;
  bool exact = true;
  std::optional<int> first_true;
  while (lo <= hi) {
    const int mid = lo + (hi - lo) / 2;
    auto h = holds(mid);
    if (h && *h) {
      first_true = mid;
      hi = mid - 1;
    } else {
      if (h) res.lower = std::max(res.lower, mid + 1);
      else exact = false;
      lo = mid + 1;
    }
  }
  if (first_true && exact) res.optimal_d = *first_true;
  return res;
}

}  // namespace mgs
