#include <cmath>
#include <cstdio>
#include <numbers>

#include "mgs/approx.hpp"
#include "mgs/errors.hpp"

namespace mgs {

Circuit map_word(const Su2Word& word, const PlanarRotation& rot, int n) {
  if (n < 1) throw RangeError("map_word needs n >= 1");
  if (rot.plane < 1 || rot.plane >= 2 * n) throw RangeError("rotation plane out of range");
  int q = 0, helper = 0;
  if (rot.plane % 2 == 1) {
    q = (rot.plane + 1) / 2;
    helper = q < n ? q + 1 : q - 1;
  } else {
    q = rot.plane / 2;
    helper = q + 1;
  }
  const int bond = std::min(q, helper);
  std::vector<GeneratorId> gates;
  // Letters multiply left to right, so the last letter acts first.
  for (auto it = word.letters.rbegin(); it != word.letters.rend(); ++it) {
    switch (*it) {
      case Letter::T: gates.push_back({GateKind::Ttil, q}); break;
      case Letter::Tinv: gates.push_back({GateKind::TtilInv, q}); break;
      case Letter::W:
      case Letter::Winv:
        if (helper < 1) throw RangeError("word needs a helper qubit but n = 1");
        if (*it == Letter::W) {
          gates.push_back({GateKind::Stil, q});
          gates.push_back({GateKind::Stil, q});
          gates.push_back({GateKind::Rtil, bond});
        } else {
          gates.push_back({GateKind::RtilInv, bond});
          gates.push_back({GateKind::StilInv, q});
          gates.push_back({GateKind::StilInv, q});
        }
        break;
    }
  }
  return Circuit::from_gates(n, gates, "approx");
}

std::string ledger_csv_header() { return "n,m,eps_budget,eps_loc,eps_glob,rel_gap"; }

std::string ledger_csv_row(const LedgerRow& row) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d,%d,%.10g,%.10g,%.10g,%.10g", row.n, row.m, row.eps_budget, row.eps_loc,
                row.eps_glob, row.rel_gap);
  return buf;
}

ApproxResult approx_synthesize(const Eigen::MatrixXd& qf, double eps_total, const ApproxConfig& cfg) {
  Su2Searcher searcher(cfg.search);
  return approx_synthesize(qf, eps_total, searcher, cfg);
}

ApproxResult approx_synthesize(const Eigen::MatrixXd& qf, double eps_total, Su2Searcher& searcher,
                               const ApproxConfig& cfg) {
  if (!(eps_total > 0)) throw DomainError("eps_total must be positive");
  const int N = static_cast<int>(qf.rows());
  const int n = N / 2;
  ApproxResult res;
  res.rotations = givens_decompose(qf);
  const int m = static_cast<int>(res.rotations.size());
  res.ledger.n = n;
  res.ledger.m = m;
  res.ledger.eps_budget = eps_total;

  std::vector<GeneratorId> gates;
  const double eps_each = m > 0 ? eps_total / m : eps_total;
  for (const auto& rot : res.rotations) {
    Su2 target = rot.plane % 2 == 1 ? su2_rz(rot.theta) : su2_rx(rot.theta);
    Su2Word w = searcher.search(target, eps_each);
    res.per_rotation_errors.push_back(w.error);
    res.ledger.eps_loc += w.error;
    Circuit part = map_word(w, rot, n);
    auto flat = part.flatten();
    gates.insert(gates.end(), flat.begin(), flat.end());
  }
  res.circuit = Circuit::from_gates(n, gates, "approx");

  res.eps_so = op_norm(eval_circuit(res.circuit).to_float() - qf);
  if (n <= cfg.qubit_cap) {
    DenseUnitary compiled = circuit_unitary(n, gates, cfg.qubit_cap);
    DenseUnitary ideal = rotations_unitary(n, res.rotations, cfg.qubit_cap);
    res.ledger.eps_glob = adjoint_dist(compiled, ideal);
    res.global_checked = true;
  } else {
    res.ledger.eps_glob = std::nan("");
  }
  res.ledger.rel_gap = res.ledger.eps_loc > 0 ? (res.ledger.eps_loc - res.ledger.eps_glob) / res.ledger.eps_loc : 0.0;
  return res;
}

}  // namespace mgs
