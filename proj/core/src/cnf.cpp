#include <ostream>
#include <sstream>

#include "mgs/errors.hpp"
#include "mgs/satenc.hpp"

namespace mgs {

std::vector<GeneratorId> encoder_generators(int n) {
  std::vector<GeneratorId> gens;
  for (int q = 1; q <= n; ++q) {
    for (GateKind k : {GateKind::Ttil, GateKind::TtilInv, GateKind::Stil, GateKind::StilInv}) gens.push_back({k, q});
  }
  for (int b = 1; b < n; ++b) {
    gens.push_back({GateKind::Rtil, b});
    gens.push_back({GateKind::RtilInv, b});
  }
  return gens;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Sat: return "SAT";
    case Verdict::Unsat: return "UNSAT";
    case Verdict::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

namespace {

void write_clause(std::ostream& os, const std::vector<int>& c) {
  for (int lit : c) os << lit << ' ';
  os << "0\n";
}

}  // namespace

void write_dimacs(std::ostream& os, const CnfInstance& inst) {
  os << "p cnf " << inst.num_vars << ' ' << inst.clauses.size() << '\n';
  for (const auto& c : inst.clauses) write_clause(os, c);
}

void write_wcnf(std::ostream& os, const WcnfInstance& inst) {
  const auto top = inst.top();
  os << "p wcnf " << inst.hard.num_vars << ' ' << inst.hard.clauses.size() + inst.soft.size() << ' ' << top << '\n';
  for (const auto& c : inst.hard.clauses) {
    os << top << ' ';
    write_clause(os, c);
  }
  for (int lit : inst.soft) os << "1 " << lit << " 0\n";
}

std::string emit_dimacs(const CnfInstance& inst) {
  std::ostringstream os;
  write_dimacs(os, inst);
  return os.str();
}

std::string emit_wcnf(const WcnfInstance& inst) {
  std::ostringstream os;
  write_wcnf(os, inst);
  return os.str();
}

namespace {

Circuit read_layers(const CnfInstance& inst, const std::vector<bool>& model) {
  Circuit c;
  c.n = inst.n;
  c.provenance = "sat";
  for (const auto& layer : inst.selectors) {
    std::vector<GeneratorId> gates;
    for (std::size_t j = 0; j < layer.size(); ++j) {
      const auto v = static_cast<std::size_t>(layer[j]);
      if (v >= model.size()) throw VerificationError("model is shorter than the selector block");
      if (model[v]) gates.push_back(inst.generators[j]);
    }
    if (gates.empty()) throw VerificationError("model leaves a layer empty");
    c.layers.push_back(std::move(gates));
  }
  if (!c.layers_disjoint()) throw VerificationError("model puts overlapping gates in one layer");
  return c;
}

}  // namespace

Circuit decode(const CnfInstance& inst, const std::vector<bool>& model, const TransferMatrix& target) {
  Circuit c = read_layers(inst, model);
  if (eval_circuit(c) != target) throw VerificationError("decoded circuit does not reproduce the target");
  return c;
}

Circuit decode_stateprep(const CnfInstance& inst, const std::vector<bool>& model, const TransferMatrix& gamma) {
  Circuit c = read_layers(inst, model);
  TransferMatrix w = eval_circuit(c);
  if (w * vacuum_covariance(inst.n) * w.transpose() != gamma) {
    throw VerificationError("decoded circuit does not prepare the target covariance");
  }
  return c;
}

}  // namespace mgs
