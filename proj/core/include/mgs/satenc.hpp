#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mgs/exact.hpp"
#include "mgs/somat.hpp"

namespace mgs {

// Generator list used by the encoder, in a fixed order: for each qubit
// Ttil, TtilInv, Stil, StilInv, then for each bond Rtil, RtilInv.
std::vector<GeneratorId> encoder_generators(int n);

struct CnfInstance {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;

  int n = 0;
  int depth = 0;
  bool parallel = true;
  std::vector<GeneratorId> generators;
  // selectors[i][j] is the variable of generator j in layer i (0-based).
  std::vector<std::vector<int>> selectors;
  // Variables above the selector block: matrix bits, carries, products.
  int aux_first = 0;
  int aux_last = 0;
  std::vector<int> layer_width;  // two's-complement width of each layer state

  // Set when the instance was decided without encoding (d < k_max, or d = 0).
  bool trivial = false;
  std::string note;
};

struct WcnfInstance {
  CnfInstance hard;
  std::vector<int> soft;  // unit-weight soft clauses, one literal each

  std::uint64_t top() const { return soft.size() + 1; }
};

struct EncodeOptions {
  bool parallel = true;
  // Upper limit on the estimated variable count.
  std::uint64_t max_vars = 40'000'000;
};

CnfInstance encode(const TransferMatrix& q, int d, const EncodeOptions& opt = {});
WcnfInstance encode_maxsat(const TransferMatrix& q, int d, const EncodeOptions& opt = {});
// Circuits of depth d with W Gamma0 W^T = gamma.
CnfInstance encode_stateprep(const TransferMatrix& gamma, int d, const EncodeOptions& opt = {});

void write_dimacs(std::ostream& os, const CnfInstance& inst);
void write_wcnf(std::ostream& os, const WcnfInstance& inst);
std::string emit_dimacs(const CnfInstance& inst);
std::string emit_wcnf(const WcnfInstance& inst);

// Reads selectors off a model (model[v] is the value of variable v, index 0
// unused) and checks the product against the target.
Circuit decode(const CnfInstance& inst, const std::vector<bool>& model, const TransferMatrix& target);
Circuit decode_stateprep(const CnfInstance& inst, const std::vector<bool>& model, const TransferMatrix& gamma);

enum class Verdict { Sat, Unsat, Unknown };
std::string verdict_name(Verdict v);

struct SolveResult {
  Verdict verdict = Verdict::Unknown;
  std::vector<bool> model;
  std::optional<std::uint64_t> cost;
  std::string solver;
  double seconds = 0;
};

struct SolverConfig {
  // Empty path selects the builtin solver.
  std::string sat_path;
  std::string maxsat_path;
  double timeout_s = 0;  // 0 disables the limit

  // Fills empty paths from MGS_SAT_SOLVER and MGS_MAXSAT_SOLVER.
  SolverConfig with_env() const;
};

SolveResult solve(const CnfInstance& inst, const SolverConfig& cfg = {});
SolveResult solve_maxsat(const WcnfInstance& inst, const SolverConfig& cfg = {});

// Builtin CDCL solver on raw clauses.  `deadline` bounds the wall time.
SolveResult solve_builtin(int num_vars, const std::vector<std::vector<int>>& clauses,
                          std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt);
// Linear SAT-UNSAT search with a totalizer over the soft literals.
SolveResult solve_maxsat_builtin(const WcnfInstance& inst,
                                 std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt);

// Runs an external solver on an instance file and parses its s/v/o output.
SolveResult run_external(const std::string& path, const std::string& instance_text, bool maxsat, double timeout_s);

struct DepthProbe {
  int depth = 0;
  Verdict verdict = Verdict::Unknown;
  double seconds = 0;
};

struct DepthSearchResult {
  std::optional<int> optimal_d;
  int lower = 0;                 // every depth below is proven UNSAT
  std::optional<int> upper;      // smallest depth found SAT
  std::optional<Circuit> circuit;
  std::vector<DepthProbe> probes;
};

DepthSearchResult search_depth(const TransferMatrix& q, int d_max, const SolverConfig& cfg = {},
                               const EncodeOptions& opt = {});

}  // namespace mgs
