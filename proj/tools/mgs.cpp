#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>

#include "mgs/approx.hpp"
#include "mgs/errors.hpp"
#include "mgs/exact.hpp"
#include "mgs/io.hpp"
#include "mgs/satenc.hpp"
#include "mgs/spinrep.hpp"
#include "mgs/targets.hpp"

namespace {

enum Exit { kOk = 0, kIo = 1, kDomain = 2, kUnknown = 3, kNegative = 4, kExhausted = 5 };

struct Options {
  std::string input, input2, output, ledger, emit;
  std::string sat_solver, maxsat_solver;
  std::optional<int> depth, search;
  bool maxsat = false;
  bool serial = false;
  double timeout = 0;
  double eps = 0.1;
  double tol = 1e-9;
  std::optional<int> random_n;
  std::uint64_t seed = 1;
  int qubit_cap = mgs::kDefaultQubitCap;
  std::size_t max_letters = mgs::Su2SearchConfig{}.max_letters;
  double floor = mgs::Su2SearchConfig{}.eps_floor;
  std::string target_kind;
  std::vector<long> target_args;
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    mgs::write_file(path, text);
  }
}

// Report lines go to stderr so stdout stays a clean artifact stream.
template <typename T>
void report(const std::string& key, const T& value) {
  std::cerr << key << ": " << value << '\n';
}

mgs::TransferMatrix load_matrix(const std::string& path) { return mgs::matrix_from_json(mgs::read_file(path)); }

int cmd_exact(const Options& o) {
  mgs::TransferMatrix q = load_matrix(o.input);
  mgs::SynthesisReport rep = mgs::synthesize(q);
  const bool ok = mgs::eval_circuit(rep.circuit) == q;
  if (!ok) throw mgs::VerificationError("synthesized circuit does not reproduce the target");
  report("k_max", rep.k_max_in);
  report("depth", rep.circuit.depth());
  report("t_count", rep.circuit.t_count());
  report("t_depth", rep.circuit.t_depth());
  report("clifford_count", rep.circuit.clifford_count());
  report("t_count_bound", rep.nt_bound.get_str());
  report("clifford_count_bound", rep.nc_bound.get_str());
  report("verified", "yes");
  emit(o.output, mgs::circuit_to_json(rep.circuit));
  return kOk;
}

int cmd_sat(const Options& o) {
  mgs::TransferMatrix q = load_matrix(o.input);
  if (!mgs::is_special_orthogonal(q)) throw mgs::NotOrthogonalError("target is not special orthogonal");
  q.mark_verified(true);
  mgs::SolverConfig cfg;
  cfg.sat_path = o.sat_solver;
  cfg.maxsat_path = o.maxsat_solver;
  cfg.timeout_s = o.timeout;
  mgs::EncodeOptions enc;
  enc.parallel = !o.serial;
  report("k_max", q.k_max());

  int depth = 0;
  std::optional<mgs::Circuit> circuit;
  if (o.search) {
    mgs::DepthSearchResult res = mgs::search_depth(q, *o.search, cfg, enc);
    for (const auto& p : res.probes) {
      std::cerr << "depth " << p.depth << ": " << mgs::verdict_name(p.verdict) << " (" << p.seconds << " s)\n";
    }
    report("lower_bound", res.lower);
    if (res.upper) report("upper_bound", *res.upper);
    if (!res.upper) {
      const bool unknown = std::any_of(res.probes.begin(), res.probes.end(),
                                       [](const auto& p) { return p.verdict == mgs::Verdict::Unknown; });
      return unknown ? kUnknown : kNegative;
    }
    report("optimal", res.optimal_d ? "proven" : "not proven");
    depth = *res.upper;
    circuit = res.circuit;
  } else {
    depth = *o.depth;
    mgs::CnfInstance inst = mgs::encode(q, depth, enc);
    if (!o.emit.empty()) mgs::write_file(o.emit, mgs::emit_dimacs(inst));
    report("variables", inst.num_vars);
    report("clauses", inst.clauses.size());
    mgs::SolveResult r = mgs::solve(inst, cfg);
    std::cerr << "depth " << depth << ": " << mgs::verdict_name(r.verdict) << " (" << r.seconds << " s)\n";
    if (r.verdict == mgs::Verdict::Unsat) return kNegative;
    if (r.verdict == mgs::Verdict::Unknown) return kUnknown;
    circuit = mgs::decode(inst, r.model, q);
  }

  if (o.maxsat) {
    mgs::WcnfInstance w = mgs::encode_maxsat(q, depth, enc);
    mgs::SolveResult r = mgs::solve_maxsat(w, cfg);
    if (r.verdict == mgs::Verdict::Sat) {
      circuit = mgs::decode(w.hard, r.model, q);
      report("maxsat", r.verdict == mgs::Verdict::Sat ? "optimum" : "incomplete");
    } else {
      report("maxsat", mgs::verdict_name(r.verdict));
    }
  }
  report("depth", circuit->depth());
  report("t_count", circuit->t_count());
  report("verified", "yes");
  emit(o.output, mgs::circuit_to_json(*circuit));
  return kOk;
}

int cmd_approx(const Options& o) {
  Eigen::MatrixXd target;
  if (o.random_n) {
    target = mgs::random_haar_so(*o.random_n, o.seed);
  } else {
    target = mgs::float_matrix_from_json(mgs::read_file(o.input));
  }
  mgs::ApproxConfig cfg;
  cfg.qubit_cap = o.qubit_cap;
  cfg.search.max_letters = o.max_letters;
  cfg.search.eps_floor = o.floor;
  mgs::ApproxResult res = mgs::approx_synthesize(target, o.eps, cfg);
  if (res.global_checked && !(res.ledger.eps_glob <= o.eps * (1 + 1e-6))) {
    throw mgs::VerificationError("global error exceeds the requested budget");
  }
  report("rotations", res.rotations.size());
  report("t_count", res.circuit.t_count());
  report("depth", res.circuit.depth());
  report("eps_loc", res.ledger.eps_loc);
  report("eps_glob", res.global_checked ? std::to_string(res.ledger.eps_glob) : std::string("not computed"));
  report("eps_so", res.eps_so);
  std::string csv = mgs::ledger_csv_header() + "\n" + mgs::ledger_csv_row(res.ledger) + "\n";
  if (!o.ledger.empty()) mgs::write_file(o.ledger, csv);
  emit(o.output, mgs::circuit_to_json(res.circuit));
  return kOk;
}

int cmd_verify(const Options& o) {
  mgs::Circuit c = mgs::circuit_from_json(mgs::read_file(o.input));
  const std::string text = mgs::read_file(o.input2);
  if (mgs::json_is_ring_matrix(text)) {
    mgs::TransferMatrix q = mgs::matrix_from_json(text);
    if (q.n() != c.n) throw mgs::DimensionError("circuit and matrix have different qubit counts");
    const bool ok = mgs::eval_circuit(c) == q;
    std::cout << (ok ? "match" : "mismatch") << '\n';
    return ok ? kOk : kNegative;
  }
  Eigen::MatrixXd qf = mgs::float_matrix_from_json(text);
  if (qf.rows() != 2 * c.n) throw mgs::DimensionError("circuit and matrix have different qubit counts");
  const double err = mgs::op_norm(mgs::eval_circuit(c).to_float() - qf);
  std::cout << (err <= o.tol ? "match" : "mismatch") << " (operator-norm distance " << err << ")\n";
  return err <= o.tol ? kOk : kNegative;
}

int cmd_analyze(const Options& o) {
  const std::string text = mgs::read_file(o.input);
  if (mgs::json_is_ring_matrix(text)) {
    mgs::TransferMatrix q = mgs::matrix_from_json(text);
    std::cout << "kind: matrix\n";
    std::cout << "n: " << q.n() << '\n';
    std::cout << "k_max: " << q.k_max() << '\n';
    const bool so = mgs::is_special_orthogonal(q);
    std::cout << "special_orthogonal: " << (so ? "yes" : "no") << '\n';
    if (so) {
      auto b = mgs::gate_count_bounds(q.n(), q.k_max());
      std::cout << "t_depth_lower_bound: " << mgs::t_depth_lower_bound(q) << '\n';
      std::cout << "t_count_bound: " << b.nt_bound.get_str() << '\n';
      std::cout << "clifford_count_bound: " << b.nc_bound.get_str() << '\n';
    }
    return kOk;
  }
  mgs::Circuit c = mgs::circuit_from_json(text);
  std::cout << "kind: circuit\n";
  std::cout << "n: " << c.n << '\n';
  std::cout << "depth: " << c.depth() << '\n';
  std::cout << "t_count: " << c.t_count() << '\n';
  std::cout << "t_depth: " << c.t_depth() << '\n';
  std::cout << "clifford_count: " << c.clifford_count() << '\n';
  std::cout << "k_max: " << mgs::eval_circuit(c).k_max() << '\n';
  if (c.n <= o.qubit_cap) {
    mgs::DenseUnitary u = mgs::circuit_unitary(c.n, c.flatten(), o.qubit_cap);
    Eigen::VectorXcd psi = u.m * mgs::zero_state(c.n);
    std::printf("stabilizer_entropy: %.12g\n", mgs::stabilizer_entropy(psi));
    if (c.n == 2) std::printf("operator_entanglement: %.12g\n", mgs::operator_entanglement(u));
  }
  return kOk;
}

int cmd_target(const Options& o) {
  const auto& a = o.target_args;
  auto need = [&](std::size_t k, const char* usage) {
    if (a.size() != k) throw mgs::RangeError(std::string("usage: mgs target ") + usage);
  };
  if (o.target_kind == "xx") {
    need(1, "xx N");
    emit(o.output, mgs::matrix_to_json(mgs::xx_target(static_cast<int>(a[0])).q_dis));
  } else if (o.target_kind == "random") {
    need(3, "random N T_BUDGET SEED");
    emit(o.output, mgs::matrix_to_json(mgs::random_ring_target(static_cast<int>(a[0]), static_cast<int>(a[1]),
                                                               static_cast<std::uint64_t>(a[2]))));
  } else if (o.target_kind == "haar") {
    need(2, "haar N SEED");
    emit(o.output, mgs::float_matrix_to_json(mgs::random_haar_so(static_cast<int>(a[0]), static_cast<std::uint64_t>(a[1]))));
  } else {
    throw mgs::RangeError("unknown target kind \"" + o.target_kind + "\"; expected xx, random or haar");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matchgate circuit synthesis over the Clifford+T matchgate set"};
  app.require_subcommand(1);
  Options o;

  auto* exact = app.add_subcommand("exact", "Exact synthesis of a ring matrix");
  exact->add_option("matrix", o.input, "Matrix JSON")->required();
  exact->add_option("-o,--output", o.output, "Circuit JSON output (default stdout)");

  auto* sat = app.add_subcommand("sat", "Depth-constrained synthesis through SAT");
  sat->add_option("matrix", o.input, "Matrix JSON")->required();
  auto* depth = sat->add_option("--depth", o.depth, "Solve at this depth");
  auto* search = sat->add_option("--search", o.search, "Search for the optimal depth up to this bound");
  depth->excludes(search);
  sat->add_flag("--maxsat", o.maxsat, "Minimize T-count at the chosen depth");
  sat->add_flag("--serial", o.serial, "One gate per layer instead of parallel layers");
  sat->add_option("--solver", o.sat_solver, "External SAT solver executable");
  sat->add_option("--maxsat-solver", o.maxsat_solver, "External MAX-SAT solver executable");
  sat->add_option("--timeout", o.timeout, "Per-call time limit in seconds (0 = none)")->check(CLI::NonNegativeNumber);
  sat->add_option("--emit", o.emit, "Write the DIMACS instance here (with --depth)");
  sat->add_option("-o,--output", o.output, "Circuit JSON output (default stdout)");

  auto* approx = app.add_subcommand("approx", "Approximate synthesis of an orthogonal matrix");
  approx->add_option("matrix", o.input, "Matrix JSON (ring or floating)");
  approx->add_option("--random", o.random_n, "Use a Haar-random target on this many qubits")->check(CLI::PositiveNumber);
  approx->add_option("--seed", o.seed, "Seed for --random");
  approx->add_option("--eps", o.eps, "Total error budget")->check(CLI::PositiveNumber);
  approx->add_option("--max-letters", o.max_letters, "Word length cap of the SU(2) search");
  approx->add_option("--floor", o.floor, "Smallest per-rotation budget the search accepts");
  approx->add_option("--qubit-cap", o.qubit_cap, "Largest n for dense unitary checks");
  approx->add_option("--ledger", o.ledger, "Write the error ledger CSV here");
  approx->add_option("-o,--output", o.output, "Circuit JSON output (default stdout)");

  auto* verify = app.add_subcommand("verify", "Check a circuit against a matrix");
  verify->add_option("circuit", o.input, "Circuit JSON")->required();
  verify->add_option("matrix", o.input2, "Matrix JSON")->required();
  verify->add_option("--tol", o.tol, "Tolerance for floating targets");

  auto* analyze = app.add_subcommand("analyze", "Report metrics of a circuit or matrix");
  analyze->add_option("file", o.input, "Circuit or matrix JSON")->required();
  analyze->add_option("--qubit-cap", o.qubit_cap, "Largest n for dense unitary metrics");

  auto* target = app.add_subcommand("target", "Generate a target matrix");
  target->add_option("kind", o.target_kind, "xx, random or haar")->required();
  target->add_option("args", o.target_args, "Kind-specific integers");
  target->add_option("-o,--output", o.output, "Matrix JSON output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kIo;
  }

  try {
    if (*exact) return cmd_exact(o);
    if (*sat) {
      if (!o.depth && !o.search) throw mgs::RangeError("sat needs --depth or --search");
      return cmd_sat(o);
    }
    if (*approx) {
      if (!o.random_n && o.input.empty()) throw mgs::RangeError("approx needs a matrix file or --random");
      return cmd_approx(o);
    }
    if (*verify) return cmd_verify(o);
    if (*analyze) return cmd_analyze(o);
    if (*target) return cmd_target(o);
  } catch (const mgs::SearchExhaustedError& e) {
    std::cerr << "search exhausted: " << e.what() << '\n';
    return kExhausted;
  } catch (const mgs::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomain;
  } catch (const mgs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
  return kIo;
}
