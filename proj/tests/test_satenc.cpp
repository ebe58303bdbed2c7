#include <doctest.h>

#include <sys/stat.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "mgs/errors.hpp"
#include "mgs/io.hpp"
#include "mgs/satenc.hpp"
#include "mgs/targets.hpp"

using namespace mgs;

namespace {

TransferMatrix ttil() { return generator(1, {GateKind::Ttil, 1}); }

bool satisfies(const std::vector<std::vector<int>>& clauses, const std::vector<bool>& model) {
  for (const auto& c : clauses) {
    bool ok = false;
    for (int l : c) ok = ok || (model[static_cast<std::size_t>(std::abs(l))] == (l > 0));
    if (!ok) return false;
  }
  return true;
}

// Exhaustive satisfiability over at most ~16 variables.
bool brute_sat(int nv, const std::vector<std::vector<int>>& clauses) {
  std::vector<bool> m(static_cast<std::size_t>(nv) + 1);
  for (unsigned long x = 0; x < (1UL << nv); ++x) {
    for (int v = 1; v <= nv; ++v) m[static_cast<std::size_t>(v)] = (x >> (v - 1)) & 1;
    if (satisfies(clauses, m)) return true;
  }
  return false;
}

std::vector<std::vector<int>> random_3sat(std::mt19937_64& rng, int nv, int nc) {
  std::vector<std::vector<int>> cls;
  for (int i = 0; i < nc; ++i) {
    std::vector<int> c;
    for (int j = 0; j < 3; ++j) {
      int v = 1 + static_cast<int>(rng() % static_cast<unsigned>(nv));
      c.push_back(rng() % 2 ? v : -v);
    }
    cls.push_back(c);
  }
  return cls;
}

// Random circuit of exactly d non-empty layers with disjoint support.
Circuit planted_circuit(std::mt19937_64& rng, int n, int d) {
  auto gens = encoder_generators(n);
  Circuit c;
  c.n = n;
  while (c.depth() < d) {
    std::vector<GeneratorId> layer;
    std::vector<bool> used(static_cast<std::size_t>(n) + 2, false);
    const int tries = 1 + static_cast<int>(rng() % 3);
    for (int t = 0; t < tries; ++t) {
      GeneratorId g = gens[rng() % gens.size()];
      bool free = true;
      for (int q = g.first_qubit(); q <= g.last_qubit(); ++q) free = free && !used[static_cast<std::size_t>(q)];
      if (!free) continue;
      for (int q = g.first_qubit(); q <= g.last_qubit(); ++q) used[static_cast<std::size_t>(q)] = true;
      layer.push_back(g);
    }
    c.layers.push_back(layer);
  }
  return c;
}

std::string write_script(const std::string& name, const std::string& body) {
  auto dir = std::filesystem::temp_directory_path() / "mgs_test_solvers";
  std::filesystem::create_directories(dir);
  auto path = dir / name;
  std::ofstream(path) << "#!/bin/sh\n" << body;
  chmod(path.c_str(), 0755);
  return path.string();
}

}  // namespace

TEST_CASE("generator order") {
  auto g = encoder_generators(2);
  REQUIRE(g.size() == 10);
  CHECK(g[0] == GeneratorId{GateKind::Ttil, 1});
  CHECK(g[3] == GeneratorId{GateKind::StilInv, 1});
  CHECK(g[4] == GeneratorId{GateKind::Ttil, 2});
  CHECK(g[8] == GeneratorId{GateKind::Rtil, 1});
  CHECK(g[9] == GeneratorId{GateKind::RtilInv, 1});
}

TEST_CASE("single T gate") {
  CnfInstance inst = encode(ttil(), 1);
  SolveResult r = solve(inst);
  REQUIRE(r.verdict == Verdict::Sat);
  Circuit c = decode(inst, r.model, ttil());
  REQUIRE(c.depth() == 1);
  CHECK(c.layers[0] == std::vector<GeneratorId>{{GateKind::Ttil, 1}});

  CnfInstance zero = encode(ttil(), 0);
  CHECK(zero.trivial);
  CHECK(solve(zero).verdict == Verdict::Unsat);

  for (const auto& cl : inst.clauses) CHECK_FALSE(cl.empty());
}

TEST_CASE("identity target") {
  CnfInstance d0 = encode(TransferMatrix::identity(2), 0);
  CHECK(emit_dimacs(d0) == "p cnf 0 0\n");
  CHECK(solve(d0).verdict == Verdict::Sat);
  CHECK(solve(encode(TransferMatrix::identity(1), 1)).verdict == Verdict::Unsat);

  CnfInstance d2 = encode(TransferMatrix::identity(1), 2);
  SolveResult r = solve(d2);
  REQUIRE(r.verdict == Verdict::Sat);
  Circuit c = decode(d2, r.model, TransferMatrix::identity(1));
  CHECK(c.depth() == 2);
  CHECK(eval_circuit(c) == TransferMatrix::identity(1));
}

TEST_CASE("tampered model is caught") {
  CnfInstance inst = encode(ttil(), 1);
  SolveResult r = solve(inst);
  REQUIRE(r.verdict == Verdict::Sat);
  std::vector<bool> m = r.model;
  m[static_cast<std::size_t>(inst.selectors[0][0])] = false;
  m[static_cast<std::size_t>(inst.selectors[0][1])] = true;
  CHECK_THROWS_AS(decode(inst, m, ttil()), VerificationError);
  m[static_cast<std::size_t>(inst.selectors[0][1])] = false;
  CHECK_THROWS_AS(decode(inst, m, ttil()), VerificationError);
}

TEST_CASE("depth below the denominator exponent is unsatisfiable") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    TransferMatrix q = random_ring_target(2, 3, seed);
    for (int d = 0; d < static_cast<int>(q.k_max()); ++d) CHECK(solve(encode(q, d)).verdict == Verdict::Unsat);
  }
}

TEST_CASE("planted depth targets are found and verified") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 12; ++trial) {
    const int d0 = 1 + trial % 4;
    Circuit planted = planted_circuit(rng, 2, d0);
    TransferMatrix q = eval_circuit(planted);
    CnfInstance inst = encode(q, d0);
    SolveResult r = solve(inst);
    REQUIRE(r.verdict == Verdict::Sat);
    Circuit c = decode(inst, r.model, q);
    CHECK(eval_circuit(c) == q);
    CHECK(c.t_depth() >= static_cast<int>(q.k_max()));
    CHECK(c.depth() == d0);
  }
}

TEST_CASE("padding by two layers keeps satisfiability") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 4; ++trial) {
    Circuit planted = planted_circuit(rng, 2, 1 + trial % 2);
    TransferMatrix q = eval_circuit(planted);
    CHECK(solve(encode(q, planted.depth() + 2)).verdict == Verdict::Sat);
  }
}

TEST_CASE("serial layers") {
  EncodeOptions serial;
  serial.parallel = false;
  TransferMatrix q = generator(2, {GateKind::Ttil, 1}) * generator(2, {GateKind::Ttil, 2});
  CHECK(solve(encode(q, 1)).verdict == Verdict::Sat);
  CHECK(solve(encode(q, 1, serial)).verdict == Verdict::Unsat);
  CnfInstance two = encode(q, 2, serial);
  SolveResult r = solve(two);
  REQUIRE(r.verdict == Verdict::Sat);
  CHECK(decode(two, r.model, q).gate_count() == 2);
}

TEST_CASE("encoding rejects bad input") {
  TransferMatrix refl = TransferMatrix::identity(1);
  refl.set(0, 0, -1);
  CHECK_THROWS_AS(encode(refl, 1), DomainError);
  CHECK_THROWS_AS(encode(ttil(), -1), DomainError);
  EncodeOptions tiny;
  tiny.max_vars = 10;
  CHECK_THROWS_AS(encode(generator(3, {GateKind::Ttil, 2}), 3, tiny), CapacityError);
}

TEST_CASE("DIMACS emission") {
  CnfInstance unit;
  unit.num_vars = 1;
  unit.clauses = {{1}};
  CHECK(emit_dimacs(unit) == "p cnf 1 1\n1 0\n");
  CnfInstance empty;
  CHECK(emit_dimacs(empty) == "p cnf 0 0\n");

  std::string golden = read_file(std::string(MGS_TEST_DATA_DIR) + "/golden/ttil_n1_d1.cnf");
  CHECK(emit_dimacs(encode(ttil(), 1)) == golden);
  CHECK(emit_dimacs(encode(ttil(), 1)) == emit_dimacs(encode(ttil(), 1)));
}

TEST_CASE("WCNF emission") {
  WcnfInstance w = encode_maxsat(ttil(), 1);
  CnfInstance c = encode(ttil(), 1);
  CHECK(w.hard.clauses == c.clauses);
  CHECK(w.soft.size() == 2);
  CHECK(w.top() == 3);
  std::string text = emit_wcnf(w);
  CHECK(text.rfind("p wcnf " + std::to_string(c.num_vars) + " " + std::to_string(c.clauses.size() + 2) + " 3\n", 0) == 0);
  CHECK(text.find("\n1 -" + std::to_string(c.selectors[0][0]) + " 0\n") != std::string::npos);
}

TEST_CASE("builtin CDCL agrees with exhaustive search") {
  std::mt19937_64 rng(53);
  int sat = 0, unsat = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int nv = 3 + static_cast<int>(rng() % 10);
    const int nc = static_cast<int>(nv * (3 + rng() % 4));
    auto cls = random_3sat(rng, nv, nc);
    SolveResult r = solve_builtin(nv, cls);
    const bool expect = brute_sat(nv, cls);
    REQUIRE(r.verdict != Verdict::Unknown);
    CHECK((r.verdict == Verdict::Sat) == expect);
    if (r.verdict == Verdict::Sat) {
      CHECK(satisfies(cls, r.model));
      ++sat;
    } else {
      ++unsat;
    }
  }
  CHECK(sat > 20);
  CHECK(unsat > 20);
  CHECK(solve_builtin(1, {{1}}).verdict == Verdict::Sat);
  CHECK(solve_builtin(1, {{1}, {-1}}).verdict == Verdict::Unsat);
  CHECK(solve_builtin(0, {{}}).verdict == Verdict::Unsat);
}

TEST_CASE("builtin MaxSAT agrees with exhaustive search") {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 60; ++trial) {
    const int nv = 4 + static_cast<int>(rng() % 7);
    WcnfInstance w;
    w.hard.num_vars = nv;
    w.hard.clauses = random_3sat(rng, nv, nv * 2);
    for (int v = 1; v <= nv; ++v)
      if (rng() % 2) w.soft.push_back(rng() % 2 ? v : -v);
    std::optional<int> best;
    std::vector<bool> m(static_cast<std::size_t>(nv) + 1);
    for (unsigned long x = 0; x < (1UL << nv); ++x) {
      for (int v = 1; v <= nv; ++v) m[static_cast<std::size_t>(v)] = (x >> (v - 1)) & 1;
      if (!satisfies(w.hard.clauses, m)) continue;
      int cost = 0;
      for (int l : w.soft) cost += m[static_cast<std::size_t>(std::abs(l))] != (l > 0);
      if (!best || cost < *best) best = cost;
    }
    SolveResult r = solve_maxsat_builtin(w);
    if (!best) {
      CHECK(r.verdict == Verdict::Unsat);
      continue;
    }
    REQUIRE(r.verdict == Verdict::Sat);
    REQUIRE(r.cost.has_value());
    CHECK(static_cast<int>(*r.cost) == *best);
    CHECK(satisfies(w.hard.clauses, r.model));
  }
}

TEST_CASE("MaxSAT T-count on small targets") {
  SolveResult t = solve_maxsat(encode_maxsat(ttil(), 1));
  REQUIRE(t.cost.has_value());
  CHECK(*t.cost == 1);
  SolveResult s = solve_maxsat(encode_maxsat(generator(1, {GateKind::Stil, 1}), 1));
  REQUIRE(s.cost.has_value());
  CHECK(*s.cost == 0);
  SolveResult t3 = solve_maxsat(encode_maxsat(ttil(), 3));
  REQUIRE(t3.cost.has_value());
  CHECK(*t3.cost == 1);
}

TEST_CASE("depth search") {
  DepthSearchResult t = search_depth(ttil(), 4);
  REQUIRE(t.optimal_d.has_value());
  CHECK(*t.optimal_d == 1);
  REQUIRE(t.circuit.has_value());
  CHECK(eval_circuit(*t.circuit) == ttil());

  DepthSearchResult id = search_depth(TransferMatrix::identity(2), 3);
  REQUIRE(id.optimal_d.has_value());
  CHECK(*id.optimal_d == 0);

  TransferMatrix q = generator(2, {GateKind::Rtil, 1}) * generator(2, {GateKind::Ttil, 1});
  DepthSearchResult two = search_depth(q, 5);
  REQUIRE(two.optimal_d.has_value());
  CHECK(*two.optimal_d == 2);
  CHECK(two.lower == 2);
}

TEST_CASE("state preparation") {
  TransferMatrix g0 = vacuum_covariance(1);
  CHECK(solve(encode_stateprep(g0, 0)).verdict == Verdict::Sat);

  TransferMatrix s = generator(1, {GateKind::Stil, 1});
  TransferMatrix gamma = s * g0 * s.transpose();
  CnfInstance inst = encode_stateprep(gamma, 1);
  SolveResult r = solve(inst);
  REQUIRE(r.verdict == Verdict::Sat);
  Circuit c = decode_stateprep(inst, r.model, gamma);
  TransferMatrix w = eval_circuit(c);
  CHECK(w * g0 * w.transpose() == gamma);

  TransferMatrix q2 = eval_product(2, {{GateKind::Ttil, 1}, {GateKind::Rtil, 1}, {GateKind::Ttil, 2}});
  TransferMatrix g2 = q2 * vacuum_covariance(2) * q2.transpose();
  // T1 fixes the vacuum, so this is the state R1 then T2: one T-type gate
  // on top of a Clifford, which no single layer can produce.
  CHECK(g2.k_max() == 1);
  CHECK(solve(encode_stateprep(g2, 0)).verdict == Verdict::Unsat);
  CHECK(solve(encode_stateprep(g2, 1)).verdict == Verdict::Unsat);
  CnfInstance three = encode_stateprep(g2, 2);
  SolveResult r3 = solve(three);
  REQUIRE(r3.verdict == Verdict::Sat);
  TransferMatrix w3 = eval_circuit(decode_stateprep(three, r3.model, g2));
  CHECK(w3 * vacuum_covariance(2) * w3.transpose() == g2);

  CHECK_THROWS_AS(encode_stateprep(TransferMatrix::identity(1), 1), NotCovarianceError);
}

TEST_CASE("clause counts scale polynomially") {
  double c_max = 0;
  for (int n = 1; n <= 3; ++n)
    for (int d = 1; d <= 4; ++d) {
      CnfInstance inst = encode(TransferMatrix::identity(n), d);
      c_max = std::max(c_max, static_cast<double>(inst.clauses.size()) / (d * std::pow(n, 5)));
    }
  for (int d = 1; d <= 3; ++d) {
    CnfInstance inst = encode(TransferMatrix::identity(4), d);
    CHECK(static_cast<double>(inst.clauses.size()) <= c_max * d * std::pow(4, 5));
  }
}

TEST_CASE("external solver adapter") {
  const std::string sat = write_script("sat.sh", "echo 'c fake'\necho 's SATISFIABLE'\necho 'v 1 -2'\necho 'v 3 0'\n");
  const std::string unsat = write_script("unsat.sh", "echo 's UNSATISFIABLE'\nexit 20\n");
  const std::string slow = write_script("slow.sh", "sleep 20\necho 's SATISFIABLE'\n");
  const std::string broken = write_script("broken.sh", "echo 'garbage'\nexit 3\n");
  const std::string opt = write_script("opt.sh", "echo 'o 2'\necho 's OPTIMUM FOUND'\necho 'v 1 0'\n");

  SolveResult r = run_external(sat, "p cnf 3 1\n1 0\n", false, 5);
  CHECK(r.verdict == Verdict::Sat);
  REQUIRE(r.model.size() == 4);
  CHECK(r.model[1]);
  CHECK_FALSE(r.model[2]);
  CHECK(r.model[3]);

  CHECK(run_external(unsat, "p cnf 1 2\n1 0\n-1 0\n", false, 5).verdict == Verdict::Unsat);

  SolveResult t = run_external(slow, "p cnf 0 0\n", false, 0.3);
  CHECK(t.verdict == Verdict::Unknown);
  CHECK(t.seconds < 5);

  CHECK_THROWS_AS(run_external(broken, "p cnf 0 0\n", false, 5), SolverProcessError);

  SolveResult o = run_external(opt, "p wcnf 1 1 2\n1 -1 0\n", true, 5);
  CHECK(o.verdict == Verdict::Sat);
  REQUIRE(o.cost.has_value());
  CHECK(*o.cost == 2);

  SolverConfig cfg;
  cfg.sat_path = sat;
  CnfInstance unit;
  unit.num_vars = 5;
  unit.clauses = {{1}};
  SolveResult padded = solve(unit, cfg);
  CHECK(padded.model.size() == 6);

  CHECK_THROWS_AS(run_external("/nonexistent/solver", "p cnf 0 0\n", false, 5), SolverProcessError);
}

TEST_CASE("external model lines: binary-looking literals and bit strings") {
  const std::string lits = write_script("lits.sh", "echo 's SATISFIABLE'\necho 'v -1 10 -11 100 0'\n");
  SolveResult r = run_external(lits, "p cnf 100 0\n", false, 5);
  REQUIRE(r.model.size() == 101);
  CHECK(r.model[10]);
  CHECK_FALSE(r.model[11]);
  CHECK(r.model[100]);
  CHECK_FALSE(r.model[1]);

  const std::string bits = write_script("bits.sh", "echo 's OPTIMUM FOUND'\necho 'v 0110'\n");
  SolveResult b = run_external(bits, "p wcnf 4 0 1\n", true, 5);
  REQUIRE(b.model.size() == 5);
  CHECK_FALSE(b.model[1]);
  CHECK(b.model[2]);
  CHECK(b.model[3]);
  CHECK_FALSE(b.model[4]);
}
