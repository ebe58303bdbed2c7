// Acceptance driver: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "mgs/approx.hpp"
#include "mgs/errors.hpp"
#include "mgs/exact.hpp"
#include "mgs/satenc.hpp"
#include "mgs/spinrep.hpp"
#include "mgs/targets.hpp"

using namespace mgs;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;
std::map<int, std::string> lines;

void report(int id, bool ok, const std::string& what) {
  lines[id] = std::string(ok ? "PASS" : "FAIL") + " " + std::to_string(id) + " " + what;
  std::fprintf(stderr, "finished criterion %d\n", id);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

struct CorpusEntry {
  TransferMatrix q;
  SynthesisReport rep;
};

// Phase-free operator-norm distance: the eigenphases of u^dag v lie on an arc
// of length s, and the best global phase sits at its midpoint.
double phase_free_dist(const DenseUnitary& u, const DenseUnitary& v) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(u.m.adjoint() * v.m, false);
  std::vector<double> ph;
  for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) ph.push_back(std::arg(es.eigenvalues()(j)));
  std::sort(ph.begin(), ph.end());
  double gap = ph.front() + 2 * std::numbers::pi - ph.back();
  for (std::size_t j = 1; j < ph.size(); ++j) gap = std::max(gap, ph[j] - ph[j - 1]);
  const double arc = 2 * std::numbers::pi - gap;
  return 2 * std::sin(arc / 4);
}

std::vector<CorpusEntry> criteria_1_2() {
  std::vector<CorpusEntry> corpus;
  const auto t0 = Clock::now();
  int round_trip = 0;
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + i % 3;
    const int t = i % 9;
    TransferMatrix q = random_ring_target(n, t, 0xC0FFEEu + static_cast<std::uint64_t>(i));
    SynthesisReport rep = synthesize(q);
    if (eval_circuit(rep.circuit) == q) ++round_trip;
    corpus.push_back({q, rep});
  }
  const double secs = seconds_since(t0);
  report(1, round_trip == 200 && secs < 60,
         fmt("exact round trip: %.0f/200 targets reproduced in %.2f s", round_trip, secs));

  int violations = 0;
  double worst_t = 0, worst_c = 0;
  for (const auto& e : corpus) {
    const int n = e.q.n();
    const mpz_class k = e.q.k_max();
    const mpz_class nt = k * (4 * n * n * n + 9 * n * n - 7 * n) / 6;
    const mpz_class nc = 2 * k * n * (n - 1) * (n + 2) * (2 * n - 1) / 3 + n * (2 * n + 3);
    const int t = e.rep.circuit.t_count(), c = e.rep.circuit.clifford_count();
    if (mpz_class(t) > nt || mpz_class(c) > nc) ++violations;
    if (nt > 0) worst_t = std::max(worst_t, t / nt.get_d());
    worst_c = std::max(worst_c, c / nc.get_d());
  }
  report(2, violations == 0,
         fmt("gate-count bounds: %.0f violations; max T/bound %.3f, max Clifford/bound %.3f", violations, worst_t,
             worst_c));
  return corpus;
}

void criterion_4() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(4004);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> logscale(-4, 0.5);
  int violations = 0;
  double worst_ratio = 0;
  for (int n = 2; n <= 6; ++n) {
    for (int i = 0; i < 1000; ++i) {
      Eigen::MatrixXd q = random_haar_so(n, rng());
      Eigen::MatrixXd a = Eigen::MatrixXd::NullaryExpr(2 * n, 2 * n, [&]() { return gauss(rng); });
      a = (a - a.transpose()).eval() * std::pow(10.0, logscale(rng)) / (2 * n);
      Eigen::MatrixXd q_eps = q * a.exp();
      Theorem2Record rec = check_theorem2(q, q_eps);
      if (!rec.holds) ++violations;
      if (rec.bound > 0) worst_ratio = std::max(worst_ratio, rec.eps_spin / rec.bound);
    }
  }
  const double secs = seconds_since(t0);
  report(4, violations == 0 && secs < 300,
         fmt("spin-lift bound: %.0f violations over 5000 pairs, max eps_spin/bound %.3f, %.1f s", violations,
             worst_ratio, secs));
}

void criterion_5(Su2Searcher& searcher) {
  int violations = 0;
  double worst_e = 0, worst_slack = 1;
  for (double eps : {1e-1, 3e-2, 1e-2}) {
    for (int i = 0; i < 64; ++i) {
      const double theta = 2 * std::numbers::pi * i / 64;
      Su2Word w = searcher.search(su2_rz(theta), eps);
      Circuit c = map_word(w, {1, theta}, 2);
      DenseUnitary compiled = circuit_unitary(2, c.flatten());
      const double e = phase_free_dist(compiled, rz(2, 1, theta));
      const double ent = operator_entanglement(compiled);
      const double bound = 1 - std::pow(1 - e * e / 2, 4);
      if (ent > bound + 1e-12) ++violations;
      worst_e = std::max(worst_e, e);
      if (bound > 0) worst_slack = std::min(worst_slack, (bound - ent) / bound);
    }
  }
  report(5, violations == 0,
         fmt("entangling-power bound: %.0f violations over 192 compilations, max error %.4f, min relative slack %.2e",
             violations, worst_e, worst_slack));
}

void criterion_6(Su2Searcher& searcher) {
  const auto t0 = Clock::now();
  int violations = 0;
  double min_gap = 1;
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 5;
    Eigen::MatrixXd q = random_haar_so(n, 6000 + static_cast<std::uint64_t>(i));
    ApproxResult r = approx_synthesize(q, 0.5, searcher);
    // One rotation gives eps_glob == eps_loc; the two are computed along
    // different paths, so allow for rounding.
    const double ulps = 1e-12;
    if (!r.global_checked || !(r.ledger.eps_glob <= r.ledger.eps_loc * (1 + ulps)) || !(r.ledger.rel_gap >= -ulps)) {
      ++violations;
    }
    if (r.ledger.m > 0) min_gap = std::min(min_gap, r.ledger.rel_gap);
  }
  report(6, violations == 0,
         fmt("ledger subadditivity: %.0f violations over 100 targets (rounding allowance 1e-12), "
             "min relative gap %.2e, %.1f s",
             violations, min_gap, seconds_since(t0)));
}

Circuit planted_circuit(std::mt19937_64& rng, int n, int d) {
  auto gens = encoder_generators(n);
  Circuit c;
  c.n = n;
  while (c.depth() < d) {
    std::vector<GeneratorId> layer;
    std::vector<bool> used(static_cast<std::size_t>(n) + 2, false);
    for (int t = 0, tries = 1 + static_cast<int>(rng() % 3); t < tries; ++t) {
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

void criterion_7(std::vector<std::pair<TransferMatrix, Circuit>>& decoded) {
  std::mt19937_64 rng(7007);
  int sat = 0, verified = 0;
  for (int i = 0; i < 50; ++i) {
    const int d0 = 1 + i % 4;
    Circuit planted = planted_circuit(rng, 2, d0);
    TransferMatrix q = eval_circuit(planted);
    CnfInstance inst = encode(q, d0);
    SolveResult r = solve_builtin(inst.num_vars, inst.clauses);
    if (r.verdict != Verdict::Sat) continue;
    ++sat;
    try {
      Circuit c = decode(inst, r.model, q);
      if (eval_circuit(c) == q) ++verified;
      decoded.emplace_back(q, c);
    } catch (const VerificationError&) {
    }
  }

  double c_fit = 0;
  for (int n = 1; n <= 3; ++n)
    for (int d = 1; d <= 4; ++d)
      c_fit = std::max(c_fit, encode(TransferMatrix::identity(n), d).clauses.size() / (d * std::pow(n, 5)));
  bool fits = true;
  double worst = 0;
  for (int d = 1; d <= 4; ++d) {
    const double ratio = encode(TransferMatrix::identity(4), d).clauses.size() / (d * std::pow(4, 5));
    worst = std::max(worst, ratio);
    fits = fits && ratio <= c_fit;
  }
  report(7, sat == 50 && verified == 50 && fits,
         fmt("planted depths: %.0f/50 SAT, %.0f verified; clause constant C=%.1f", sat, verified, c_fit) +
             fmt(", held-out n=4 max ratio %.2f", worst));
}

void criterion_3(const std::vector<CorpusEntry>& corpus, const std::vector<std::pair<TransferMatrix, Circuit>>& decoded) {
  int depth_violations = 0, checked = 0;
  for (const auto& e : corpus) {
    ++checked;
    if (e.rep.circuit.t_depth() < static_cast<int>(e.q.k_max())) ++depth_violations;
  }
  for (const auto& [q, c] : decoded) {
    ++checked;
    if (c.t_depth() < static_cast<int>(q.k_max())) ++depth_violations;
  }
  int encodes = 0, not_unsat = 0;
  for (const auto& e : corpus) {
    if (e.q.n() > 3) continue;
    for (int d = 0; d < static_cast<int>(e.q.k_max()); ++d) {
      ++encodes;
      if (solve(encode(e.q, d)).verdict != Verdict::Unsat) ++not_unsat;
    }
  }
  int searches = 0, below = 0;
  for (const auto& [q, c] : decoded) {
    if (q.k_max() == 0) continue;
    ++searches;
    DepthSearchResult s = search_depth(q, c.depth());
    if (s.lower < static_cast<int>(q.k_max()) || !s.optimal_d || *s.optimal_d < static_cast<int>(q.k_max())) ++below;
  }
  report(3, depth_violations == 0 && not_unsat == 0 && below == 0,
         fmt("T-depth bound: %.0f/%.0f circuits respect k_max; ", checked - depth_violations, checked) +
             fmt("%.0f/%.0f encodes below k_max UNSAT; ", encodes - not_unsat, encodes) +
             fmt("%.0f/%.0f optimal depths at or above k_max", searches - below, searches));
}

void criterion_8() {
  std::mt19937_64 rng(8008);
  double worst = 0;
  for (int i = 0; i < 300; ++i) {
    const int n = 1 + i % 5;
    const int len = static_cast<int>(rng() % 31);
    std::vector<GeneratorId> w;
    auto gens = encoder_generators(n);
    for (int j = 0; j < len; ++j) w.push_back(gens[rng() % gens.size()]);
    Eigen::MatrixXd f = transfer_matrix(circuit_unitary(n, w));
    worst = std::max(worst, (f - eval_product(n, w).to_float()).cwiseAbs().maxCoeff());
  }
  std::vector<GeneratorId> s4(4, GeneratorId{GateKind::Stil, 1});
  const bool spin_minus = (circuit_unitary(1, s4).m + Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-12;
  const bool so_plus = eval_product(1, s4) == TransferMatrix::identity(1);
  report(8, worst <= 1e-9 && spin_minus && so_plus,
         fmt("homomorphism: max deviation %.2e over 300 words; S^4 = -I in spin: ", worst) +
             (spin_minus ? "yes" : "no") + ", +I in SO: " + (so_plus ? "yes" : "no"));
}

void criterion_9() {
  std::mt19937_64 rng(9009);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 5;
    std::vector<GeneratorId> w;
    for (int j = 0; j < 20; ++j) {
      const bool bond = n > 1 && rng() % 2;
      const bool inv = rng() % 2;
      w.push_back(bond ? GeneratorId{inv ? GateKind::RtilInv : GateKind::Rtil, 1 + static_cast<int>(rng() % (n - 1))}
                       : GeneratorId{inv ? GateKind::StilInv : GateKind::Stil, 1 + static_cast<int>(rng() % n)});
    }
    Eigen::VectorXcd s = circuit_unitary(n, w).m * zero_state(n);
    worst = std::max(worst, std::abs(stabilizer_entropy(s) - 1));
  }
  Eigen::VectorXcd t_plus(2);
  t_plus << 1 / std::sqrt(2.0), std::exp(cplx(0, std::numbers::pi / 4)) / std::sqrt(2.0);
  const double st = stabilizer_entropy(t_plus);
  report(9, worst <= 1e-10 && std::abs(st - 0.75) <= 1e-10,
         fmt("stabilizer entropy: Clifford matchgate states max |S-1| %.1e, S(T|+>) = %.12f", worst, st));
}

void criterion_10() {
  XxTarget t = xx_target(4);
  const bool so = is_special_orthogonal(t.q_dis);
  const bool diag = is_block_antisymmetric(t.q_dis * t.h_xx * t.q_dis.transpose());
  SynthesisReport rep = synthesize(t.q_dis);
  const bool exact = eval_circuit(rep.circuit) == t.q_dis;
  std::string note = fmt("XX n=4: k_max %.0f, exact synthesis depth %.0f, T-count %.0f (reference T-count 8)",
                         t.q_dis.k_max(), rep.circuit.depth(), rep.circuit.t_count());

  SolverConfig cfg = SolverConfig{}.with_env();
  if (!cfg.sat_path.empty()) {
    SolveResult r13 = solve(encode(t.q_dis, 13), cfg);
    SolveResult r12 = solve(encode(t.q_dis, 12), cfg);
    note += "; d=13 " + verdict_name(r13.verdict) + ", d=12 " + verdict_name(r12.verdict);
    if (r13.verdict == Verdict::Sat) {
      CnfInstance inst = encode(t.q_dis, 13);
      try {
        decode(inst, r13.model, t.q_dis);
        note += " (decoded, verified)";
      } catch (const VerificationError& e) {
        note += std::string(" (decode failed: ") + e.what() + ")";
      }
    }
    if (r13.verdict != Verdict::Sat || r12.verdict != Verdict::Unsat) note += " [convention diagnostic: reference is SAT at 13, UNSAT at 12]";
    if (!cfg.maxsat_path.empty()) {
      SolveResult m = solve_maxsat(encode_maxsat(t.q_dis, 13), cfg);
      note += "; MaxSAT at d=13 cost " + (m.cost ? std::to_string(*m.cost) : std::string("n/a"));
      if (!m.cost || *m.cost != 8) note += " [convention diagnostic: reference T-count 8]";
    }
  } else {
    note += "; no external solver configured (set MGS_SAT_SOLVER / MGS_MAXSAT_SOLVER), depth-13 probe skipped";
  }
  report(10, so && diag && exact, note);
}

}  // namespace

int main() {
  std::vector<CorpusEntry> corpus = criteria_1_2();
  std::vector<std::pair<TransferMatrix, Circuit>> decoded;
  criterion_7(decoded);
  criterion_3(corpus, decoded);
  criterion_4();
  Su2Searcher searcher;
  criterion_5(searcher);
  criterion_6(searcher);
  criterion_8();
  criterion_9();
  criterion_10();
  for (const auto& [id, line] : lines) std::printf("%s\n", line.c_str());
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
