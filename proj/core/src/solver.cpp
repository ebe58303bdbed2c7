#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>
#ifdef __linux__
#include <sys/prctl.h>
#endif

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cdcl.hpp"
#include "mgs/errors.hpp"
#include "mgs/satenc.hpp"

namespace mgs {

namespace {

using Clock = std::chrono::steady_clock;

std::optional<Clock::time_point> deadline_after(double seconds) {
  if (seconds <= 0) return std::nullopt;
  return Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds));
}

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string env_or(const char* name, const std::string& fallback) {
  if (!fallback.empty()) return fallback;
  const char* v = std::getenv(name);
  return v ? std::string(v) : std::string();
}

// Unary counter over the inputs: outputs[k-1] is implied by "at least k inputs true".
class Totalizer {
 public:
  Totalizer(detail::Cdcl& s, int& next_var) : s_(s), next_(next_var) {}

  std::vector<int> build(const std::vector<int>& inputs) {
    if (inputs.size() <= 1) return inputs;
    const auto mid = inputs.begin() + static_cast<std::ptrdiff_t>(inputs.size() / 2);
    std::vector<int> a = build({inputs.begin(), mid}), b = build({mid, inputs.end()});
    std::vector<int> out(a.size() + b.size());
    for (int& o : out) o = ++next_;
    for (std::size_t i = 0; i <= a.size(); ++i) {
      for (std::size_t j = 0; j <= b.size(); ++j) {
        if (i + j == 0) continue;
        std::vector<int> c;
        if (i > 0) c.push_back(-a[i - 1]);
        if (j > 0) c.push_back(-b[j - 1]);
        c.push_back(out[i + j - 1]);
        s_.add_clause(c);
      }
    }
    return out;
  }

 private:
  detail::Cdcl& s_;
  int& next_;
};

std::vector<int> parse_lits(std::istringstream& in) {
  std::vector<std::string> toks;
  std::string tok;
  while (in >> tok) toks.push_back(tok);
  std::vector<int> lits;
  if (toks.size() == 1 && toks[0].size() > 1 && toks[0].find_first_not_of("01") == std::string::npos) {
    // Compact bit-string model: the whole line is one 0/1 token.
    for (std::size_t i = 0; i < toks[0].size(); ++i) {
      lits.push_back(toks[0][i] == '1' ? static_cast<int>(i + 1) : -static_cast<int>(i + 1));
    }
    return lits;
  }
  for (const auto& t : toks) {
    try {
      lits.push_back(std::stoi(t));
    } catch (const std::exception&) {
      throw ParseError("bad literal \"" + t + "\" in solver output");
    }
  }
  return lits;
}

}  // namespace

SolverConfig SolverConfig::with_env() const {
  SolverConfig c = *this;
  c.sat_path = env_or("MGS_SAT_SOLVER", sat_path);
  c.maxsat_path = env_or("MGS_MAXSAT_SOLVER", maxsat_path);
  return c;
}

SolveResult solve_builtin(int num_vars, const std::vector<std::vector<int>>& clauses,
                          std::optional<Clock::time_point> deadline) {
  const auto t0 = Clock::now();
  SolveResult res;
  res.solver = "builtin";
  detail::Cdcl s;
  s.reserve_vars(num_vars);
  bool ok = true;
  for (const auto& c : clauses) ok = s.add_clause(c) && ok;
  auto r = ok ? s.solve({}, deadline) : detail::Cdcl::Result::Unsat;
  if (r == detail::Cdcl::Result::Sat) {
    res.verdict = Verdict::Sat;
    res.model.assign(static_cast<std::size_t>(num_vars) + 1, false);
    for (int v = 1; v <= num_vars; ++v) res.model[static_cast<std::size_t>(v)] = s.model_value(v);
  } else {
    res.verdict = r == detail::Cdcl::Result::Unsat ? Verdict::Unsat : Verdict::Unknown;
  }
  res.seconds = since(t0);
  return res;
}

SolveResult solve_maxsat_builtin(const WcnfInstance& inst, std::optional<Clock::time_point> deadline) {
  const auto t0 = Clock::now();
  SolveResult res;
  res.solver = "builtin";
  detail::Cdcl s;
  const int n = inst.hard.num_vars;
  s.reserve_vars(n);
  bool ok = true;
  for (const auto& c : inst.hard.clauses) ok = s.add_clause(c) && ok;
  const auto first = ok ? s.solve({}, deadline) : detail::Cdcl::Result::Unsat;
  if (first != detail::Cdcl::Result::Sat) {
    res.verdict = first == detail::Cdcl::Result::Unsat ? Verdict::Unsat : Verdict::Unknown;
    res.seconds = since(t0);
    return res;
  }

  auto capture = [&]() {
    res.model.assign(static_cast<std::size_t>(n) + 1, false);
    std::uint64_t cost = 0;
    for (int v = 1; v <= n; ++v) res.model[static_cast<std::size_t>(v)] = s.model_value(v);
    for (int lit : inst.soft) {
      const bool val = res.model[static_cast<std::size_t>(std::abs(lit))];
      if (val != (lit > 0)) ++cost;
    }
    res.cost = cost;
  };
  capture();

  std::vector<int> violated;
  for (int lit : inst.soft) violated.push_back(-lit);
  int next_var = n;
  Totalizer tot(s, next_var);
  const std::vector<int> count = tot.build(violated);
  res.verdict = Verdict::Sat;
  while (*res.cost > 0) {
    // Ask for a model with at most cost - 1 violations.
    const auto r = s.solve({-count[static_cast<std::size_t>(*res.cost - 1)]}, deadline);
    if (r == detail::Cdcl::Result::Sat) {
      capture();
      continue;
    }
    if (r == detail::Cdcl::Result::Unknown) res.verdict = Verdict::Unknown;
    break;
  }
  res.seconds = since(t0);
  return res;
}

SolveResult run_external(const std::string& path, const std::string& instance_text, bool maxsat, double timeout_s) {
  const auto t0 = Clock::now();
  std::string tmpl = (std::filesystem::temp_directory_path() / (maxsat ? "mgs-XXXXXX.wcnf" : "mgs-XXXXXX.cnf")).string();
  std::vector<char> name(tmpl.begin(), tmpl.end());
  name.push_back('\0');
  const int fd = mkstemps(name.data(), maxsat ? 5 : 4);
  if (fd < 0) throw IoError("cannot create a temporary instance file: " + std::string(std::strerror(errno)));
  const std::string file(name.data());
  {
    std::ofstream out(file);
    out << instance_text;
    if (!out) {
      ::close(fd);
      std::filesystem::remove(file);
      throw IoError("cannot write instance file " + file);
    }
  }
  ::close(fd);

  int pipefd[2];
  if (pipe(pipefd) != 0) {
    std::filesystem::remove(file);
    throw SolverProcessError("pipe failed: " + std::string(std::strerror(errno)));
  }
  [[maybe_unused]] const pid_t parent = getpid();
  const pid_t pid = fork();
  if (pid < 0) {
    std::filesystem::remove(file);
    throw SolverProcessError("fork failed: " + std::string(std::strerror(errno)));
  }
  if (pid == 0) {
    setpgid(0, 0);
#ifdef __linux__
    prctl(PR_SET_PDEATHSIG, SIGKILL);
    if (getppid() != parent) _exit(127);
#endif
    dup2(pipefd[1], STDOUT_FILENO);
    close(pipefd[0]);
    close(pipefd[1]);
    execl(path.c_str(), path.c_str(), file.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(pipefd[1]);

  std::string output;
  bool timed_out = false;
  const auto deadline = deadline_after(timeout_s);
  char buf[65536];
  for (;;) {
    int wait_ms = -1;
    if (deadline) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(*deadline - Clock::now()).count();
      if (left <= 0) {
        timed_out = true;
        break;
      }
      wait_ms = static_cast<int>(std::min<long long>(left, 1000));
    }
    pollfd p{pipefd[0], POLLIN, 0};
    const int ready = poll(&p, 1, wait_ms);
    if (ready < 0 && errno == EINTR) continue;
    if (ready == 0) continue;
    const ssize_t got = read(pipefd[0], buf, sizeof buf);
    if (got <= 0) break;
    output.append(buf, static_cast<std::size_t>(got));
  }
  close(pipefd[0]);
  if (timed_out) {
    kill(-pid, SIGKILL);
    kill(pid, SIGKILL);
  }
  int status = 0;
  waitpid(pid, &status, 0);
  std::filesystem::remove(file);

  SolveResult res;
  res.solver = path;
  res.seconds = since(t0);
  if (timed_out) return res;

  bool have_verdict = false;
  std::vector<int> lits;
  std::istringstream lines(output);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    std::istringstream in(line.substr(1));
    switch (line[0]) {
      case 's':
        have_verdict = true;
        if (line.find("UNSATISFIABLE") != std::string::npos) {
          res.verdict = Verdict::Unsat;
        } else if (line.find("SATISFIABLE") != std::string::npos || line.find("OPTIMUM") != std::string::npos) {
          res.verdict = Verdict::Sat;
        } else {
          res.verdict = Verdict::Unknown;
        }
        break;
      case 'v': {
        auto more = parse_lits(in);
        lits.insert(lits.end(), more.begin(), more.end());
        break;
      }
      case 'o': {
        long long cost = -1;
        if (!(in >> cost) || cost < 0) throw ParseError("bad cost line \"" + line + "\"");
        res.cost = static_cast<std::uint64_t>(cost);
        break;
      }
      default: break;
    }
  }
  if (!have_verdict) {
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    throw SolverProcessError("solver " + path + " exited with status " + std::to_string(code) + " without a verdict");
  }
  if (res.verdict == Verdict::Sat) {
    int top = 0;
    for (int l : lits) top = std::max(top, std::abs(l));
    res.model.assign(static_cast<std::size_t>(top) + 1, false);
    for (int l : lits)
      if (l > 0) res.model[static_cast<std::size_t>(l)] = true;
  }
  return res;
}

namespace {

void pad_model(SolveResult& r, int num_vars) {
  if (r.verdict == Verdict::Sat && r.model.size() < static_cast<std::size_t>(num_vars) + 1) {
    r.model.resize(static_cast<std::size_t>(num_vars) + 1, false);
  }
}

}  // namespace

SolveResult solve(const CnfInstance& inst, const SolverConfig& cfg) {
  const SolverConfig c = cfg.with_env();
  SolveResult r = inst.trivial || c.sat_path.empty()
                      ? solve_builtin(inst.num_vars, inst.clauses, deadline_after(c.timeout_s))
                      : run_external(c.sat_path, emit_dimacs(inst), false, c.timeout_s);
  pad_model(r, inst.num_vars);
  return r;
}

SolveResult solve_maxsat(const WcnfInstance& inst, const SolverConfig& cfg) {
  const SolverConfig c = cfg.with_env();
  SolveResult r = inst.hard.trivial || c.maxsat_path.empty()
                      ? solve_maxsat_builtin(inst, deadline_after(c.timeout_s))
                      : run_external(c.maxsat_path, emit_wcnf(inst), true, c.timeout_s);
  pad_model(r, inst.hard.num_vars);
  if (r.verdict == Verdict::Sat && !r.cost) {
    std::uint64_t cost = 0;
    for (int lit : inst.soft) cost += r.model[static_cast<std::size_t>(std::abs(lit))] != (lit > 0) ? 1 : 0;
    r.cost = cost;
  }
  return r;
}

}  // namespace mgs
