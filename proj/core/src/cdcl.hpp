#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

namespace mgs::detail {

// Conflict-driven clause learning with two watched literals, first-UIP
// learning, VSIDS branching, Luby restarts and phase saving.  Clauses may be
// added between calls to solve(); assumptions are decided first.
class Cdcl {
 public:
  enum class Result { Sat, Unsat, Unknown };

  void reserve_vars(int n);
  int num_vars() const { return static_cast<int>(assign_.size()) - 1; }
  // DIMACS literals.  Returns false once the formula is unsatisfiable at level 0.
  bool add_clause(const std::vector<int>& lits);

  Result solve(const std::vector<int>& assumptions = {},
               std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt);
  // Value of variable v in the last model.
  bool model_value(int v) const { return model_[static_cast<std::size_t>(v)]; }
  std::uint64_t conflicts() const { return conflicts_; }

 private:
  using Lit = std::uint32_t;  // 2v + sign
  static constexpr std::int32_t kNoReason = -1;
  static constexpr std::uint8_t kTrue = 0, kFalse = 1, kUndef = 2;

  struct Clause {
    std::vector<Lit> lits;
    bool learnt = false;
    bool deleted = false;
    double activity = 0;
  };
  struct Watch {
    std::int32_t cref;
    Lit blocker;
  };

  static Lit make_lit(int dimacs) {
    return static_cast<Lit>(2 * (dimacs > 0 ? dimacs : -dimacs) + (dimacs < 0 ? 1 : 0));
  }
  static int var(Lit l) { return static_cast<int>(l >> 1); }
  static Lit neg(Lit l) { return l ^ 1U; }

  std::uint8_t value(Lit l) const {
    std::uint8_t a = assign_[static_cast<std::size_t>(var(l))];
    return a == kUndef ? kUndef : static_cast<std::uint8_t>(a ^ (l & 1U));
  }
  int level() const { return static_cast<int>(trail_lim_.size()); }

  void enqueue(Lit l, std::int32_t reason);
  std::int32_t propagate();
  void analyze(std::int32_t confl, std::vector<Lit>& learnt, int& back_level);
  bool redundant(Lit l, std::uint32_t abstract_levels);
  void backtrack(int lvl);
  void attach(std::int32_t cref);
  void bump_var(int v);
  void bump_clause(Clause& c);
  void decay();
  void reduce_db();
  Lit pick_branch();

  // Max-heap of variables ordered by activity.
  void heap_insert(int v);
  int heap_pop();
  void heap_up(std::size_t i);
  void heap_down(std::size_t i);

  std::vector<Clause> clauses_;
  std::vector<std::vector<Watch>> watches_;
  std::vector<std::uint8_t> assign_{kUndef};
  std::vector<std::uint8_t> phase_{1};
  std::vector<int> level_{0};
  std::vector<std::int32_t> reason_{kNoReason};
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;

  std::vector<double> activity_{0};
  double var_inc_ = 1;
  double cla_inc_ = 1;
  std::vector<int> heap_;
  std::vector<int> heap_pos_{-1};

  std::vector<std::uint8_t> seen_{0};
  std::vector<Lit> analyze_stack_;
  std::vector<Lit> to_clear_;

  std::vector<bool> model_;
  std::size_t num_learnts_ = 0;
  double max_learnts_ = 0;
  bool ok_ = true;
  std::uint64_t conflicts_ = 0;
};

}  // namespace mgs::detail
