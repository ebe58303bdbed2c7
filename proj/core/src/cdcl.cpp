#include "cdcl.hpp"

#include <algorithm>
#include <cmath>

namespace mgs::detail {

namespace {

double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x %= size;
  }
  return std::pow(y, seq);
}

}  // namespace

void Cdcl::reserve_vars(int n) {
  while (num_vars() < n) {
    const int v = num_vars() + 1;
    assign_.push_back(kUndef);
    phase_.push_back(1);
    level_.push_back(0);
    reason_.push_back(kNoReason);
    activity_.push_back(0);
    heap_pos_.push_back(-1);
    seen_.push_back(0);
    heap_insert(v);
  }
  if (watches_.size() < 2 * assign_.size()) watches_.resize(2 * assign_.size());
}

bool Cdcl::add_clause(const std::vector<int>& dimacs) {
  if (!ok_) return false;
  int top = 0;
  for (int l : dimacs) top = std::max(top, std::abs(l));
  reserve_vars(top);
  backtrack(0);

  std::vector<Lit> lits;
  for (int l : dimacs) lits.push_back(make_lit(l));
  std::sort(lits.begin(), lits.end());
  std::vector<Lit> kept;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    Lit l = lits[i];
    if (value(l) == kTrue) return true;
    if (i + 1 < lits.size() && lits[i + 1] == neg(l)) return true;
    if (value(l) == kFalse || (!kept.empty() && kept.back() == l)) continue;
    kept.push_back(l);
  }
  if (kept.empty()) return ok_ = false;
  if (kept.size() == 1) {
    enqueue(kept[0], kNoReason);
    if (propagate() != kNoReason) ok_ = false;
    return ok_;
  }
  clauses_.push_back({std::move(kept), false, false, 0});
  attach(static_cast<std::int32_t>(clauses_.size() - 1));
  return true;
}

void Cdcl::attach(std::int32_t cref) {
  const auto& c = clauses_[static_cast<std::size_t>(cref)];
  watches_[neg(c.lits[0])].push_back({cref, c.lits[1]});
  watches_[neg(c.lits[1])].push_back({cref, c.lits[0]});
}

void Cdcl::enqueue(Lit l, std::int32_t reason) {
  const auto v = static_cast<std::size_t>(var(l));
  assign_[v] = static_cast<std::uint8_t>(l & 1U);
  level_[v] = level();
  reason_[v] = reason;
  trail_.push_back(l);
}

std::int32_t Cdcl::propagate() {
  while (qhead_ < trail_.size()) {
    const Lit p = trail_[qhead_++];
    auto& ws = watches_[p];
    std::size_t i = 0, j = 0;
    while (i < ws.size()) {
      const Watch w = ws[i];
      if (value(w.blocker) == kTrue) {
        ws[j++] = ws[i++];
        continue;
      }
      Clause& c = clauses_[static_cast<std::size_t>(w.cref)];
      if (c.deleted) {
        ++i;
        continue;
      }
      const Lit false_lit = neg(p);
      if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
      ++i;
      const Lit first = c.lits[0];
      if (first != w.blocker && value(first) == kTrue) {
        ws[j++] = {w.cref, first};
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.lits.size(); ++k) {
        if (value(c.lits[k]) != kFalse) {
          std::swap(c.lits[1], c.lits[k]);
          watches_[neg(c.lits[1])].push_back({w.cref, first});
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = {w.cref, first};
      if (value(first) == kFalse) {
        while (i < ws.size()) ws[j++] = ws[i++];
        ws.resize(j);
        qhead_ = trail_.size();
        return w.cref;
      }
      enqueue(first, w.cref);
    }
    ws.resize(j);
  }
  return kNoReason;
}

void Cdcl::analyze(std::int32_t confl, std::vector<Lit>& learnt, int& back_level) {
  learnt.assign(1, 0);
  int pending = 0;
  Lit p = 0;
  bool have_p = false;
  std::size_t index = trail_.size();
  do {
    Clause& c = clauses_[static_cast<std::size_t>(confl)];
    if (c.learnt) bump_clause(c);
    for (std::size_t k = have_p ? 1 : 0; k < c.lits.size(); ++k) {
      const Lit q = c.lits[k];
      const auto v = static_cast<std::size_t>(var(q));
      if (seen_[v] || level_[v] == 0) continue;
      bump_var(var(q));
      seen_[v] = 1;
      if (level_[v] >= level()) {
        ++pending;
      } else {
        learnt.push_back(q);
      }
    }
    while (!seen_[static_cast<std::size_t>(var(trail_[--index]))]) {
    }
    p = trail_[index];
    have_p = true;
    confl = reason_[static_cast<std::size_t>(var(p))];
    seen_[static_cast<std::size_t>(var(p))] = 0;
    --pending;
  } while (pending > 0);
  learnt[0] = neg(p);

  // Drop literals implied by the rest of the clause.
  std::uint32_t levels = 0;
  for (std::size_t k = 1; k < learnt.size(); ++k) levels |= 1U << (level_[static_cast<std::size_t>(var(learnt[k]))] & 31);
  to_clear_.assign(learnt.begin(), learnt.end());
  std::size_t keep = 1;
  for (std::size_t k = 1; k < learnt.size(); ++k) {
    if (reason_[static_cast<std::size_t>(var(learnt[k]))] == kNoReason || !redundant(learnt[k], levels)) {
      learnt[keep++] = learnt[k];
    }
  }
  learnt.resize(keep);
  for (Lit l : to_clear_) seen_[static_cast<std::size_t>(var(l))] = 0;

  back_level = 0;
  if (learnt.size() > 1) {
    std::size_t best = 1;
    for (std::size_t k = 2; k < learnt.size(); ++k) {
      if (level_[static_cast<std::size_t>(var(learnt[k]))] > level_[static_cast<std::size_t>(var(learnt[best]))]) best = k;
    }
    std::swap(learnt[1], learnt[best]);
    back_level = level_[static_cast<std::size_t>(var(learnt[1]))];
  }
}

bool Cdcl::redundant(Lit l, std::uint32_t abstract_levels) {
  analyze_stack_.assign(1, l);
  const std::size_t top = to_clear_.size();
  while (!analyze_stack_.empty()) {
    const Lit q = analyze_stack_.back();
    analyze_stack_.pop_back();
    const auto& c = clauses_[static_cast<std::size_t>(reason_[static_cast<std::size_t>(var(q))])];
    for (std::size_t k = 1; k < c.lits.size(); ++k) {
      const Lit r = c.lits[k];
      const auto v = static_cast<std::size_t>(var(r));
      if (seen_[v] || level_[v] == 0) continue;
      if (reason_[v] != kNoReason && (abstract_levels & (1U << (level_[v] & 31)))) {
        seen_[v] = 1;
        analyze_stack_.push_back(r);
        to_clear_.push_back(r);
      } else {
        for (std::size_t j = top; j < to_clear_.size(); ++j) seen_[static_cast<std::size_t>(var(to_clear_[j]))] = 0;
        to_clear_.resize(top);
        return false;
      }
    }
  }
  return true;
}

void Cdcl::backtrack(int lvl) {
  if (level() <= lvl) return;
  for (std::size_t i = trail_.size(); i-- > trail_lim_[static_cast<std::size_t>(lvl)];) {
    const auto v = static_cast<std::size_t>(var(trail_[i]));
    phase_[v] = assign_[v];
    assign_[v] = kUndef;
    reason_[v] = kNoReason;
    if (heap_pos_[v] < 0) heap_insert(static_cast<int>(v));
  }
  trail_.resize(trail_lim_[static_cast<std::size_t>(lvl)]);
  trail_lim_.resize(static_cast<std::size_t>(lvl));
  qhead_ = trail_.size();
}

void Cdcl::bump_var(int v) {
  const auto i = static_cast<std::size_t>(v);
  if ((activity_[i] += var_inc_) > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_pos_[i] >= 0) heap_up(static_cast<std::size_t>(heap_pos_[i]));
}

void Cdcl::bump_clause(Clause& c) {
  if ((c.activity += cla_inc_) > 1e20) {
    for (auto& d : clauses_)
      if (d.learnt) d.activity *= 1e-20;
    cla_inc_ *= 1e-20;
  }
}

void Cdcl::decay() {
  var_inc_ /= 0.95;
  cla_inc_ /= 0.999;
}

void Cdcl::reduce_db() {
  std::vector<std::int32_t> learnts;
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    const Clause& c = clauses_[i];
    if (c.learnt && !c.deleted && c.lits.size() > 2) learnts.push_back(static_cast<std::int32_t>(i));
  }
  std::sort(learnts.begin(), learnts.end(), [&](std::int32_t x, std::int32_t y) {
    return clauses_[static_cast<std::size_t>(x)].activity < clauses_[static_cast<std::size_t>(y)].activity;
  });
  for (std::size_t i = 0; i < learnts.size() / 2; ++i) {
    Clause& c = clauses_[static_cast<std::size_t>(learnts[i])];
    const auto v = static_cast<std::size_t>(var(c.lits[0]));
    const bool locked = reason_[v] == learnts[i] && value(c.lits[0]) == kTrue;
    if (locked) continue;
    c.deleted = true;
    c.lits.clear();
    c.lits.shrink_to_fit();
    --num_learnts_;
  }
  for (auto& ws : watches_) {
    ws.erase(std::remove_if(ws.begin(), ws.end(),
                            [&](const Watch& w) { return clauses_[static_cast<std::size_t>(w.cref)].deleted; }),
             ws.end());
  }
}

Cdcl::Lit Cdcl::pick_branch() {
  while (!heap_.empty()) {
    const int v = heap_pop();
    if (assign_[static_cast<std::size_t>(v)] == kUndef) {
      return static_cast<Lit>(2 * v + phase_[static_cast<std::size_t>(v)]);
    }
  }
  return 0;
}

void Cdcl::heap_insert(int v) {
  heap_pos_[static_cast<std::size_t>(v)] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

int Cdcl::heap_pop() {
  const int top = heap_[0];
  heap_pos_[static_cast<std::size_t>(top)] = -1;
  heap_[0] = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_pos_[static_cast<std::size_t>(heap_[0])] = 0;
    heap_down(0);
  }
  return top;
}

void Cdcl::heap_up(std::size_t i) {
  const int v = heap_[i];
  while (i > 0) {
    const std::size_t parent = (i - 1) / 2;
    if (activity_[static_cast<std::size_t>(heap_[parent])] >= activity_[static_cast<std::size_t>(v)]) break;
    heap_[i] = heap_[parent];
    heap_pos_[static_cast<std::size_t>(heap_[i])] = static_cast<int>(i);
    i = parent;
  }
  heap_[i] = v;
  heap_pos_[static_cast<std::size_t>(v)] = static_cast<int>(i);
}

void Cdcl::heap_down(std::size_t i) {
  const int v = heap_[i];
  for (;;) {
    std::size_t child = 2 * i + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() &&
        activity_[static_cast<std::size_t>(heap_[child + 1])] > activity_[static_cast<std::size_t>(heap_[child])]) {
      ++child;
    }
    if (activity_[static_cast<std::size_t>(heap_[child])] <= activity_[static_cast<std::size_t>(v)]) break;
    heap_[i] = heap_[child];
    heap_pos_[static_cast<std::size_t>(heap_[i])] = static_cast<int>(i);
    i = child;
  }
  heap_[i] = v;
  heap_pos_[static_cast<std::size_t>(v)] = static_cast<int>(i);
}

Cdcl::Result Cdcl::solve(const std::vector<int>& assumptions,
                         std::optional<std::chrono::steady_clock::time_point> deadline) {
  if (!ok_) return Result::Unsat;
  for (int a : assumptions) reserve_vars(std::abs(a));
  backtrack(0);
  if (propagate() != kNoReason) {
    ok_ = false;
    return Result::Unsat;
  }
  max_learnts_ = std::max(max_learnts_, static_cast<double>(clauses_.size()) / 3 + 1000);

  std::vector<Lit> learnt;
  for (int restart = 0;; ++restart) {
    const auto budget = static_cast<std::uint64_t>(luby(2, restart) * 100);
    std::uint64_t local = 0;
    for (;;) {
      const std::int32_t confl = propagate();
      if (confl != kNoReason) {
        ++conflicts_;
        ++local;
        if (level() == 0) {
          ok_ = false;
          return Result::Unsat;
        }
        int back = 0;
        analyze(confl, learnt, back);
        backtrack(back);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoReason);
        } else {
          clauses_.push_back({learnt, true, false, 0});
          const auto cref = static_cast<std::int32_t>(clauses_.size() - 1);
          attach(cref);
          bump_clause(clauses_.back());
          ++num_learnts_;
          enqueue(learnt[0], cref);
        }
        decay();
        if ((conflicts_ & 1023) == 0 && deadline && std::chrono::steady_clock::now() > *deadline) {
          backtrack(0);
          return Result::Unknown;
        }
        continue;
      }
      if (local >= budget) {
        backtrack(0);
        break;
      }
      if (static_cast<double>(num_learnts_) >= max_learnts_ + static_cast<double>(trail_.size())) {
        reduce_db();
        max_learnts_ *= 1.1;
      }

      Lit next = 0;
      bool decided = false;
      while (static_cast<std::size_t>(level()) < assumptions.size()) {
        const Lit a = make_lit(assumptions[static_cast<std::size_t>(level())]);
        if (value(a) == kTrue) {
          trail_lim_.push_back(trail_.size());
        } else if (value(a) == kFalse) {
          backtrack(0);
          return Result::Unsat;
        } else {
          next = a;
          decided = true;
          break;
        }
      }
      if (!decided) {
        next = pick_branch();
        if (next == 0) {
          model_.assign(assign_.size(), false);
          for (std::size_t v = 1; v < assign_.size(); ++v) model_[v] = assign_[v] == kTrue;
          backtrack(0);
          return Result::Sat;
        }
      }
      trail_lim_.push_back(trail_.size());
      enqueue(next, kNoReason);
    }
  }
}

}  // namespace mgs::detail
