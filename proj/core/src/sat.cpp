#include "andorcut/sat.hpp"

#include <algorithm>

namespace andorcut {

namespace {

// Luby restart sequence: 1 1 2 1 1 2 4 ...
double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  double r = 1;
  for (int i = 0; i < seq; ++i) r *= y;
  return r;
}

constexpr double kVarDecay = 0.95;
constexpr std::uint64_t kRestartBase = 100;

}  // namespace

SatSolver::SatSolver(VarIndex nvars) { ensure_vars(nvars); }

VarIndex SatSolver::new_var() {
  ensure_vars(nvars_ + 1);
  return nvars_;
}

void SatSolver::ensure_vars(VarIndex n) {
  if (n <= nvars_ && !assigns_.empty()) return;
  const std::size_t slots = static_cast<std::size_t>(n) + 1;
  const std::size_t old = assigns_.size();
  assigns_.resize(slots, 0);
  phase_.resize(slots, -1);
  level_.resize(slots, 0);
  reason_.resize(slots, kNoReason);
  activity_.resize(slots, 0.0);
  seen_.resize(slots, 0);
  heap_pos_.resize(slots, -1);
  watches_.resize(2 * slots);
  for (std::size_t v = std::max<std::size_t>(old, 1); v < slots; ++v) {
    heap_insert(static_cast<std::uint32_t>(v));
  }
  nvars_ = std::max(nvars_, n);
}

void SatSolver::set_phase(VarIndex var, bool value) {
  ensure_vars(var);
  phase_[var] = value ? 1 : -1;
}

bool SatSolver::add_clause(std::span<const Literal> clause) {
  if (!ok_) return false;
  std::vector<Lit> lits;
  lits.reserve(clause.size());
  for (Literal l : clause) {
    if (l.var == 0) throw std::invalid_argument("literal with variable 0");
    ensure_vars(l.var);
    lits.push_back(encode(l));
  }
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  std::vector<Lit> kept;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i + 1 < lits.size() && var(lits[i]) == var(lits[i + 1])) return true;  // tautology
    int v = value(lits[i]);
    if (v == 1) return true;
    if (v == 0) kept.push_back(lits[i]);
  }
  if (kept.empty()) return ok_ = false;
  if (kept.size() == 1) {
    enqueue(kept[0], kNoReason);
    if (propagate() != kNoReason) ok_ = false;
    return ok_;
  }
  clauses_.push_back(StoredClause{std::move(kept), false, false});
  attach(static_cast<CRef>(clauses_.size() - 1));
  return true;
}

void SatSolver::attach(CRef cref) {
  const auto& lits = clauses_[cref].lits;
  watches_[lits[0] ^ 1u].push_back(Watcher{cref, lits[1]});
  watches_[lits[1] ^ 1u].push_back(Watcher{cref, lits[0]});
}

void SatSolver::enqueue(Lit l, CRef reason) {
  const std::uint32_t v = var(l);
  assigns_[v] = (l & 1u) ? -1 : 1;
  level_[v] = decision_level();
  reason_[v] = reason;
  trail_.push_back(l);
}

SatSolver::CRef SatSolver::propagate() {
  CRef conflict = kNoReason;
  while (qhead_ < trail_.size()) {
    const Lit p = trail_[qhead_++];
    const Lit false_lit = p ^ 1u;
    ++propagations_;
    auto& ws = watches_[p];
    std::size_t i = 0, j = 0;
    while (i < ws.size()) {
      Watcher w = ws[i++];
      if (value(w.blocker) == 1) {
        ws[j++] = w;
        continue;
      }
      StoredClause& c = clauses_[w.cref];
      if (c.deleted) continue;
      auto& lits = c.lits;
      if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
      const Lit first = lits[0];
      if (first != w.blocker && value(first) == 1) {
        ws[j++] = Watcher{w.cref, first};
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < lits.size(); ++k) {
        if (value(lits[k]) != -1) {
          std::swap(lits[1], lits[k]);
          watches_[lits[1] ^ 1u].push_back(Watcher{w.cref, first});
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = Watcher{w.cref, first};
      if (value(first) == -1) {
        conflict = w.cref;
        qhead_ = trail_.size();
        while (i < ws.size()) ws[j++] = ws[i++];
      } else {
        enqueue(first, w.cref);
      }
    }
    ws.resize(j);
  }
  return conflict;
}

void SatSolver::bump(std::uint32_t v) {
  if ((activity_[v] += var_inc_) > 1e100) {
    for (auto& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_pos_[v] >= 0) heap_up(static_cast<std::size_t>(heap_pos_[v]));
}

void SatSolver::analyze(CRef conflict, std::vector<Lit>& learnt, std::uint32_t& backjump) {
  learnt.assign(1, 0);
  int path = 0;
  Lit p = 0;
  bool have_p = false;
  std::size_t index = trail_.size();
  CRef reason = conflict;
  do {
    const auto& lits = clauses_[reason].lits;
    for (std::size_t k = have_p ? 1 : 0; k < lits.size(); ++k) {
      const Lit q = lits[k];
      const std::uint32_t v = var(q);
      if (seen_[v] || level_[v] == 0) continue;
      seen_[v] = 1;
      bump(v);
      if (level_[v] >= decision_level()) {
        ++path;
      } else {
        learnt.push_back(q);
      }
    }
    while (!seen_[var(trail_[--index])]) {
    }
    p = trail_[index];
    have_p = true;
    reason = reason_[var(p)];
    seen_[var(p)] = 0;
    --path;
  } while (path > 0);
  learnt[0] = p ^ 1u;

  backjump = 0;
  if (learnt.size() > 1) {
    std::size_t max_i = 1;
    for (std::size_t k = 2; k < learnt.size(); ++k) {
      if (level_[var(learnt[k])] > level_[var(learnt[max_i])]) max_i = k;
    }
    std::swap(learnt[1], learnt[max_i]);
    backjump = level_[var(learnt[1])];
  }
  for (Lit l : learnt) seen_[var(l)] = 0;
}

// `failed` is an assumption found false; collects the assumptions that
// implied its negation.
void SatSolver::analyze_final(Lit failed) {
  core_.assign(1, decode(failed));
  if (decision_level() == 0) return;
  seen_[var(failed)] = 1;
  for (std::size_t i = trail_.size(); i-- > trail_lim_[0];) {
    const std::uint32_t v = var(trail_[i]);
    if (!seen_[v]) continue;
    if (reason_[v] == kNoReason) {
      if (level_[v] > 0) core_.push_back(decode(trail_[i]));
    } else {
      const auto& lits = clauses_[reason_[v]].lits;
      for (std::size_t k = 1; k < lits.size(); ++k) {
        if (level_[var(lits[k])] > 0) seen_[var(lits[k])] = 1;
      }
    }
    seen_[v] = 0;
  }
  seen_[var(failed)] = 0;
  std::sort(core_.begin(), core_.end());
  core_.erase(std::unique(core_.begin(), core_.end()), core_.end());
}

void SatSolver::cancel_until(std::uint32_t level) {
  if (decision_level() <= level) return;
  for (std::size_t i = trail_.size(); i-- > trail_lim_[level];) {
    const std::uint32_t v = var(trail_[i]);
    phase_[v] = assigns_[v];
    assigns_[v] = 0;
    reason_[v] = kNoReason;
    if (heap_pos_[v] < 0) heap_insert(v);
  }
  trail_.resize(trail_lim_[level]);
  trail_lim_.resize(level);
  qhead_ = trail_.size();
}

SatSolver::Lit SatSolver::pick_branch() {
  while (!heap_.empty()) {
    const std::uint32_t v = heap_pop();
    if (assigns_[v] == 0) return 2 * v + (phase_[v] > 0 ? 0u : 1u);
  }
  return 0;  // variable 0 is never used, so literal 0 means "none left"
}

void SatSolver::reduce_learnts() {
  std::vector<CRef> candidates;
  for (CRef c = 0; c < clauses_.size(); ++c) {
    const auto& sc = clauses_[c];
    if (!sc.learnt || sc.deleted) continue;
    const std::uint32_t v0 = var(sc.lits[0]);
    const bool locked = reason_[v0] == c && value(sc.lits[0]) == 1;
    if (!locked && sc.lits.size() > 2) candidates.push_back(c);
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](CRef a, CRef b) {
    return clauses_[a].lits.size() > clauses_[b].lits.size();
  });
  for (std::size_t i = 0; i < candidates.size() / 2; ++i) {
    auto& sc = clauses_[candidates[i]];
    sc.deleted = true;
    sc.lits.clear();
    sc.lits.shrink_to_fit();
    --learnt_count_;
  }
  for (auto& ws : watches_) {
    std::erase_if(ws, [&](const Watcher& w) { return clauses_[w.cref].deleted; });
  }
  max_learnts_ += max_learnts_ / 10;
}

bool SatSolver::budget_exhausted(const SatLimits& limits) {
  if (limits.max_decisions && decisions_ >= *limits.max_decisions) return true;
  if (limits.deadline && (decisions_ & 63u) == 0 &&
      std::chrono::steady_clock::now() >= *limits.deadline) {
    return true;
  }
  return false;
}

SatStatus SatSolver::solve(std::span<const Literal> assumptions, const SatLimits& limits) {
  model_.clear();
  core_.clear();
  if (!ok_) return SatStatus::kUnsat;
  assumptions_.clear();
  for (Literal l : assumptions) {
    ensure_vars(l.var);
    assumptions_.push_back(encode(l));
  }
  if (limits.deadline && std::chrono::steady_clock::now() >= *limits.deadline) {
    return SatStatus::kUnknown;
  }

  std::vector<Lit> learnt;
  int restart = 0;
  SatStatus status = SatStatus::kUnknown;
  while (status == SatStatus::kUnknown) {
    const auto allowed = static_cast<std::uint64_t>(luby(2, restart++) * kRestartBase);
    std::uint64_t local_conflicts = 0;
    bool restart_now = false;
    while (!restart_now && status == SatStatus::kUnknown) {
      const CRef conflict = propagate();
      if (conflict != kNoReason) {
        ++conflicts_;
        ++local_conflicts;
        if (decision_level() == 0) {
          ok_ = false;
          status = SatStatus::kUnsat;
          break;
        }
        std::uint32_t backjump = 0;
        analyze(conflict, learnt, backjump);
        cancel_until(backjump);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoReason);
        } else {
          clauses_.push_back(StoredClause{learnt, true, false});
          const CRef cref = static_cast<CRef>(clauses_.size() - 1);
          attach(cref);
          ++learnt_count_;
          enqueue(learnt[0], cref);
        }
        var_inc_ /= kVarDecay;
        continue;
      }
      if (local_conflicts >= allowed) {
        restart_now = true;
        break;
      }
      if (learnt_count_ >= max_learnts_ + trail_.size()) reduce_learnts();

      Lit next = 0;
      while (decision_level() < assumptions_.size()) {
        const Lit p = assumptions_[decision_level()];
        const int v = value(p);
        if (v == 1) {
          trail_lim_.push_back(static_cast<std::uint32_t>(trail_.size()));
        } else if (v == -1) {
          analyze_final(p);
          status = SatStatus::kUnsat;
          break;
        } else {
          next = p;
          break;
        }
      }
      if (status != SatStatus::kUnknown) break;
      if (next == 0) {
        if (budget_exhausted(limits)) {
          cancel_until(0);
          return SatStatus::kUnknown;
        }
        ++decisions_;
        next = pick_branch();
        if (next == 0) {
          model_.assign(static_cast<std::size_t>(nvars_) + 1, false);
          for (VarIndex v = 1; v <= nvars_; ++v) model_[v] = assigns_[v] > 0;
          status = SatStatus::kSat;
          break;
        }
      }
      trail_lim_.push_back(static_cast<std::uint32_t>(trail_.size()));
      enqueue(next, kNoReason);
    }
    if (restart_now) cancel_until(0);
  }
  cancel_until(0);
  return status;
}

bool SatSolver::heap_less(std::uint32_t a, std::uint32_t b) const {
  if (activity_[a] != activity_[b]) return activity_[a] > activity_[b];
  return a < b;
}

void SatSolver::heap_insert(std::uint32_t v) {
  heap_pos_[v] = static_cast<std::int64_t>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

void SatSolver::heap_up(std::size_t pos) {
  const std::uint32_t v = heap_[pos];
  while (pos > 0) {
    const std::size_t parent = (pos - 1) / 2;
    if (!heap_less(v, heap_[parent])) break;
    heap_[pos] = heap_[parent];
    heap_pos_[heap_[pos]] = static_cast<std::int64_t>(pos);
    pos = parent;
  }
  heap_[pos] = v;
  heap_pos_[v] = static_cast<std::int64_t>(pos);
}

void SatSolver::heap_down(std::size_t pos) {
  const std::uint32_t v = heap_[pos];
  for (;;) {
    std::size_t child = 2 * pos + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child])) ++child;
    if (!heap_less(heap_[child], v)) break;
    heap_[pos] = heap_[child];
    heap_pos_[heap_[pos]] = static_cast<std::int64_t>(pos);
    pos = child;
  }
  heap_[pos] = v;
  heap_pos_[v] = static_cast<std::int64_t>(pos);
}

std::uint32_t SatSolver::heap_pop() {
  const std::uint32_t top = heap_.front();
  heap_pos_[top] = -1;
  const std::uint32_t last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_pos_[last] = 0;
    heap_down(0);
  }
  return top;
}

SatResult sat_solve(const std::vector<Clause>& clauses,
                    std::span<const Literal> assumptions, VarIndex nvars) {
  SatSolver solver(nvars);
  for (const auto& clause : clauses) {
    if (!solver.add_clause(clause)) break;
  }
  SatResult result;
  result.status = solver.solve(assumptions);
  if (result.status == SatStatus::kSat) result.assignment = solver.model();
  if (result.status == SatStatus::kUnsat) result.core = solver.core();
  return result;
}

}  // namespace andorcut
