#pragma once

/// @file sat.hpp
/// Complete SAT core used by the MaxSAT layer: conflict-driven search with
/// two-watched-literal unit propagation, incremental solving under
/// assumptions and extraction of failed-assumption cores.

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "andorcut/formula.hpp"

namespace andorcut {

enum class SatStatus { kSat, kUnsat, kUnknown };

struct SatLimits {
  std::optional<std::chrono::steady_clock::time_point> deadline;
  std::optional<std::uint64_t> max_decisions;  // cumulative over the solver's life
};

class SatSolver {
 public:
  explicit SatSolver(VarIndex nvars = 0);

  VarIndex nvars() const { return nvars_; }
  VarIndex new_var();

  /// Adds a clause over variables 1..nvars(); grows the variable range if
  /// needed. Must be called between solve() calls only. Returns false once
  /// the clause set is known to be unsatisfiable.
  bool add_clause(std::span<const Literal> clause);
  bool add_clause(std::initializer_list<Literal> clause) {
    return add_clause(std::span<const Literal>(clause.begin(), clause.size()));
  }

  /// Initial phase for decisions on `var` (default false).
  void set_phase(VarIndex var, bool value);

  SatStatus solve(std::span<const Literal> assumptions = {}, const SatLimits& limits = {});

  /// After kSat: total assignment, indexed by variable (slot 0 unused).
  const std::vector<bool>& model() const { return model_; }
  /// After kUnsat: assumptions that together are inconsistent with the
  /// clauses. Empty when the clauses alone are unsatisfiable.
  const std::vector<Literal>& core() const { return core_; }

  std::uint64_t decisions() const { return decisions_; }
  std::uint64_t propagations() const { return propagations_; }
  std::uint64_t conflicts() const { return conflicts_; }

 private:
  using Lit = std::uint32_t;  // 2 * var + (negative ? 1 : 0)
  using CRef = std::uint32_t;
  static constexpr CRef kNoReason = 0xffffffffu;

  struct StoredClause {
    std::vector<Lit> lits;
    bool learnt = false;
    bool deleted = false;
  };
  struct Watcher {
    CRef cref;
    Lit blocker;
  };

  static Lit encode(Literal l) { return 2 * l.var + (l.positive ? 0u : 1u); }
  static Literal decode(Lit l) { return Literal{l >> 1, (l & 1u) == 0}; }
  static std::uint32_t var(Lit l) { return l >> 1; }

  // 1 true, -1 false, 0 unassigned
  int value(Lit l) const {
    int v = assigns_[var(l)];
    return (l & 1u) ? -v : v;
  }
  std::uint32_t decision_level() const {
    return static_cast<std::uint32_t>(trail_lim_.size());
  }

  void ensure_vars(VarIndex n);
  void attach(CRef cref);
  void enqueue(Lit l, CRef reason);
  CRef propagate();
  void analyze(CRef conflict, std::vector<Lit>& learnt, std::uint32_t& backjump);
  void analyze_final(Lit failed);
  void cancel_until(std::uint32_t level);
  Lit pick_branch();
  void bump(std::uint32_t v);
  void reduce_learnts();
  bool budget_exhausted(const SatLimits& limits);

  // activity-ordered binary heap of variables
  void heap_insert(std::uint32_t v);
  void heap_up(std::size_t pos);
  void heap_down(std::size_t pos);
  std::uint32_t heap_pop();
  bool heap_less(std::uint32_t a, std::uint32_t b) const;

  VarIndex nvars_ = 0;
  bool ok_ = true;
  std::vector<StoredClause> clauses_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<std::int8_t> assigns_;
  std::vector<std::int8_t> phase_;
  std::vector<std::uint32_t> level_;
  std::vector<CRef> reason_;
  std::vector<Lit> trail_;
  std::vector<std::uint32_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::vector<std::uint32_t> heap_;
  std::vector<std::int64_t> heap_pos_;  // -1 when absent
  std::vector<std::uint8_t> seen_;
  std::vector<Lit> assumptions_;
  std::size_t learnt_count_ = 0;
  std::size_t max_learnts_ = 2000;

  std::vector<bool> model_;
  std::vector<Literal> core_;
  std::uint64_t decisions_ = 0;
  std::uint64_t propagations_ = 0;
  std::uint64_t conflicts_ = 0;
};

struct SatResult {
  SatStatus status = SatStatus::kUnknown;
  std::vector<bool> assignment;  // kSat only, slot 0 unused
  std::vector<Literal> core;     // kUnsat only
};

/// One-shot convenience wrapper: solve `clauses` over variables
/// 1..max(nvars, largest variable mentioned) under `assumptions`.
SatResult sat_solve(const std::vector<Clause>& clauses,
                    std::span<const Literal> assumptions = {}, VarIndex nvars = 0);

}  // namespace andorcut
