#include "andorcut/maxsat.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>

#include "andorcut/sat.hpp"

namespace andorcut {

const Solution* SolveResult::solution() const {
  if (const auto* optimal = std::get_if<Optimal>(&outcome)) return &optimal->solution;
  if (const auto* timeout = std::get_if<Timeout>(&outcome)) {
    return timeout->best ? &*timeout->best : nullptr;
  }
  return nullptr;
}

namespace {

using Clock = std::chrono::steady_clock;

// A soft constraint reduced to one literal that should hold; non-unit soft
// clauses are routed through a relaxation variable.
struct SoftLiteral {
  Literal lit;
  Weight weight;
};

class BranchAndBound {
 public:
  BranchAndBound(const WcnfInstance& instance, const SolverBudget& budget)
      : instance_(instance), sat_(instance.nvars), start_(Clock::now()) {
    if (budget.wall_seconds) {
      if (!(*budget.wall_seconds > 0)) throw std::invalid_argument("time limit must be positive");
      limits_.deadline = start_ + std::chrono::duration_cast<Clock::duration>(
                                      std::chrono::duration<double>(*budget.wall_seconds));
    }
    if (budget.max_decisions) {
      if (*budget.max_decisions == 0) throw std::invalid_argument("decision limit must be positive");
      max_decisions_ = budget.max_decisions;
    }
  }

  SolveResult run() {
    SolveResult result;
    if (!load()) {
      result.outcome = HardUnsat{};
      return finish(result);
    }
    const SatStatus first = sat_.solve({}, sat_limits());
    if (first == SatStatus::kUnsat) {
      result.outcome = HardUnsat{};
      return finish(result);
    }
    if (first == SatStatus::kUnknown) {
      result.outcome = Timeout{};
      return finish(result);
    }
    offer(sat_.model());
    tighten_incumbent();
    if (!stopped_) search();
    if (stopped_) {
      result.outcome = Timeout{best_};
    } else {
      result.outcome = Optimal{*best_};
    }
    return finish(result);
  }

 private:
  enum : std::int8_t { kFree = 0, kKept = 1, kDropped = -1 };

  bool load() {
    for (const auto& clause : instance_.hard) {
      if (!sat_.add_clause(clause)) return false;
    }
    std::map<Literal, Weight> merged;
    for (const auto& soft : instance_.soft) {
      if (soft.clause.empty()) continue;  // always falsified; priced by offer()
      if (soft.clause.size() == 1) {
        merged[soft.clause.front()] += soft.weight;
        continue;
      }
      const VarIndex relax = sat_.new_var();
      Clause relaxed = soft.clause;
      relaxed.push_back(Literal{relax, true});
      if (!sat_.add_clause(relaxed)) return false;
      merged[Literal{relax, false}] += soft.weight;
    }
    for (const auto& [lit, weight] : merged) softs_.push_back(SoftLiteral{lit, weight});
    // Cheapest first; ties by literal keep the order deterministic.
    std::stable_sort(softs_.begin(), softs_.end(),
                     [](const SoftLiteral& a, const SoftLiteral& b) { return a.weight < b.weight; });
    index_of_.assign(2 * (static_cast<std::size_t>(sat_.nvars()) + 1), -1);
    for (std::size_t i = 0; i < softs_.size(); ++i) {
      index_of_[code(softs_[i].lit)] = static_cast<std::int32_t>(i);
      sat_.set_phase(softs_[i].lit.var, softs_[i].lit.positive);
    }
    state_.assign(softs_.size(), kFree);
    return true;
  }

  static std::size_t code(Literal l) { return 2 * static_cast<std::size_t>(l.var) + (l.positive ? 0 : 1); }

  SatLimits sat_limits() const {
    SatLimits limits = limits_;
    if (max_decisions_) {
      const std::uint64_t used = branch_nodes_;
      limits.max_decisions = *max_decisions_ > used ? *max_decisions_ - used : 0;
    }
    return limits;
  }

  void offer(const std::vector<bool>& model) {
    std::vector<bool> assignment(model.begin(),
                                 model.begin() + static_cast<std::ptrdiff_t>(instance_.nvars) + 1);
    const Weight cost = instance_.falsified_weight(assignment);
    if (!best_ || cost < best_->cost) best_ = Solution{std::move(assignment), cost};
  }

  // Greedily re-satisfies falsified soft literals, heaviest first.
  void tighten_incumbent() {
    std::vector<Literal> kept;
    std::vector<std::size_t> dropped;
    const auto& model = sat_.model();
    for (std::size_t i = 0; i < softs_.size(); ++i) {
      const Literal l = softs_[i].lit;
      if (model[l.var] == l.positive) {
        kept.push_back(l);
      } else {
        dropped.push_back(i);
      }
    }
    for (auto it = dropped.rbegin(); it != dropped.rend(); ++it) {
      kept.push_back(softs_[*it].lit);
      const SatStatus status = sat_.solve(kept, sat_limits());
      if (status == SatStatus::kUnknown) {
        stopped_ = true;
        return;
      }
      if (status == SatStatus::kSat) {
        offer(sat_.model());
      } else {
        kept.pop_back();
      }
    }
  }

  // Lower bound for the current node by cost partitioning over disjoint
  // unsatisfiable cores: each core forces at least one of its free soft
  // literals to be falsified, so its cheapest residual weight is charged
  // and deducted from every member. Returns the literal to branch on, or
  // nullopt when the node is closed (pruned, infeasible or solved).
  std::optional<std::size_t> bound(Weight accumulated) {
    std::vector<Weight> residual(softs_.size(), 0);
    for (std::size_t i = 0; i < softs_.size(); ++i) {
      if (state_[i] == kFree) residual[i] = softs_[i].weight;
    }
    Weight lower = 0;
    std::optional<std::size_t> branch;
    std::vector<Literal> assumptions;
    for (;;) {
      assumptions.clear();
      for (std::size_t i = 0; i < softs_.size(); ++i) {
        if (state_[i] == kKept || (state_[i] == kFree && residual[i] > 0)) {
          assumptions.push_back(softs_[i].lit);
        }
      }
      const SatStatus status = sat_.solve(assumptions, sat_limits());
      if (status == SatStatus::kUnknown) {
        stopped_ = true;
        return std::nullopt;
      }
      if (status == SatStatus::kSat) {
        offer(sat_.model());
        break;
      }
      std::vector<std::size_t> members;
      for (Literal l : sat_.core()) {
        const std::int32_t i = index_of_[code(l)];
        if (i >= 0 && state_[static_cast<std::size_t>(i)] == kFree) {
          members.push_back(static_cast<std::size_t>(i));
        }
      }
      if (members.empty()) return std::nullopt;  // kept literals alone conflict
      Weight charge = residual[members.front()];
      for (std::size_t i : members) charge = std::min(charge, residual[i]);
      for (std::size_t i : members) residual[i] -= charge;
      lower += charge;
      if (!branch) branch = *std::min_element(members.begin(), members.end());
      if (accumulated + lower >= best_->cost) return std::nullopt;
    }
    if (accumulated + lower >= best_->cost) return std::nullopt;
    return branch;
  }

  // Depth-first: each frame falsifies its literal first, then keeps it.
  void search() {
    struct Frame {
      std::size_t soft;
      Weight accumulated;
      int stage;
    };
    std::vector<Frame> stack;
    auto expand = [&](Weight accumulated) {
      ++branch_nodes_;
      if (max_decisions_ && branch_nodes_ + sat_.decisions() >= *max_decisions_) {
        stopped_ = true;
        return;
      }
      if (auto branch = bound(accumulated)) stack.push_back(Frame{*branch, accumulated, 0});
    };
    expand(0);
    while (!stack.empty() && !stopped_) {
      Frame& frame = stack.back();
      const std::size_t soft = frame.soft;
      const Weight accumulated = frame.accumulated;
      if (frame.stage == 0) {
        frame.stage = 1;
        state_[soft] = kDropped;
        expand(accumulated + softs_[soft].weight);
      } else if (frame.stage == 1) {
        frame.stage = 2;
        state_[soft] = kKept;
        expand(accumulated);
      } else {
        state_[soft] = kFree;
        stack.pop_back();
      }
    }
  }

  SolveResult& finish(SolveResult& result) {
    result.stats.decisions = sat_.decisions() + branch_nodes_;
    result.stats.propagations = sat_.propagations();
    result.stats.conflicts = sat_.conflicts();
    result.stats.branch_nodes = branch_nodes_;
    result.stats.elapsed_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    return result;
  }

  const WcnfInstance& instance_;
  SatSolver sat_;
  Clock::time_point start_;
  SatLimits limits_;
  std::optional<std::uint64_t> max_decisions_;
  std::vector<SoftLiteral> softs_;
  std::vector<std::int32_t> index_of_;
  std::vector<std::int8_t> state_;
  std::optional<Solution> best_;
  std::uint64_t branch_nodes_ = 0;
  bool stopped_ = false;
};

}  // namespace

SolveResult solve(const WcnfInstance& instance, const SolverBudget& budget) {
  return BranchAndBound(instance, budget).run();
}

}  // namespace andorcut
