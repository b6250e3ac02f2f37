#include "annosel/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "annosel/error.hpp"

namespace annosel {

namespace {

// Option indices sorted by canonical mask rank; solvers scan options in this
// order so tie-breaking never depends on how the caller listed them.
std::vector<std::uint32_t> rank_order(const std::vector<SelectionOption>& options) {
  std::vector<std::uint32_t> order(options.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return options[a].mask.rank() < options[b].mask.rank();
  });
  return order;
}

void validate_problem(const SelectionProblem& problem) {
  if (problem.budget < 0) {
    throw std::invalid_argument("budget must be non-negative");
  }
  for (const SelectionGroup& group : problem.groups) {
    bool has_free_option = false;
    unsigned seen_masks = 0;
    for (const SelectionOption& option : group.options) {
      if (option.cost < 0) {
        throw std::invalid_argument("group \"" + group.sample_id + "\" has a negative cost");
      }
      if (!std::isfinite(option.profit)) {
        throw std::invalid_argument("group \"" + group.sample_id + "\" has a non-finite profit");
      }
      const unsigned bit = 1u << option.mask.rank();
      if (seen_masks & bit) {
        throw std::invalid_argument("group \"" + group.sample_id + "\" has duplicate masks");
      }
      seen_masks |= bit;
      has_free_option |= option.cost == 0;
    }
    if (!has_free_option) {
      throw std::invalid_argument("group \"" + group.sample_id + "\" lacks a zero-cost option");
    }
  }
}

std::int64_t clamped_budget(const SelectionProblem& problem) {
  // Budget beyond the total price of every group's dearest option is inert.
  std::int64_t spendable = 0;
  for (const SelectionGroup& group : problem.groups) {
    std::int64_t dearest = 0;
    for (const SelectionOption& option : group.options) {
      dearest = std::max(dearest, option.cost);
    }
    spendable += dearest;
  }
  return std::min(problem.budget, spendable);
}

}  // namespace

const char* solver_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::kDp:
      return "dp";
    case SolverKind::kGreedy:
      return "greedy";
    case SolverKind::kBruteforce:
      return "bruteforce";
  }
  return "unknown";
}

SolverKind solver_from_name(const std::string& name) {
  if (name == "dp") return SolverKind::kDp;
  if (name == "greedy") return SolverKind::kGreedy;
  if (name == "bruteforce") return SolverKind::kBruteforce;
  throw std::invalid_argument("unknown solver \"" + name + "\" (expected dp|greedy|bruteforce)");
}

std::vector<SelectionOption> enumerate_options(const SampleRecord& x, const CostTriple& costs,
                                               const ValueTriple& values, double lambda_u,
                                               double lambda_s, double max_sim) {
  const unsigned missing = x.annotated.missing().rank();
  std::vector<SelectionOption> options;
  options.reserve(std::size_t{1} << SelectionMask::from_rank(missing).count());
  for (unsigned rank = 0; rank < 8; ++rank) {
    if ((rank & ~missing) != 0) {
      continue;  // not a subset of the sample's missing types
    }
    const SelectionMask mask = SelectionMask::from_rank(rank);
    options.push_back({mask, selection_cost(mask, costs),
                       selection_profit(x, mask, values, lambda_u, lambda_s, max_sim)});
  }
  return options;
}

std::vector<SelectionOption> prune_dominated(std::vector<SelectionOption> options) {
  // Skyline sweep: sort by (cost asc, profit desc, rank asc) and keep every
  // option that strictly improves on the best profit seen so far.
  std::sort(options.begin(), options.end(),
            [](const SelectionOption& a, const SelectionOption& b) {
              if (a.cost != b.cost) return a.cost < b.cost;
              if (a.profit != b.profit) return a.profit > b.profit;
              return a.mask.rank() < b.mask.rank();
            });
  std::vector<SelectionOption> kept;
  kept.reserve(options.size());
  double best_profit = -std::numeric_limits<double>::infinity();
  for (const SelectionOption& option : options) {
    if (option.profit > best_profit) {
      kept.push_back(option);
      best_profit = option.profit;
    }
  }
  std::sort(kept.begin(), kept.end(), [](const SelectionOption& a, const SelectionOption& b) {
    return a.mask.rank() < b.mask.rank();
  });
  return kept;
}

SelectionResult solve_dp(const SelectionProblem& problem) {
  validate_problem(problem);
  const std::size_t n_groups = problem.groups.size();
  const std::int64_t budget = clamped_budget(problem);
  const std::size_t width = static_cast<std::size_t>(budget) + 1;

  // suffix[g][j]: best (profit, min cost) over groups g..end with budget j.
  std::vector<double> best_profit((n_groups + 1) * width, 0.0);
  std::vector<std::int64_t> best_cost((n_groups + 1) * width, 0);

  std::vector<std::vector<std::uint32_t>> orders(n_groups);
  for (std::size_t g = 0; g < n_groups; ++g) {
    orders[g] = rank_order(problem.groups[g].options);
  }

  for (std::size_t g = n_groups; g-- > 0;) {
    const auto& options = problem.groups[g].options;
    double* profit_row = &best_profit[g * width];
    std::int64_t* cost_row = &best_cost[g * width];
    const double* next_profit = &best_profit[(g + 1) * width];
    const std::int64_t* next_cost = &best_cost[(g + 1) * width];
    for (std::size_t j = 0; j < width; ++j) {
      bool found = false;
      double p_best = 0.0;
      std::int64_t c_best = 0;
      for (std::uint32_t k : orders[g]) {
        const SelectionOption& option = options[k];
        if (option.cost > static_cast<std::int64_t>(j)) {
          continue;
        }
        const std::size_t rest = j - static_cast<std::size_t>(option.cost);
        const double p = option.profit + next_profit[rest];
        const std::int64_t c = option.cost + next_cost[rest];
        if (!found || p > p_best || (p == p_best && c < c_best)) {
          found = true;
          p_best = p;
          c_best = c;
        }
      }
      // A zero-cost option always exists, so every state is reachable.
      profit_row[j] = p_best;
      cost_row[j] = c_best;
    }
  }

  // Forward reconstruction; the first option (in canonical mask order) that
  // attains the suffix optimum yields the lexicographically earliest
  // assignment among (max profit, min cost) solutions.
  SelectionResult result;
  result.assignment.reserve(n_groups);
  std::size_t j = static_cast<std::size_t>(budget);
  for (std::size_t g = 0; g < n_groups; ++g) {
    const auto& options = problem.groups[g].options;
    const double target_profit = best_profit[g * width + j];
    const std::int64_t target_cost = best_cost[g * width + j];
    const double* next_profit = &best_profit[(g + 1) * width];
    const std::int64_t* next_cost = &best_cost[(g + 1) * width];
    bool chosen = false;
    for (std::uint32_t k : orders[g]) {
      const SelectionOption& option = options[k];
      if (option.cost > static_cast<std::int64_t>(j)) {
        continue;
      }
      const std::size_t rest = j - static_cast<std::size_t>(option.cost);
      if (option.profit + next_profit[rest] == target_profit &&
          option.cost + next_cost[rest] == target_cost) {
        result.assignment.emplace_back(problem.groups[g].sample_id, option.mask);
        j = rest;
        chosen = true;
        break;
      }
    }
    if (!chosen) {
      throw std::logic_error("solve_dp reconstruction failed");  // unreachable
    }
  }
  result.total_profit = best_profit[static_cast<std::size_t>(budget)];
  result.total_cost = best_cost[static_cast<std::size_t>(budget)];
  return result;
}

SelectionResult solve_bruteforce(const SelectionProblem& problem, std::uint64_t enumeration_cap) {
  validate_problem(problem);
  const std::size_t n_groups = problem.groups.size();

  std::uint64_t combinations = 1;
  for (const SelectionGroup& group : problem.groups) {
    const std::uint64_t count = group.options.size();
    if (count == 0 || combinations > enumeration_cap / count) {
      throw Error("solver", "brute-force enumeration would exceed the cap of " +
                                std::to_string(enumeration_cap) + " assignments");
    }
    combinations *= count;
  }

  std::vector<std::vector<std::uint32_t>> orders(n_groups);
  for (std::size_t g = 0; g < n_groups; ++g) {
    orders[g] = rank_order(problem.groups[g].options);
  }

  std::vector<std::uint32_t> current(n_groups, 0);
  std::vector<std::uint32_t> best;
  double best_total = 0.0;
  std::int64_t best_cost = 0;
  bool have_best = false;

  // Depth-first over option choices in canonical mask order; the first
  // optimum found is the lexicographically earliest one.
  auto visit = [&](auto&& self, std::size_t g, std::int64_t cost, double profit) -> void {
    if (cost > problem.budget) {
      return;  // no option lowers cost later; masks only add types
    }
    if (g == n_groups) {
      if (!have_best || profit > best_total || (profit == best_total && cost < best_cost)) {
        have_best = true;
        best_total = profit;
        best_cost = cost;
        best = current;
      }
      return;
    }
    const auto& options = problem.groups[g].options;
    for (std::uint32_t k : orders[g]) {
      current[g] = k;
      self(self, g + 1, cost + options[k].cost, profit + options[k].profit);
    }
  };
  visit(visit, 0, 0, 0.0);

  SelectionResult result;
  result.assignment.reserve(n_groups);
  for (std::size_t g = 0; g < n_groups; ++g) {
    result.assignment.emplace_back(problem.groups[g].sample_id,
                                   problem.groups[g].options[best[g]].mask);
  }
  result.total_cost = best_cost;
  result.total_profit = best_total;
  return result;
}

SelectionResult solve_greedy(const SelectionProblem& problem) {
  validate_problem(problem);
  const std::size_t n_groups = problem.groups.size();

  // Start each group on its best zero-cost option.
  std::vector<std::uint32_t> chosen(n_groups, 0);
  std::int64_t total_cost = 0;
  double total_profit = 0.0;
  for (std::size_t g = 0; g < n_groups; ++g) {
    const auto& options = problem.groups[g].options;
    std::uint32_t pick = 0;
    bool found = false;
    for (std::uint32_t k : rank_order(options)) {
      if (options[k].cost != 0) continue;
      if (!found || options[k].profit > options[pick].profit) {
        pick = k;
        found = true;
      }
    }
    chosen[g] = pick;
    total_profit += options[pick].profit;
  }

  // Repeatedly take the affordable single-group change with the best
  // profit-per-cost ratio. Cost-free profitable changes rank above all
  // priced ones. Each step strictly increases profit, so this terminates.
  while (true) {
    bool found = false;
    std::size_t best_group = 0;
    std::uint32_t best_option = 0;
    bool best_free = false;
    double best_ratio = 0.0;
    double best_dprofit = 0.0;
    std::int64_t best_dcost = 0;

    for (std::size_t g = 0; g < n_groups; ++g) {
      const auto& options = problem.groups[g].options;
      const SelectionOption& cur = options[chosen[g]];
      for (std::uint32_t k : rank_order(options)) {
        if (k == chosen[g]) continue;
        const SelectionOption& cand = options[k];
        const double dprofit = cand.profit - cur.profit;
        const std::int64_t dcost = cand.cost - cur.cost;
        if (dprofit <= 0.0 || total_cost + dcost > problem.budget) {
          continue;
        }
        const bool free = dcost <= 0;
        const double ratio = free ? 0.0 : dprofit / static_cast<double>(dcost);
        bool better;
        if (!found) {
          better = true;
        } else if (free != best_free) {
          better = free;
        } else if (free) {
          better = dprofit > best_dprofit;
        } else if (ratio != best_ratio) {
          better = ratio > best_ratio;
        } else if (dcost != best_dcost) {
          better = dcost < best_dcost;
        } else {
          better = false;  // earlier group / lower rank wins
        }
        if (better) {
          found = true;
          best_group = g;
          best_option = k;
          best_free = free;
          best_ratio = ratio;
          best_dprofit = dprofit;
          best_dcost = dcost;
        }
      }
    }

    if (!found) {
      break;
    }
    total_cost += best_dcost;
    total_profit += best_dprofit;
    chosen[best_group] = best_option;
  }

  SelectionResult result;
  result.assignment.reserve(n_groups);
  result.total_cost = 0;
  double profit_sum = 0.0;
  for (std::size_t g = 0; g < n_groups; ++g) {
    const SelectionOption& option = problem.groups[g].options[chosen[g]];
    result.assignment.emplace_back(problem.groups[g].sample_id, option.mask);
    result.total_cost += option.cost;
    profit_sum += option.profit;
  }
  result.total_profit = profit_sum;
  return result;
}

SelectionResult solve(const SelectionProblem& problem, SolverKind kind) {
  switch (kind) {
    case SolverKind::kDp:
      return solve_dp(problem);
    case SolverKind::kGreedy:
      return solve_greedy(problem);
    case SolverKind::kBruteforce:
      return solve_bruteforce(problem);
  }
  throw std::invalid_argument("unknown solver kind");
}

}  // namespace annosel
