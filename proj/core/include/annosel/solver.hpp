#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "annosel/scoring.hpp"
#include "annosel/types.hpp"

namespace annosel {

// One admissible request vector for a sample, with its price and objective
// contribution. Each sample group always contains the empty option (0, 0).
struct SelectionOption {
  SelectionMask mask;
  std::int64_t cost = 0;
  double profit = 0.0;
};

struct SelectionGroup {
  std::string sample_id;
  std::vector<SelectionOption> options;
};

// Multiple-choice knapsack instance: pick exactly one option per group so
// that total cost stays within `budget` and total profit is maximal.
struct SelectionProblem {
  std::vector<SelectionGroup> groups;
  std::int64_t budget = 0;
};

struct SelectionResult {
  // One entry per group, in problem order.
  std::vector<std::pair<std::string, SelectionMask>> assignment;
  std::int64_t total_cost = 0;
  double total_profit = 0.0;
};

enum class SolverKind { kDp, kGreedy, kBruteforce };

const char* solver_name(SolverKind kind);
SolverKind solver_from_name(const std::string& name);  // throws std::invalid_argument

// Materializes one option per subset of the sample's missing annotation
// types (2^missing options, empty subset included), priced with
// selection_cost / selection_profit. Options come out in canonical mask
// order.
std::vector<SelectionOption> enumerate_options(const SampleRecord& x, const CostTriple& costs,
                                               const ValueTriple& values, double lambda_u,
                                               double lambda_s, double max_sim);

// Removes options that some other option matches or beats on both cost and
// profit (strictly on at least one; exact duplicates keep the smaller mask).
// The optimum of any problem using the group is unchanged.
std::vector<SelectionOption> prune_dominated(std::vector<SelectionOption> options);

// Exact solver: group-wise dynamic program over integer budgets 0..b with
// suffix tables and forward reconstruction. Ties are broken toward lower
// total cost, then the lexicographically earliest assignment (group order,
// canonical mask order). O(sum_g |options_g| * b) time.
SelectionResult solve_dp(const SelectionProblem& problem);

// Exhaustive testing oracle; same contract and tie-breaking as solve_dp.
// Throws annosel::Error("solver", ...) when the number of joint assignments
// exceeds `enumeration_cap`.
SelectionResult solve_bruteforce(const SelectionProblem& problem,
                                 std::uint64_t enumeration_cap = 10'000'000);

// Baseline: repeatedly applies the feasible single-group option change with
// the best profit/cost ratio (positive profit deltas only). Feasible, not
// necessarily optimal.
SelectionResult solve_greedy(const SelectionProblem& problem);

SelectionResult solve(const SelectionProblem& problem, SolverKind kind);

}  // namespace annosel
