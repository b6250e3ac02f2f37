#include "annosel/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "annosel/error.hpp"
#include "annosel/scoring.hpp"

namespace annosel {

namespace {

struct ScoredCandidate {
  std::size_t index = 0;
  UncertaintyTriple uncertainty;
  double max_sim = 0.0;
};

// Uncertainty and similarity for every candidate against the pre-round pool.
std::vector<ScoredCandidate> score_candidates(const Pool& pool, const CampaignConfig& config,
                                              const WorldOracle& oracle, int round) {
  const std::vector<std::size_t> labeled = pool.labeled_indices();
  std::vector<ScoredCandidate> scored;
  for (std::size_t index : pool.candidate_indices()) {
    const SampleRecord& x = pool[index];
    ScoredCandidate entry;
    entry.index = index;
    try {
      entry.uncertainty = oracle.eval_uncertainty(pool, x, round);
    } catch (const std::exception& e) {
      throw Error("oracle", "round " + std::to_string(round) + ": uncertainty query for \"" +
                                x.id + "\" failed: " + e.what());
    }
    entry.max_sim = max_similarity(x.features, pool, labeled, config.kernel_bandwidth);
    scored.push_back(std::move(entry));
  }
  return scored;
}

double query_iou(const WorldOracle& oracle, const Pool& pool, int round) {
  try {
    return oracle.eval_iou(pool, round);
  } catch (const std::exception& e) {
    throw Error("oracle", "round " + std::to_string(round) + ": IoU query failed: " + e.what());
  }
}

ValueTriple distribution_of(const CountTriple& granted) {
  ValueTriple distribution;
  const std::int64_t total = granted.sum();
  if (total > 0) {
    for (AnnotationType type : kAnnotationTypes) {
      distribution[type] = static_cast<double>(granted[type]) / static_cast<double>(total);
    }
  }
  return distribution;
}

std::int64_t resolve_total_budget(const CampaignConfig& config, std::int64_t max_budget_value) {
  if (config.total_budget) {
    return *config.total_budget;
  }
  const double fraction = config.budget_fraction.value_or(1.0);
  return static_cast<std::int64_t>(std::floor(fraction * static_cast<double>(max_budget_value)));
}

RoundRecord finish_round(Pool& pool, ValueState& values, const WorldOracle& oracle, int round,
                         double previous_iou, std::int64_t allocated, std::int64_t spent,
                         const CountTriple& granted, double objective) {
  RoundRecord record;
  record.round = round;
  record.allocated = allocated;
  record.spent = spent;
  record.granted = granted;
  record.objective = objective;
  record.iou_after = query_iou(oracle, pool, round);
  record.delta_iou = record.iou_after - previous_iou;
  values = update_values(values, granted, record.delta_iou);
  record.values_after = values.values;
  return record;
}

using RoundFn = RoundResult (*)(const Pool&, const ValueState&, std::int64_t,
                                const CampaignConfig&, const WorldOracle&, int, double);

CampaignLog run_loop(const CampaignConfig& config, const WorldOracle& oracle, RoundFn round_fn) {
  validate_campaign_config(config);

  const Pool pristine(oracle.samples());
  CampaignLog log;
  log.config = config;
  log.max_budget = max_budget(pristine, config.costs);
  log.total_budget = resolve_total_budget(config, log.max_budget);
  if (log.total_budget < 0) {
    throw Error("config", "total budget resolves to a negative value");
  }

  Rng init_rng(derive_seed(config.seed, {kStreamInitPool}));
  Pool pool = init_pool(oracle.samples(), config.initial_fraction, init_rng);
  ValueState values = initial_values(config.initial_values, pool);

  log.initial_iou = query_iou(oracle, pool, 0);

  double previous_iou = log.initial_iou;
  std::int64_t carryover = 0;
  CountTriple granted_total;
  for (int round = 1; round <= config.rounds; ++round) {
    const std::int64_t allocated =
        allocate_budget(log.total_budget, config.rounds, round - 1, carryover);
    RoundResult outcome = round_fn(pool, values, allocated, config, oracle, round, previous_iou);
    pool = std::move(outcome.pool);
    values = outcome.values;
    previous_iou = outcome.record.iou_after;
    carryover = allocated - outcome.record.spent;
    for (AnnotationType type : kAnnotationTypes) {
      granted_total[type] += outcome.record.granted[type];
    }
    log.rounds.push_back(outcome.record);
  }
  log.annotation_distribution = distribution_of(granted_total);
  return log;
}

RoundResult run_random_round(const Pool& pool, const ValueState& values,
                             std::int64_t round_budget, const CampaignConfig& config,
                             const WorldOracle& oracle, int round, double previous_iou) {
  if (round_budget < 0) {
    throw std::invalid_argument("round budget must be non-negative");
  }
  const std::vector<ScoredCandidate> scored = score_candidates(pool, config, oracle, round);

  RoundResult result;
  result.pool = pool;
  result.values = values;

  Rng rng(derive_seed(config.seed, {kStreamRandomBaseline, static_cast<std::uint64_t>(round)}));
  std::int64_t remaining = round_budget;
  CountTriple granted;
  std::vector<SelectionMask> granted_masks(pool.size());

  // Single (sample, type) grants, uniform over whatever is still affordable.
  while (true) {
    std::vector<std::pair<std::size_t, AnnotationType>> feasible;
    for (const ScoredCandidate& candidate : scored) {
      const SampleRecord& sample = result.pool[candidate.index];
      for (AnnotationType type : kAnnotationTypes) {
        if (!sample.annotated.test(type) && config.costs[type] <= remaining) {
          feasible.emplace_back(candidate.index, type);
        }
      }
    }
    if (feasible.empty()) {
      break;
    }
    const auto [index, type] = feasible[rng.next_below(feasible.size())];
    result.pool.grant(index, SelectionMask().set(type));
    granted_masks[index].set(type);
    ++granted[type];
    remaining -= config.costs[type];
  }

  // Objective reported for comparability: profit of the granted masks under
  // the same scoring the solver would have used.
  double objective = 0.0;
  for (const ScoredCandidate& candidate : scored) {
    const SelectionMask mask = granted_masks[candidate.index];
    if (mask.any()) {
      SampleRecord pre_round = pool[candidate.index];
      pre_round.uncertainty = candidate.uncertainty;
      objective += selection_profit(pre_round, mask, values.values, config.lambda_u,
                                    config.lambda_s, candidate.max_sim);
    }
  }

  result.record = finish_round(result.pool, result.values, oracle, round, previous_iou,
                               round_budget, round_budget - remaining, granted, objective);
  return result;
}

}  // namespace

std::string campaign_config_violations(const CampaignConfig& config) {
  std::string violations;
  auto flag = [&violations](const std::string& message) {
    if (!violations.empty()) {
      violations += "; ";
    }
    violations += message;
  };

  if (config.rounds < 1) {
    flag("K: must be >= 1");
  }
  if (config.total_budget && config.budget_fraction) {
    flag("budget: set either an absolute budget or a budget fraction, not both");
  }
  if (config.total_budget && *config.total_budget < 0) {
    flag("budget: must be >= 0");
  }
  if (config.budget_fraction &&
      !(*config.budget_fraction > 0.0 && *config.budget_fraction <= 1.0)) {
    flag("budget_fraction: must be in (0, 1]");
  }
  if (!(config.initial_fraction >= 0.0 && config.initial_fraction < 1.0)) {
    flag("initial_fraction: must be in [0, 1)");
  }
  for (AnnotationType type : kAnnotationTypes) {
    if (config.costs[type] < 0) {
      flag(std::string("costs.") + type_code(type) + ": must be >= 0");
    }
    if (!(config.initial_values[type] >= 0.0) ||
        !std::isfinite(config.initial_values[type])) {
      flag(std::string("values.") + type_code(type) + ": must be finite and >= 0");
    }
  }
  if (!(config.lambda_u >= 0.0) || !std::isfinite(config.lambda_u)) {
    flag("lambda_u: must be finite and >= 0");
  }
  if (!(config.lambda_s >= 0.0) || !std::isfinite(config.lambda_s)) {
    flag("lambda_s: must be finite and >= 0");
  }
  if (!(config.kernel_bandwidth > 0.0) || !std::isfinite(config.kernel_bandwidth)) {
    flag("kernel_bandwidth: must be finite and > 0");
  }
  return violations;
}

void validate_campaign_config(const CampaignConfig& config) {
  const std::string violations = campaign_config_violations(config);
  if (!violations.empty()) {
    throw Error("config", "invalid campaign config: " + violations);
  }
}

std::int64_t CampaignLog::total_spent() const {
  std::int64_t spent = 0;
  for (const RoundRecord& record : rounds) {
    spent += record.spent;
  }
  return spent;
}

CountTriple CampaignLog::total_granted() const {
  CountTriple granted;
  for (const RoundRecord& record : rounds) {
    for (AnnotationType type : kAnnotationTypes) {
      granted[type] += record.granted[type];
    }
  }
  return granted;
}

std::int64_t max_budget(const Pool& pool, const CostTriple& costs) {
  std::int64_t total = 0;
  for (const SampleRecord& sample : pool.samples()) {
    for (AnnotationType type : kAnnotationTypes) {
      if (!sample.annotated.test(type)) {
        total += costs[type];
      }
    }
  }
  return total;
}

Pool init_pool(std::vector<SampleRecord> samples, double initial_fraction, Rng& rng) {
  if (!(initial_fraction >= 0.0 && initial_fraction < 1.0)) {
    throw std::invalid_argument("initial_fraction must be in [0, 1)");
  }
  const std::size_t n = samples.size();
  const auto take = static_cast<std::size_t>(
      std::floor(initial_fraction * static_cast<double>(n)));

  // Partial Fisher-Yates: the first `take` slots end up holding a uniform
  // draw without replacement.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    order[i] = i;
  }
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next_below(n - i));
    std::swap(order[i], order[j]);
  }
  for (std::size_t i = 0; i < take; ++i) {
    samples[order[i]].annotated = SelectionMask::all();
  }
  return Pool(std::move(samples));
}

std::int64_t allocate_budget(std::int64_t total, int rounds, int round_index,
                             std::int64_t carryover) {
  if (total < 0 || rounds < 1 || round_index < 0 || round_index >= rounds || carryover < 0) {
    throw std::invalid_argument("invalid budget allocation arguments");
  }
  std::int64_t allocation = total / rounds + carryover;
  if (round_index == rounds - 1) {
    allocation += total % rounds;
  }
  return allocation;
}

RoundResult run_round(const Pool& pool, const ValueState& values, std::int64_t round_budget,
                      const CampaignConfig& config, const WorldOracle& oracle, int round,
                      double previous_iou) {
  if (round_budget < 0) {
    throw std::invalid_argument("round budget must be non-negative");
  }
  const std::vector<ScoredCandidate> scored = score_candidates(pool, config, oracle, round);

  SelectionProblem problem;
  problem.budget = round_budget;
  problem.groups.reserve(scored.size());
  for (const ScoredCandidate& candidate : scored) {
    SampleRecord x = pool[candidate.index];
    x.uncertainty = candidate.uncertainty;
    problem.groups.push_back({x.id, enumerate_options(x, config.costs, values.values,
                                                      config.lambda_u, config.lambda_s,
                                                      candidate.max_sim)});
  }

  const SelectionResult selection = solve(problem, config.solver);

  RoundResult result;
  result.pool = pool;
  result.values = values;
  CountTriple granted;
  for (std::size_t g = 0; g < selection.assignment.size(); ++g) {
    const auto& [id, mask] = selection.assignment[g];
    if (mask.any()) {
      result.pool.grant(scored[g].index, mask);
      for (AnnotationType type : kAnnotationTypes) {
        if (mask.test(type)) {
          ++granted[type];
        }
      }
    }
  }

  result.record = finish_round(result.pool, result.values, oracle, round, previous_iou,
                               round_budget, selection.total_cost, granted,
                               selection.total_profit);
  return result;
}

CampaignLog run_campaign(const CampaignConfig& config, const WorldOracle& oracle) {
  return run_loop(config, oracle, &run_round);
}

CampaignLog run_random_baseline(const CampaignConfig& config, const WorldOracle& oracle) {
  return run_loop(config, oracle, &run_random_round);
}

}  // namespace annosel
