#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "annosel/rng.hpp"
#include "annosel/solver.hpp"
#include "annosel/types.hpp"
#include "annosel/value_update.hpp"

namespace annosel {

// The seam between the selection machinery and whatever "learns" from the
// annotations. The synthetic world implements it; a recorded-data oracle
// implements the same surface, and a real trainer could too.
class WorldOracle {
 public:
  virtual ~WorldOracle() = default;

  // The full sample set as it exists before any campaign runs.
  virtual const std::vector<SampleRecord>& samples() const = 0;

  // Model quality after training on `pool`. `round` is 0 for the initial
  // pool, then 1..K after each selection round.
  virtual double eval_iou(const Pool& pool, int round) const = 0;

  // Per-type prediction uncertainty for sample x given the current pool.
  virtual UncertaintyTriple eval_uncertainty(const Pool& pool, const SampleRecord& x,
                                             int round) const = 0;
};

struct CampaignConfig {
  // Exactly one of these decides the total spendable budget; the fraction is
  // relative to max_budget() of the pool as the oracle provides it.
  std::optional<std::int64_t> total_budget;
  std::optional<double> budget_fraction;

  int rounds = 10;                           // K
  double initial_fraction = 0.2;             // share of samples fully annotated up front
  CostTriple costs{10, 1, 7};
  ValueTriple initial_values{1.0, 1.0, 1.0};
  double lambda_u = 1.0;                     // uncertainty weight
  double lambda_s = 0.5;                     // similarity penalty weight
  double kernel_bandwidth = 1.0;
  SolverKind solver = SolverKind::kDp;
  std::uint64_t seed = 1;
};

// "field: problem; field: problem" for every violated field, empty when valid.
std::string campaign_config_violations(const CampaignConfig& config);

// Throws annosel::Error("config", ...) listing every violated field.
void validate_campaign_config(const CampaignConfig& config);

struct RoundRecord {
  int round = 0;                // 1-based
  std::int64_t allocated = 0;   // b_t, including carryover
  std::int64_t spent = 0;
  CountTriple granted;
  double iou_after = 0.0;
  double delta_iou = 0.0;
  ValueTriple values_after;
  double objective = 0.0;       // solver total profit for this round
};

struct CampaignLog {
  CampaignConfig config;
  std::int64_t max_budget = 0;
  std::int64_t total_budget = 0;
  double initial_iou = 0.0;
  std::vector<RoundRecord> rounds;
  // Share of granted annotations per type; sums to 1 when anything was
  // granted, all zeros otherwise.
  ValueTriple annotation_distribution;

  double final_iou() const { return rounds.empty() ? initial_iou : rounds.back().iou_after; }
  std::int64_t total_spent() const;
  CountTriple total_granted() const;
};

// Cost of giving every sample every annotation type it still lacks.
std::int64_t max_budget(const Pool& pool, const CostTriple& costs);

// Marks floor(fraction * N) uniformly chosen samples as fully annotated.
Pool init_pool(std::vector<SampleRecord> samples, double initial_fraction, Rng& rng);

// Per-round budget: floor(total/K) plus the previous round's unspent
// carryover; the final round also absorbs total mod K.
std::int64_t allocate_budget(std::int64_t total, int rounds, int round_index,
                             std::int64_t carryover);

struct RoundResult {
  Pool pool;
  ValueState values;
  RoundRecord record;
};

// One selection round: query uncertainties and similarities for every
// candidate, solve the budgeted selection problem, grant the chosen
// annotations, measure the oracle IoU and update the value estimates.
RoundResult run_round(const Pool& pool, const ValueState& values, std::int64_t round_budget,
                      const CampaignConfig& config, const WorldOracle& oracle, int round,
                      double previous_iou);

// Full K-round campaign; deterministic given (config, oracle).
CampaignLog run_campaign(const CampaignConfig& config, const WorldOracle& oracle);

// Control arm: each round grants uniformly random affordable (sample, type)
// annotations instead of solving the selection problem. Same log schema.
CampaignLog run_random_baseline(const CampaignConfig& config, const WorldOracle& oracle);

}  // namespace annosel
