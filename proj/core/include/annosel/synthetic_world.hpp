#pragma once

#include <cstdint>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "annosel/campaign.hpp"
#include "annosel/types.hpp"

namespace annosel {

// Parameters of the synthetic stand-in for a learner plus dataset. Feature
// vectors come from Gaussian cluster blobs; IoU responds to accumulated
// annotation signal with exponential saturation.
struct WorldConfig {
  int n_samples = 100;
  int feature_dim = 2;
  int n_clusters = 5;
  double cluster_spread = 0.15;
  ValueTriple type_weights{5.0, 1.0, 3.0};  // signal per annotation of each type
  double iou_floor = 0.3;                   // IoU of an untrained model
  double iou_ceiling = 0.9;                 // fully-supervised asymptote
  double saturation_scale = 300.0;          // tau in IoU = ceil - (ceil-floor)*exp(-g/tau)
  double uncertainty_noise = 0.01;          // stddev of per-query noise
  std::uint64_t seed = 1;
};

// "field: problem; field: problem" for every violated field, empty when valid.
std::string world_config_violations(const WorldConfig& config);

// Throws annosel::Error("config", ...) listing every violated field.
void validate_world_config(const WorldConfig& config);

struct SyntheticWorld {
  WorldConfig config;
  std::vector<SampleRecord> samples;  // empty annotation masks
  std::vector<int> cluster_of;
  std::vector<double> difficulty;     // log-uniform in [0.5, 2]
};

// Cluster centers uniform in [-1,1]^d, samples assigned round-robin,
// features = center + N(0, spread^2). Deterministic given config.seed.
SyntheticWorld generate_world(const WorldConfig& config);

// WorldOracle backed by a SyntheticWorld.
//
// eval_iou: every annotation of type i contributes weight w_i; in each
// cluster the heaviest annotated sample counts double (coverage bonus), so
// adding any annotation bit strictly raises the signal g, and
// IoU = ceil - (ceil - floor) * exp(-g / tau).
//
// eval_uncertainty: u_i(x) = difficulty(x) * (1 - S_i(x)) + noise, clamped at
// 0, where S_i is the max kernel similarity to pool samples annotated with
// type i. Noise is seeded per (round, sample, type).
class SimOracle final : public WorldOracle {
 public:
  SimOracle(SyntheticWorld world, double kernel_bandwidth);

  const std::vector<SampleRecord>& samples() const override { return world_.samples; }
  double eval_iou(const Pool& pool, int round) const override;
  UncertaintyTriple eval_uncertainty(const Pool& pool, const SampleRecord& x,
                                     int round) const override;

  const SyntheticWorld& world() const { return world_; }

 private:
  std::size_t world_index(std::string_view id) const;

  SyntheticWorld world_;
  double bandwidth_;
  std::unordered_map<std::string, std::size_t> index_by_id_;
};

}  // namespace annosel
