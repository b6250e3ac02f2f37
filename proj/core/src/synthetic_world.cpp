#include "annosel/synthetic_world.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "annosel/error.hpp"
#include "annosel/rng.hpp"
#include "annosel/scoring.hpp"

namespace annosel {

std::string world_config_violations(const WorldConfig& config) {
  std::string violations;
  auto flag = [&violations](const std::string& message) {
    if (!violations.empty()) {
      violations += "; ";
    }
    violations += message;
  };

  if (config.n_samples < 1) flag("world.n: must be >= 1");
  if (config.feature_dim < 1) flag("world.dim: must be >= 1");
  if (config.n_clusters < 1) flag("world.clusters: must be >= 1");
  if (!(config.cluster_spread > 0.0) || !std::isfinite(config.cluster_spread)) {
    flag("world.spread: must be finite and > 0");
  }
  for (AnnotationType type : kAnnotationTypes) {
    if (!(config.type_weights[type] > 0.0) || !std::isfinite(config.type_weights[type])) {
      flag(std::string("world.weights.") + type_code(type) + ": must be finite and > 0");
    }
  }
  if (!(config.iou_floor >= 0.0 && config.iou_floor < 1.0)) {
    flag("world.iou0: must be in [0, 1)");
  }
  if (!(config.iou_ceiling > config.iou_floor && config.iou_ceiling <= 1.0)) {
    flag("world.ioumax: must be in (world.iou0, 1]");
  }
  if (!(config.saturation_scale > 0.0) || !std::isfinite(config.saturation_scale)) {
    flag("world.tau: must be finite and > 0");
  }
  if (!(config.uncertainty_noise >= 0.0) || !std::isfinite(config.uncertainty_noise)) {
    flag("world.noise: must be finite and >= 0");
  }
  return violations;
}

void validate_world_config(const WorldConfig& config) {
  const std::string violations = world_config_violations(config);
  if (!violations.empty()) {
    throw Error("config", "invalid world config: " + violations);
  }
}

SyntheticWorld generate_world(const WorldConfig& config) {
  validate_world_config(config);

  SyntheticWorld world;
  world.config = config;

  const std::size_t n = static_cast<std::size_t>(config.n_samples);
  const std::size_t dim = static_cast<std::size_t>(config.feature_dim);
  const std::size_t clusters = static_cast<std::size_t>(config.n_clusters);

  Rng center_rng(derive_seed(config.seed, {kStreamClusterCenters}));
  std::vector<std::vector<double>> centers(clusters, std::vector<double>(dim));
  for (auto& center : centers) {
    for (double& coordinate : center) {
      coordinate = center_rng.next_in(-1.0, 1.0);
    }
  }

  Rng feature_rng(derive_seed(config.seed, {kStreamFeatures}));
  Rng difficulty_rng(derive_seed(config.seed, {kStreamDifficulty}));

  world.samples.reserve(n);
  world.cluster_of.reserve(n);
  world.difficulty.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t cluster = i % clusters;
    SampleRecord sample;
    char id[24];
    std::snprintf(id, sizeof(id), "s%04zu", i);
    sample.id = id;
    sample.features.resize(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      sample.features[k] = centers[cluster][k] + config.cluster_spread * feature_rng.next_normal();
    }
    const double difficulty =
        std::exp(difficulty_rng.next_in(std::log(0.5), std::log(2.0)));
    sample.uncertainty = {difficulty, difficulty, difficulty};  // empty-pool baseline
    world.samples.push_back(std::move(sample));
    world.cluster_of.push_back(static_cast<int>(cluster));
    world.difficulty.push_back(difficulty);
  }
  return world;
}

SimOracle::SimOracle(SyntheticWorld world, double kernel_bandwidth)
    : world_(std::move(world)), bandwidth_(kernel_bandwidth) {
  if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_)) {
    throw std::invalid_argument("kernel bandwidth must be finite and > 0");
  }
  index_by_id_.reserve(world_.samples.size());
  for (std::size_t i = 0; i < world_.samples.size(); ++i) {
    index_by_id_.emplace(world_.samples[i].id, i);
  }
}

std::size_t SimOracle::world_index(std::string_view id) const {
  auto it = index_by_id_.find(std::string(id));
  if (it == index_by_id_.end()) {
    throw Error("oracle", "sample \"" + std::string(id) + "\" is not part of this world");
  }
  return it->second;
}

double SimOracle::eval_iou(const Pool& pool, int /*round*/) const {
  const WorldConfig& config = world_.config;
  std::vector<double> cluster_best(static_cast<std::size_t>(config.n_clusters), 0.0);
  double signal = 0.0;
  for (const SampleRecord& sample : pool.samples()) {
    const std::size_t index = world_index(sample.id);
    double weight = 0.0;
    for (AnnotationType type : kAnnotationTypes) {
      if (sample.annotated.test(type)) {
        weight += config.type_weights[type];
      }
    }
    if (weight > 0.0) {
      signal += weight;
      auto& best = cluster_best[static_cast<std::size_t>(world_.cluster_of[index])];
      best = std::max(best, weight);
    }
  }
  for (double best : cluster_best) {
    signal += best;
  }
  return config.iou_ceiling -
         (config.iou_ceiling - config.iou_floor) * std::exp(-signal / config.saturation_scale);
}

UncertaintyTriple SimOracle::eval_uncertainty(const Pool& pool, const SampleRecord& x,
                                              int round) const {
  const std::size_t index = world_index(x.id);
  const WorldConfig& config = world_.config;
  UncertaintyTriple result;
  for (AnnotationType type : kAnnotationTypes) {
    // Max similarity against pool samples that already carry this type.
    double best_sim = 0.0;
    for (const SampleRecord& y : pool.samples()) {
      if (y.annotated.test(type)) {
        best_sim = std::max(best_sim, gaussian_similarity(x.features, y.features, bandwidth_));
      }
    }
    double u = world_.difficulty[index] * (1.0 - best_sim);
    if (config.uncertainty_noise > 0.0) {
      Rng noise_rng(derive_seed(config.seed, {kStreamUncertaintyNoise,
                                              static_cast<std::uint64_t>(round),
                                              static_cast<std::uint64_t>(index),
                                              static_cast<std::uint64_t>(type_index(type))}));
      u += config.uncertainty_noise * noise_rng.next_normal();
    }
    result[type] = std::max(0.0, u);
  }
  return result;
}

}  // namespace annosel
