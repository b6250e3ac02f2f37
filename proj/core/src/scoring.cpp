#include "annosel/scoring.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace annosel {

double gaussian_similarity(std::span<const double> a, std::span<const double> b,
                           double bandwidth) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("feature dimension mismatch: " + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()));
  }
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw std::invalid_argument("kernel bandwidth must be a positive finite real");
  }
  double sq_dist = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sq_dist += d * d;
  }
  // Any NaN/inf coordinate surfaces as a non-finite distance.
  if (!std::isfinite(sq_dist)) {
    throw std::invalid_argument("non-finite feature input to gaussian_similarity");
  }
  return std::exp(-sq_dist / (2.0 * bandwidth * bandwidth));
}

double max_similarity(const SampleRecord& x, std::span<const SampleRecord> labeled,
                      double bandwidth) {
  double best = 0.0;
  for (const SampleRecord& y : labeled) {
    best = std::max(best, gaussian_similarity(x.features, y.features, bandwidth));
  }
  return best;
}

double max_similarity(std::span<const double> features, const Pool& pool,
                      std::span<const std::size_t> indices, double bandwidth) {
  double best = 0.0;
  for (std::size_t index : indices) {
    best = std::max(best, gaussian_similarity(features, pool[index].features, bandwidth));
  }
  return best;
}

std::int64_t selection_cost(SelectionMask requested, const CostTriple& costs) {
  std::int64_t total = 0;
  for (AnnotationType type : kAnnotationTypes) {
    if (requested.test(type)) {
      total += costs[type];
    }
  }
  return total;
}

double selection_profit(const SampleRecord& x, SelectionMask requested,
                        const ValueTriple& values, double lambda_u, double lambda_s,
                        double max_sim) {
  if (requested.overlaps(x.annotated)) {
    throw std::invalid_argument("sample \"" + x.id +
                                "\": requested annotation type already present");
  }
  assert(lambda_u >= 0.0 && lambda_s >= 0.0);
  if (requested.none()) {
    return 0.0;
  }
  double gain = 0.0;
  for (AnnotationType type : kAnnotationTypes) {
    if (requested.test(type)) {
      gain += values[type] + lambda_u * x.uncertainty[type];
    }
  }
  return gain - lambda_s * max_sim;
}

}  // namespace annosel
