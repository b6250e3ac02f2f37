#pragma once

#include <cstdint>
#include <span>

#include "annosel/types.hpp"

namespace annosel {

// Gaussian RBF kernel exp(-|a-b|^2 / (2*bandwidth^2)). Symmetric, equals 1 at
// zero distance. Throws std::invalid_argument on dimension mismatch,
// non-finite inputs or bandwidth <= 0.
double gaussian_similarity(std::span<const double> a, std::span<const double> b,
                           double bandwidth);

// Max kernel similarity between x and any labeled sample; 0 for an empty
// labeled set.
double max_similarity(const SampleRecord& x, std::span<const SampleRecord> labeled,
                      double bandwidth);

// Same, over the pool samples selected by `indices`.
double max_similarity(std::span<const double> features, const Pool& pool,
                      std::span<const std::size_t> indices, double bandwidth);

// Cost of requesting the masked annotation types: sum of per-type costs.
std::int64_t selection_cost(SelectionMask requested, const CostTriple& costs);

// Objective contribution of granting `requested` to sample x:
//   sum_i z_i*V_i  +  lambda_u * sum_i z_i*u_i(x)  -  lambda_s * s_x * [z != 0]
// The similarity penalty applies once per selected sample, not per type.
// Throws std::invalid_argument if `requested` overlaps x.annotated.
double selection_profit(const SampleRecord& x, SelectionMask requested,
                        const ValueTriple& values, double lambda_u, double lambda_s,
                        double max_sim);

}  // namespace annosel
