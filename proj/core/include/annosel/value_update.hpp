#pragma once

#include "annosel/types.hpp"

namespace annosel {

// Running per-type value estimates plus how many annotations of each type
// have been granted so far.
struct ValueState {
  ValueTriple values;
  CountTriple cumulative_counts;

  friend bool operator==(const ValueState&, const ValueState&) = default;
};

// State at campaign start: configured prior values and the annotation counts
// already present in the initial pool. Throws std::invalid_argument on
// negative or non-finite prior values.
ValueState initial_values(const ValueTriple& config_values, const Pool& initial_pool);

// One exponential value update after a selection round that granted
// `new_counts` annotations and moved the measured IoU by `delta_iou`:
//
//   V_i' = alpha_i * V_i + (1 - alpha_i) * beta_i * delta_iou
//   alpha_i = n_i / (n_i + m_i)            (n = prior count, m = new count)
//   beta_i  = V_i * m_i / sum_j V_j * m_j  (pre-update values throughout)
//
// Degenerate denominators: m_i = 0 gives alpha_i = 1 (so V_i is untouched,
// bit-exact); an all-zero beta denominator gives beta = 0. A result that
// would dip below zero is clamped to 0 and noted on stderr. Counts
// accumulate exactly.
ValueState update_values(const ValueState& state, const CountTriple& new_counts,
                         double delta_iou);

}  // namespace annosel
