#include "annosel/value_update.hpp"

#include <cassert>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace annosel {

ValueState initial_values(const ValueTriple& config_values, const Pool& initial_pool) {
  for (AnnotationType type : kAnnotationTypes) {
    const double v = config_values[type];
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument(std::string("initial value for type '") + type_code(type) +
                                  "' must be finite and non-negative");
    }
  }
  return ValueState{config_values, initial_pool.annotation_counts()};
}

ValueState update_values(const ValueState& state, const CountTriple& new_counts,
                         double delta_iou) {
  assert(std::isfinite(delta_iou));
  for (AnnotationType type : kAnnotationTypes) {
    if (new_counts[type] < 0) {
      throw std::invalid_argument("new annotation counts must be non-negative");
    }
  }

  // Beta shares use the pre-update values for all three types.
  double beta_denominator = 0.0;
  for (AnnotationType type : kAnnotationTypes) {
    beta_denominator += state.values[type] * static_cast<double>(new_counts[type]);
  }

  ValueState next = state;
  for (AnnotationType type : kAnnotationTypes) {
    const std::int64_t prior = state.cumulative_counts[type];
    const std::int64_t fresh = new_counts[type];
    const double alpha =
        fresh == 0 ? 1.0 : static_cast<double>(prior) / static_cast<double>(prior + fresh);
    const double beta = beta_denominator > 0.0
                            ? state.values[type] * static_cast<double>(fresh) / beta_denominator
                            : 0.0;
    double value = alpha * state.values[type] + (1.0 - alpha) * beta * delta_iou;
    if (value < 0.0) {
      std::cerr << "annosel: value estimate for type '" << type_code(type)
                << "' fell below zero (" << value << "); clamped to 0\n";
      value = 0.0;
    }
    next.values[type] = value;
    next.cumulative_counts[type] = prior + fresh;
  }
  return next;
}

}  // namespace annosel
