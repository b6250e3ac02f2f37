#pragma once

#include <stdexcept>
#include <string>

namespace annosel {

// Operational failure with a stable category ("io", "parse", "config",
// "solver", "oracle"). Contract violations use std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& message)
      : std::runtime_error(message), category_(std::move(category)) {}

  const std::string& category() const noexcept { return category_; }

 private:
  std::string category_;
};

}  // namespace annosel
