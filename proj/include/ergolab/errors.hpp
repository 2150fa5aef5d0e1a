#pragma once

#include <stdexcept>
#include <string>

namespace ergolab {

// A numerical routine left its tolerance; carries the offending input.
struct NumericFailure : std::runtime_error {
  NumericFailure(const std::string& what, double offending_value)
      : std::runtime_error(what), offending(offending_value) {}
  double offending;
};

// Thrown when a fit window reaches masses equal to zero; the caller
// should shrink n_hi to last_positive_n.
struct WindowTruncation : std::runtime_error {
  WindowTruncation(const std::string& what, int last_positive)
      : std::runtime_error(what), last_positive_n(last_positive) {}
  int last_positive_n;
};

struct ConfigError : std::runtime_error {
  ConfigError(const std::string& what, int line_number = 0,
              std::string key_name = {})
      : std::runtime_error(what), line(line_number), key(std::move(key_name)) {}
  int line;
  std::string key;
};

}  // namespace ergolab
