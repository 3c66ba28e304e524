#pragma once

#include <functional>
#include <string_view>

namespace densitrace {

using WarningHandler = std::function<void(std::string_view)>;

/// Replaces the process-wide warning sink (default: stderr). Returns the
/// previous handler so tests can restore it.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

/// Estimator guarantees hold for p < 0.5; above that the supersequence
/// weights q = p/(1-p) reach 1 and the alternating sums stop contracting.
void warn_if_p_geq_half(double p, std::string_view where);

}  // namespace densitrace
