#include "densitrace/warnings.hpp"

#include <iostream>
#include <mutex>
#include <string>

namespace densitrace {

namespace {
std::mutex handler_mutex;
WarningHandler& handler_slot() {
  static WarningHandler handler = [](std::string_view msg) {
    std::cerr << "warning: " << msg << '\n';
  };
  return handler;
}
}  // namespace

WarningHandler set_warning_handler(WarningHandler handler) {
  std::lock_guard<std::mutex> lock(handler_mutex);
  WarningHandler previous = handler_slot();
  handler_slot() = std::move(handler);
  return previous;
}

void warn(std::string_view message) {
  WarningHandler current;
  {
    std::lock_guard<std::mutex> lock(handler_mutex);
    current = handler_slot();
  }
  if (current) current(message);
}

void warn_if_p_geq_half(double p, std::string_view where) {
  if (p >= 0.5) {
    warn(std::string(where) + ": p = " + std::to_string(p) +
         " >= 0.5, estimator guarantees do not apply");
  }
}

}  // namespace densitrace
