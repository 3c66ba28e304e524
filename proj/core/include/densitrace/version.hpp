#pragma once

namespace densitrace {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace densitrace
