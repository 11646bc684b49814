#pragma once

namespace camsad {

inline constexpr const char* kToolName = "camsad";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace camsad
