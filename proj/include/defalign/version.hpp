#pragma once

namespace defalign {

inline constexpr const char* kToolName = "defalign";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace defalign
