#pragma once

namespace lawless {

inline constexpr const char* kToolName = "lawless";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace lawless
