#pragma once

namespace helpfuse {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace helpfuse
