#pragma once

namespace gbandit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gbandit
