#pragma once

namespace bikemono {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bikemono
