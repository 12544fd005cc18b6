#pragma once

namespace cremona {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cremona
