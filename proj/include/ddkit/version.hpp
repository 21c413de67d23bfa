#pragma once

namespace ddkit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ddkit
