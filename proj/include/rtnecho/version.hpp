#pragma once

namespace rtnecho {

inline constexpr const char* kVersion = "0.1.0";

} // namespace rtnecho
