#pragma once

namespace hypwave {

inline constexpr const char* kVersion = "0.1.0";

} // namespace hypwave
