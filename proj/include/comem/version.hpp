#pragma once

namespace comem {

inline constexpr const char *kVersion = "0.1.0";

} // namespace comem
