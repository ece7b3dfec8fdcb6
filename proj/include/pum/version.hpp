#pragma once

namespace pum {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pum
