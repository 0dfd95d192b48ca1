#pragma once

namespace pinkam {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pinkam
