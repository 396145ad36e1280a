#pragma once

namespace imst {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace imst
