#pragma once

namespace detperm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace detperm
