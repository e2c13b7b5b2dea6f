#pragma once

namespace lagscan {

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace lagscan
