#pragma once

namespace eddy {

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace eddy
