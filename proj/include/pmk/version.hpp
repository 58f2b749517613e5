#pragma once

namespace pmk {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace pmk
