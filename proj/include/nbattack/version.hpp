#pragma once

namespace nbattack {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nbattack
