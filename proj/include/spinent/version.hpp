#pragma once

namespace spinent {

inline constexpr const char* kVersion = "spin-ent 0.1.0";

}  // namespace spinent
