#pragma once

namespace rimnull {

inline constexpr const char* kArtifactVersion = "0.1.0";

}  // namespace rimnull
