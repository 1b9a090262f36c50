#pragma once

namespace bonlab {

inline constexpr const char* kVersion = "0.1.0";

} // namespace bonlab
