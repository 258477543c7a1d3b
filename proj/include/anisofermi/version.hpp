#pragma once

namespace anisofermi {

inline constexpr const char* kVersion = "0.1.0";

} // namespace anisofermi
