#pragma once

namespace asrmeso {

inline constexpr const char* kVersion = "1.0.0";

}
