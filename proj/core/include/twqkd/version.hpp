#pragma once

namespace twqkd {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace twqkd
