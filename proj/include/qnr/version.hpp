#pragma once

namespace qnr {
inline constexpr const char* kVersion = "0.1.0";
}
