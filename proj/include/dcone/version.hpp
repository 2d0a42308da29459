#pragma once

namespace dcone {
inline constexpr const char* kVersion = "0.1.0";
}
