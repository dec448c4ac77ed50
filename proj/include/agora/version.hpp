#pragma once

namespace agora {
inline constexpr const char* kLibraryVersion = "0.1.0";
}
