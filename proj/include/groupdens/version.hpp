#pragma once

#define GROUPDENS_VERSION "0.1.0"

namespace groupdens {
inline const char* version() { return GROUPDENS_VERSION; }
}
