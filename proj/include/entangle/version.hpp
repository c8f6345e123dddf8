#pragma once

#include <string>

// Set by the build from `git describe`; falls back to the release number.
#ifndef ENTANGLE_VERSION
#define ENTANGLE_VERSION "0.1.0"
#endif

namespace entangle {

inline std::string version_string() { return ENTANGLE_VERSION; }

}  // namespace entangle
