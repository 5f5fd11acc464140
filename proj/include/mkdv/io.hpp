#pragma once

#include <string>

namespace mkdv {

/// Formats a double with 17 significant digits; the round-trip through this
/// representation reproduces the exact binary value, which keeps repeated
/// serialisations byte-identical.
std::string format_double(double v);

} // namespace mkdv
