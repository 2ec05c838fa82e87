#pragma once

#include <gmpxx.h>

#include <string>

namespace chordq {

// Exact rational scalar used throughout the algebraic layer.
using Rat = mpq_class;

// Parses "p", "-p", "p/q" (q > 0 after canonicalization). Throws InvalidArgument.
Rat rat_parse(const std::string& text);

// Canonical form: "p" when the denominator is 1, else "p/q" with q > 0.
std::string rat_str(const Rat& value);

}  // namespace chordq
