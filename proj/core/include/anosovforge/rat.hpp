#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace anosov {

/// Exact rational scalar. GMP keeps values canonical (gcd 1, positive
/// denominator), which is what all the exact comparisons below rely on.
using Rat = mpq_class;

/// Build a canonical rational from an integer pair.
Rat rat(long num, long den = 1);

/// Parse "p/q" or "p". Throws std::invalid_argument on malformed input.
Rat rat_parse(const std::string& s);

/// Serialize as "p/q" (the denominator is always written, e.g. "3/1").
std::string rat_str(const Rat& r);

double rat_d(const Rat& r);

/// Exact square root when the value is a square of a rational.
std::optional<Rat> rat_sqrt_exact(const Rat& r);

int sign(const Rat& r);

}  // namespace anosov
