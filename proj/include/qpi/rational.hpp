#pragma once

#include <gmpxx.h>

#include <string>

namespace qpi {

// The ground field: exact arbitrary-precision rationals. Every equality
// test in the library is decidable; no floating point anywhere.
using Rational = mpq_class;

// Renders "p" for integers and "p/q" otherwise.
std::string rational_to_string(const Rational& r);

// Accepts "p", "-p", "p/q". Throws UsageError on anything else or q = 0.
Rational parse_rational(const std::string& text);

}  // namespace qpi
