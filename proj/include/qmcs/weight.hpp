#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace qmcs {

/// Exact edge weight. Graph weights are rationals with bounded denominators.
using Weight = boost::multiprecision::cpp_rational;

/// Parse "p/q" or an integer. Throws std::invalid_argument on malformed text.
Weight parse_weight(std::string_view text);

/// Canonical text: integer when the denominator is 1, otherwise "p/q".
std::string format_weight(const Weight& w);

double to_double(const Weight& w);

std::int64_t denominator_of(const Weight& w);

}  // namespace qmcs
