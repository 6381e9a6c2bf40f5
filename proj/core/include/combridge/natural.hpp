#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace combridge {

// Exact non-negative integer with no fixed width. Ranks of 20-combinations
// over a few hundred items routinely exceed 2^64.
using Natural = boost::multiprecision::cpp_int;

std::string to_decimal(const Natural& value);

// Parses a canonical decimal: digits only, no sign, no leading zeros (except
// "0" itself). Returns false on any other input.
bool parse_decimal(std::string_view text, Natural& out);

// Minimal number of bytes holding `value` in unsigned big-endian form; zero
// takes one byte.
std::size_t byte_length(const Natural& value);

}  // namespace combridge
