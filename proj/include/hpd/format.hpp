#pragma once

#include <string>

namespace hpd {

// Shortest decimal string that reads back to the same double ("nan", "inf"
// and "-inf" for the non-finite values). Independent of the C locale.
std::string format_double(double v);

// Parses a full decimal literal; throws DomainError on trailing garbage.
double parse_double(const std::string& text);

}  // namespace hpd
