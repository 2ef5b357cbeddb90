#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace boost {

// Boost 1.74's mixed rational/integer equality recurses forever under C++20
// rewritten comparisons. Exact non-template overloads take precedence.
inline bool operator==(const rational<std::int64_t>& r, std::int64_t i) {
  return r.denominator() == 1 && r.numerator() == i;
}
inline bool operator==(const rational<std::int64_t>& r, int i) {
  return r == static_cast<std::int64_t>(i);
}
inline bool operator==(std::int64_t i, const rational<std::int64_t>& r) { return r == i; }
inline bool operator==(int i, const rational<std::int64_t>& r) { return r == i; }

}  // namespace boost

namespace localmech {

using Rational = boost::rational<std::int64_t>;

std::string ToString(const Rational& r);

/// Parses "7", "-3/4" or "1.25" exactly. Throws FormatError (line 0).
Rational ParseRational(std::string_view text);

/// H_k = 1 + 1/2 + ... + 1/k; H_0 = 0.
Rational Harmonic(std::int64_t k);

std::int64_t FloorDiv(const Rational& r);
std::int64_t CeilDiv(const Rational& r);

}  // namespace localmech
