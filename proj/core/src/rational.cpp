#include "localmech/rational.hpp"

#include <charconv>

#include "localmech/errors.hpp"

namespace localmech {

std::string ToString(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

std::int64_t ParseInt(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw FormatError(0, "not a rational number: '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Rational ParseRational(std::string_view text) {
  const std::string_view whole = text;
  bool negative = false;
  if (!text.empty() && text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  Rational value;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const std::int64_t den = ParseInt(text.substr(slash + 1), whole);
    if (den == 0) throw FormatError(0, "zero denominator: '" + std::string(whole) + "'");
    value = Rational(ParseInt(text.substr(0, slash), whole), den);
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const std::string_view frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 15) {
      throw FormatError(0, "not a rational number: '" + std::string(whole) + "'");
    }
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const std::string_view int_part = text.substr(0, dot);
    const std::int64_t ip = int_part.empty() ? 0 : ParseInt(int_part, whole);
    value = Rational(ip) + Rational(ParseInt(frac, whole), scale);
  } else {
    value = Rational(ParseInt(text, whole));
  }
  if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
    throw FormatError(0, "not a rational number: '" + std::string(whole) + "'");
  }
  return negative ? -value : value;
}

Rational Harmonic(std::int64_t k) {
  Rational h(0);
  for (std::int64_t i = 1; i <= k; ++i) h += Rational(1, i);
  return h;
}

std::int64_t FloorDiv(const Rational& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
  return q;
}

std::int64_t CeilDiv(const Rational& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() > 0) ++q;
  return q;
}

}  // namespace localmech
