#include "qrg/cost.hpp"

#include "qrg/errors.hpp"

#include <charconv>
#include <limits>

namespace qrg {

namespace {

std::int64_t parse_int(std::string_view text) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw InputError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string to_string(const Cost& c) { return c.finite() ? to_string(c.value()) : "inf"; }

std::string to_string(const CostProfile& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ", ";
    s += to_string(x[i]);
  }
  return s + ")";
}

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t den = parse_int(text.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(text.substr(0, slash)), den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 15) throw InputError("bad decimal '" + std::string(text) + "'");
    bool negative = !whole.empty() && whole.front() == '-';
    std::int64_t w = whole.empty() || whole == "-" ? 0 : parse_int(whole);
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    std::int64_t f = parse_int(frac);
    if (w > std::numeric_limits<std::int64_t>::max() / scale - 1) {
      throw InputError("decimal out of range: '" + std::string(text) + "'");
    }
    std::int64_t num = (negative ? -1 : 1) * ((negative ? -w : w) * scale + f);
    return Rational(num, scale);
  }
  return Rational(parse_int(text));
}

Cost parse_cost(std::string_view text) {
  if (text == "inf" || text == "+inf" || text == "infinity") return Cost::infinity();
  return Cost(parse_rational(text));
}

}  // namespace qrg
