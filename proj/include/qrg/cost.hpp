#pragma once

#include <boost/rational.hpp>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qrg {

using Rational = boost::rational<std::int64_t>;

// An element of Q+ extended with +inf. Default-constructed value is +inf.
class Cost {
 public:
  Cost() = default;
  Cost(std::int64_t v) : value_(v), finite_(true) {}  // NOLINT: implicit by design
  explicit Cost(Rational v) : value_(v), finite_(true) {}

  static Cost infinity() { return Cost(); }

  bool finite() const { return finite_; }
  // Precondition: finite().
  const Rational& value() const { return value_; }

  friend bool operator==(const Cost& a, const Cost& b) {
    if (a.finite_ != b.finite_) return false;
    return !a.finite_ || a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const Cost& a, const Cost& b) {
    if (!a.finite_ || !b.finite_) {
      if (a.finite_ == b.finite_) return std::strong_ordering::equal;
      return a.finite_ ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ == b.value_) return std::strong_ordering::equal;
    return std::strong_ordering::greater;
  }

 private:
  Rational value_{0};
  bool finite_ = false;
};

inline const Cost kInfinity = Cost::infinity();

// Indexed by 0-based player.
using CostProfile = std::vector<Cost>;

std::string to_string(const Rational& r);
std::string to_string(const Cost& c);
std::string to_string(const CostProfile& x);

// Accepts "inf", integers, "p/q" and decimals such as "2.5".
Cost parse_cost(std::string_view text);
Rational parse_rational(std::string_view text);

}  // namespace qrg
