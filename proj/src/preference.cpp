#include "qrg/preference.hpp"

#include "qrg/errors.hpp"

namespace qrg {

namespace {

void check(Player j, const CostProfile& x, const CostProfile& y) {
  if (x.size() != y.size() || j >= x.size()) throw PreconditionError("profile size mismatch");
}

}  // namespace

bool nash_prefers(Player j, const CostProfile& x, const CostProfile& y) {
  check(j, x, y);
  return x[j] > y[j];
}

bool secure_prefers(Player j, const CostProfile& x, const CostProfile& y) {
  check(j, x, y);
  if (x[j] > y[j]) return true;
  if (x[j] != y[j]) return false;
  bool strict = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > y[i]) return false;
    strict = strict || x[i] < y[i];
  }
  return strict;
}

bool secure_prefers_eq(Player j, const CostProfile& x, const CostProfile& y) {
  return x == y || secure_prefers(j, x, y);
}

bool prefers(Relation r, Player j, const CostProfile& x, const CostProfile& y) {
  return r == Relation::nash ? nash_prefers(j, x, y) : secure_prefers(j, x, y);
}

bool is_maximal(Player j, const CostProfile& x, const std::vector<CostProfile>& set) {
  for (const auto& y : set) {
    if (secure_prefers(j, x, y)) return false;
  }
  return true;
}

const char* relation_name(Relation r) { return r == Relation::nash ? "nash" : "secure"; }

}  // namespace qrg
