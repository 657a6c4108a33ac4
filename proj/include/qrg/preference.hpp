#pragma once

#include "qrg/cost.hpp"
#include "qrg/game.hpp"

#include <vector>

namespace qrg {

enum class Relation { nash, secure };

// x_j > y_j: player j strictly prefers y.
bool nash_prefers(Player j, const CostProfile& x, const CostProfile& y);

// x <_j y: x_j > y_j, or x_j = y_j with y >= x componentwise and y != x.
bool secure_prefers(Player j, const CostProfile& x, const CostProfile& y);

// x <=_j y: x <_j y or x = y.
bool secure_prefers_eq(Player j, const CostProfile& x, const CostProfile& y);

bool prefers(Relation r, Player j, const CostProfile& x, const CostProfile& y);

// No y in the set with x <_j y.
bool is_maximal(Player j, const CostProfile& x, const std::vector<CostProfile>& set);

const char* relation_name(Relation r);

}  // namespace qrg
