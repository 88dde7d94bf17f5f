#pragma once

// Directions determined by a function f: F_{q0} -> F_{q0}, and the
// trichotomy relating their number N to the divisibility parameter r.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "linset/field.hpp"

namespace linset {

// f as a table indexed by element code; the tower should have e = 1, so that
// q0 = p^h and subfields are indexed by their degree over F_p.
struct GraphMap {
  std::vector<Fe> table;
};

// The F_p-linear map sending the power-basis element x^j to images[j].
GraphMap linear_map(const FieldTower& t, std::span<const Fe> images);

struct DirectionCount {
  std::uint64_t n = 0;  // N
  std::uint64_t r = 1;
};
DirectionCount count_directions(const FieldTower& t, const GraphMap& f);

// Largest d | [F_{q0}:F_p] with f additive and F_{p^d}-homogeneous; 0 when f
// is not additive.
int linear_over(const FieldTower& t, const GraphMap& f);
// Is x -> f(x) - f(0) linear over the subfield with r elements?
bool graph_is_fr_linear(const FieldTower& t, const GraphMap& f, std::uint64_t r);

struct TrichotomyResult {
  DirectionCount dc;
  std::vector<int> cases;  // cases whose conditions hold; exactly one expected
  bool linearity_checked = false;  // r > 2
  bool fr_linear = false;
  int linear_over = 0;
  bool ok() const { return cases.size() == 1 && (!linearity_checked || fr_linear); }
};
TrichotomyResult classify(const FieldTower& t, const GraphMap& f);

}  // namespace linset
