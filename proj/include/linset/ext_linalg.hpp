#pragma once

// Dense linear algebra over the top field F_{q^h}.

#include <optional>
#include <span>
#include <vector>

#include "linset/field.hpp"

namespace linset {

using ExtVec = std::vector<Fe>;
using ExtRows = std::vector<ExtVec>;

bool is_zero(std::span<const Fe> v);
// In-place reduced row-echelon form; zero rows are dropped. Returns the rank.
int ext_rref(const FieldTower& t, ExtRows& rows);
int ext_rank(const FieldTower& t, ExtRows rows);
// Inverse of a square matrix, or nullopt when singular.
std::optional<ExtRows> ext_inverse(const FieldTower& t, const ExtRows& m);
// Row vector times matrix.
ExtVec ext_vec_mat(const FieldTower& t, std::span<const Fe> x, const ExtRows& m);
// Scales v so its first nonzero entry is 1; v must be nonzero.
ExtVec ext_normalize(const FieldTower& t, std::span<const Fe> v);
// Is v in the F_{q^h}-row space of rows?
bool ext_in_span(const FieldTower& t, const ExtRows& rows, std::span<const Fe> v);

}  // namespace linset
