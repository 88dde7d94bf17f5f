#pragma once

// Explicit families: the block construction, sublines and clubs.

#include <cstdint>
#include <vector>

#include "linset/projection.hpp"

namespace linset {

struct ConstructionParams {
  int s = 2;
  int blocks = 1;           // k = blocks * s + 2
  Fe alpha;                 // degree s over F_q
  std::vector<Fe> betas;    // blocks - 1 elements outside F_{q^s}
};

struct Construction {
  ConstructionParams params;
  int k = 0;
  ProjectionScene scene;
  // Closed-form subspace of F_{q^h}^2: images of e_1..e_k in Omega-coordinates.
  FqSubspace closed_form;
};

// Throws InvalidParams or PiNotDisjoint.
Construction build_construction(const FieldTower& t, const ConstructionParams& params);
// Random alpha of degree s and betas outside F_{q^s}, retried until Pi is disjoint.
ConstructionParams random_construction_params(const FieldTower& t, int s, int blocks, std::uint64_t seed);
// All (s, blocks) with s | h, s >= 2, blocks * s + 2 <= h.
std::vector<std::pair<int, int>> construction_shapes(const FieldTower& t);

// F_{q^s} x F_{q^s}.
FqSubspace build_subline(const FieldTower& t, int s);
// Rank-k subspace of F_{q^h}^2 with <(0,1)> of weight i and every other point of
// weight 1. For i = k - 1 this is F_q x B with B = F_{q^{k-1}} when k - 1 | h.
FqSubspace build_club(const FieldTower& t, int i, int k, std::uint64_t seed = 1);

}  // namespace linset
