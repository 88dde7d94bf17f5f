#pragma once

// Algebraic and geometric fields of linearity.

#include <cstdint>
#include <optional>
#include <vector>

#include "linset/linear_set.hpp"

namespace linset {

// Is U closed under multiplication by F_{q^s}? Requires s | h.
bool is_fqs_linear(const FieldTower& t, const FqSubspace& u, int s);
// Largest s | h with U an F_{q^s}-space.
int algebraic_max_field(const FieldTower& t, const FqSubspace& u);
// F_q-span of {x u : x in F_{q^s}, u in rows}.
FqSubspace fqs_span(const FieldTower& t, const FqSubspace& u, int s);

enum class SearchStatus { Witness, None, Inconclusive };
const char* to_string(SearchStatus s);

struct FieldSearch {
  int s = 0;
  SearchStatus status = SearchStatus::None;
  std::optional<FqSubspace> witness;
  std::uint64_t nodes = 0;
};

struct LinearityReport {
  int algebraic_max_s = 1;
  std::vector<FieldSearch> fields;  // one per s | h, s > 1, ascending
  int geometric_max_s = 1;          // ignores inconclusive entries
};

// Default node budget per s; the LINSET_BUDGET environment variable overrides it.
std::uint64_t default_search_budget();

// Searches for an F_{q^s}-linear W with L_W = L. Exhaustive within the node
// budget: a None status means no such W exists.
FieldSearch find_fqs_witness(const FieldTower& t, const LinearSet& l, int s, std::uint64_t budget);
// Reference search enumerating every F_{q^s}-subspace of F_{q^s}^{rh/s} of
// each admissible dimension. Slow; meant for cross-checking.
FieldSearch naive_fqs_witness(const FieldTower& t, const LinearSet& l, int s, EnumerationLimits limits = {});

LinearityReport geometric_fields(const FieldTower& t, const FqSubspace& u, std::uint64_t budget);
LinearityReport geometric_fields(const FieldTower& t, const LinearSet& l, int algebraic_max_s, std::uint64_t budget);

struct RankHLineCheck {
  int algebraic = 0;
  int min_weight = 0;
  int geometric = 0;
  bool inconclusive = false;
  bool consistent() const { return !inconclusive && algebraic == min_weight && min_weight == geometric; }
};
// Rank-h subspaces of F_{q^h}^2 only.
RankHLineCheck check_rank_h_line(const FieldTower& t, const FqSubspace& u, std::uint64_t budget);

}  // namespace linset
