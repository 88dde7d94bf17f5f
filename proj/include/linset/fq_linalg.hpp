#pragma once

// F_q-linear algebra on F_q^n, where vectors of F_{q^h}^r are flattened to
// F_q^{rh} through the power basis of FieldTower::theta(). Column i*h + j of a
// flat vector is the theta^j coordinate of entry i.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "linset/field.hpp"

namespace linset {

// A subspace of F_q^n in reduced row-echelon form; rows hold GroundField
// indices. Equal subspaces have identical representations.
class FqSubspace {
 public:
  FqSubspace() = default;
  // rows must already be in RREF with no zero rows.
  FqSubspace(int ambient, int rank, std::vector<std::uint8_t> rows)
      : ambient_(ambient), rank_(rank), rows_(std::move(rows)) {}

  static FqSubspace zero(int ambient) { return FqSubspace(ambient, 0, {}); }

  int ambient_dim() const noexcept { return ambient_; }
  int rank() const noexcept { return rank_; }
  std::span<const std::uint8_t> row(int i) const {
    return {rows_.data() + static_cast<std::size_t>(i) * ambient_, static_cast<std::size_t>(ambient_)};
  }
  std::span<const std::uint8_t> data() const noexcept { return rows_; }
  std::vector<int> pivots() const;

  friend bool operator==(const FqSubspace&, const FqSubspace&) = default;
  friend auto operator<=>(const FqSubspace&, const FqSubspace&) = default;

 private:
  int ambient_ = 0;
  int rank_ = 0;
  std::vector<std::uint8_t> rows_;
};

// RREF of the span of `count` rows of length `ambient` (row-major).
FqSubspace canonicalize(const GroundField& gf, int ambient, std::span<const std::uint8_t> rows);
FqSubspace span(const GroundField& gf, const FqSubspace& a, const FqSubspace& b);
FqSubspace intersect(const GroundField& gf, const FqSubspace& a, const FqSubspace& b);
bool contains(const GroundField& gf, const FqSubspace& s, std::span<const std::uint8_t> v);
bool contains(const GroundField& gf, const FqSubspace& outer, const FqSubspace& inner);
// All q^rank vectors of the subspace, row-major.
std::vector<std::uint8_t> span_vectors(const GroundField& gf, const FqSubspace& s);

// Flattening between F_{q^h}^r and F_q^{rh}.
std::vector<std::uint8_t> flatten(const FieldTower& tower, std::span<const Fe> coords);
std::vector<Fe> unflatten(const FieldTower& tower, std::span<const std::uint8_t> flat);
// Canonical F_q-span of vectors of F_{q^h}^r; all vectors must share r.
FqSubspace canonicalize(const FieldTower& tower, const std::vector<std::vector<Fe>>& vectors);
// Basis rows of s as vectors of F_{q^h}^r.
std::vector<std::vector<Fe>> ext_basis(const FieldTower& tower, const FqSubspace& s);

// Number of k-dimensional subspaces of F_q^n; throws TooLarge on overflow.
std::uint64_t gaussian_binomial(std::uint64_t q, int n, int k);

struct EnumerationLimits {
  std::uint64_t max_count = 1ull << 40;
};

// Visits every k-dimensional subspace of F_a^n once, a = alphabet size, as a
// k x n RREF matrix of indices (0 = zero, 1 = one). Pivot sets come in
// lexicographic order; within a pivot set the free entries, read row-major,
// count upwards with the first entry most significant. The span passed to the
// visitor is reused between calls.
using RrefVisitor = std::function<void(std::span<const std::uint8_t>)>;
std::uint64_t enumerate_rref(int alphabet, int n, int k, const RrefVisitor& visit,
                             EnumerationLimits limits = {});

using SubspaceVisitor = std::function<void(const FqSubspace&)>;
std::uint64_t enumerate_subspaces(const GroundField& gf, int n, int k, const SubspaceVisitor& visit,
                                  EnumerationLimits limits = {});

// Visits every k-dimensional V with V intersect line = fixed, once each.
std::uint64_t enumerate_extensions(const GroundField& gf, const FqSubspace& fixed, int k, const FqSubspace& line,
                                   const SubspaceVisitor& visit, EnumerationLimits limits = {});
std::uint64_t count_extensions(std::uint64_t q, int n, int line_dim, int fixed_dim, int k);

// Packed F_2 kernels: bit c of a row is column c.
namespace gf2 {

// In-place RREF; rows are reordered by pivot and zero rows dropped. Returns rank.
int rref(std::vector<std::uint64_t>& rows, int n);
std::vector<std::uint64_t> pack(const FqSubspace& s);
FqSubspace unpack(std::span<const std::uint64_t> rows, int n);

using PackedVisitor = std::function<void(std::span<const std::uint64_t>)>;
std::uint64_t enumerate_subspaces(int n, int k, const PackedVisitor& visit, EnumerationLimits limits = {});
// Basis rows passed to the visitor are fixed's rows followed by the k - f
// extension rows; they are not reduced.
std::uint64_t enumerate_extensions(std::span<const std::uint64_t> fixed, int k, std::span<const std::uint64_t> line,
                                   int n, const PackedVisitor& visit, EnumerationLimits limits = {});

}  // namespace gf2

}  // namespace linset
