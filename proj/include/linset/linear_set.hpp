#pragma once

// F_q-linear sets L_U of PG(r-1, q^h): points, weights, field reduction.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "linset/ext_linalg.hpp"
#include "linset/fq_linalg.hpp"

namespace linset {

// A projective point, normalized so that the first nonzero coordinate is 1.
struct ProjPoint {
  std::vector<Fe> coords;

  friend auto operator<=>(const ProjPoint&, const ProjPoint&) = default;
  friend bool operator==(const ProjPoint&, const ProjPoint&) = default;
};

ProjPoint normalize_point(const FieldTower& t, std::span<const Fe> v);

// Points are encoded as big-endian base-|F_{q^h}| integers, so key order is
// the lexicographic order of normalized coordinates. Needs |F_{q^h}|^r < 2^64.
bool point_keys_fit(const FieldTower& t, int r);
std::uint64_t point_key(const FieldTower& t, std::span<const Fe> normalized);
ProjPoint point_from_key(const FieldTower& t, int r, std::uint64_t key);

struct WeightedPoint {
  ProjPoint point;
  int weight = 0;
};

class LinearSet {
 public:
  LinearSet() = default;
  LinearSet(std::uint32_t q, int h, int r, int rank, std::vector<WeightedPoint> points);

  std::uint32_t q() const noexcept { return q_; }
  int h() const noexcept { return h_; }
  int r() const noexcept { return r_; }
  int rank() const noexcept { return rank_; }
  std::size_t size() const noexcept { return points_.size(); }
  // Sorted by coordinates.
  const std::vector<WeightedPoint>& points() const noexcept { return points_; }
  // 0 when P is not in the set.
  int weight(const ProjPoint& p) const;
  bool contains(const ProjPoint& p) const { return weight(p) > 0; }
  int min_weight() const;
  int max_weight() const;

 private:
  std::uint32_t q_ = 0;
  int h_ = 0, r_ = 0, rank_ = 0;
  std::vector<WeightedPoint> points_;
};

// Sorted point keys of L_U together with the number of nonzero vectors of U
// on each point.
struct PointTally {
  std::vector<std::uint64_t> keys;
  std::vector<std::uint64_t> counts;
};
PointTally tally_points(const FieldTower& t, int r, const FqSubspace& u);

// Weight from a vector count c: log_q(c + 1). Throws NonPowerCount.
int weight_from_count(std::uint64_t q, std::uint64_t count);

LinearSet build_linear_set(const FieldTower& t, const FqSubspace& u);
// (weight, number of points), ascending by weight.
std::vector<std::pair<int, std::uint64_t>> weight_spectrum(const LinearSet& l);

// The rank-h F_q-subspace {lambda u_P : lambda in F_{q^h}}, flattened.
FqSubspace field_reduce(const FieldTower& t, const ProjPoint& p);
// dim(phi(P) cap U), computed by intersecting subspaces.
int reduction_weight(const FieldTower& t, const FqSubspace& u, const ProjPoint& p);

// Point-set equality; weights are ignored.
bool sets_equal(const LinearSet& a, const LinearSet& b);

}  // namespace linset
