#include "linset/linear_set.hpp"

#include <algorithm>

#include "linset/error.hpp"

namespace linset {

namespace {

constexpr std::uint64_t kMaxVectors = 1ull << 28;

}  // namespace

ProjPoint normalize_point(const FieldTower& t, std::span<const Fe> v) { return ProjPoint{ext_normalize(t, v)}; }

bool point_keys_fit(const FieldTower& t, int r) {
  long double v = 1;
  for (int i = 0; i < r; ++i) v *= t.order();
  return v < 18446744073709551615.0L;
}

std::uint64_t point_key(const FieldTower& t, std::span<const Fe> normalized) {
  std::uint64_t key = 0;
  for (Fe x : normalized) key = key * t.order() + x.code;
  return key;
}

ProjPoint point_from_key(const FieldTower& t, int r, std::uint64_t key) {
  ProjPoint p;
  p.coords.resize(r);
  for (int i = r - 1; i >= 0; --i) {
    p.coords[i] = Fe{static_cast<std::uint32_t>(key % t.order())};
    key /= t.order();
  }
  return p;
}

LinearSet::LinearSet(std::uint32_t q, int h, int r, int rank, std::vector<WeightedPoint> points)
    : q_(q), h_(h), r_(r), rank_(rank), points_(std::move(points)) {
  std::sort(points_.begin(), points_.end(),
            [](const WeightedPoint& a, const WeightedPoint& b) { return a.point < b.point; });
}

int LinearSet::weight(const ProjPoint& p) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), p,
                             [](const WeightedPoint& a, const ProjPoint& b) { return a.point < b; });
  return it != points_.end() && it->point == p ? it->weight : 0;
}

int LinearSet::min_weight() const {
  int m = 0;
  for (const auto& wp : points_) m = m == 0 ? wp.weight : std::min(m, wp.weight);
  return m;
}

int LinearSet::max_weight() const {
  int m = 0;
  for (const auto& wp : points_) m = std::max(m, wp.weight);
  return m;
}

PointTally tally_points(const FieldTower& t, int r, const FqSubspace& u) {
  if (u.ambient_dim() != r * t.h()) throw Error(ErrorCode::AmbientMismatch, "subspace ambient is not r*h");
  if (!point_keys_fit(t, r)) throw Error(ErrorCode::TooLarge, "point encoding exceeds 64 bits");
  const int k = u.rank();
  const auto& gf = t.ground();
  const std::uint32_t q = t.q();
  std::uint64_t total = 1;
  for (int i = 0; i < k; ++i) {
    total *= q;
    if (total > kMaxVectors) throw Error(ErrorCode::TooLarge, "too many vectors to enumerate");
  }
  // multiples[i][c] = element(c) * b_i
  std::vector<std::vector<ExtVec>> multiples(k);
  for (int i = 0; i < k; ++i) {
    const ExtVec b = unflatten(t, u.row(i));
    multiples[i].resize(q);
    for (std::uint32_t c = 0; c < q; ++c) {
      multiples[i][c].resize(r);
      for (int j = 0; j < r; ++j) multiples[i][c][j] = t.mul(gf.element(static_cast<std::uint8_t>(c)), b[j]);
    }
  }
  std::vector<std::uint64_t> keys;
  keys.reserve(total);
  // partial[l] = sum of the first l chosen multiples
  std::vector<ExtVec> partial(k + 1, ExtVec(r, t.zero()));
  std::vector<std::uint32_t> digit(k, 0);
  auto rebuild = [&](int from) {
    for (int l = from; l < k; ++l)
      for (int j = 0; j < r; ++j) partial[l + 1][j] = t.add(partial[l][j], multiples[l][digit[l]][j]);
  };
  rebuild(0);
  ExtVec norm(r);
  for (std::uint64_t n = 0; n < total; ++n) {
    if (n > 0) {
      int l = k - 1;
      while (digit[l] == q - 1) digit[l--] = 0;
      ++digit[l];
      rebuild(l);
    }
    const ExtVec& v = partial[k];
    int lead = 0;
    while (lead < r && v[lead].code == 0) ++lead;
    if (lead == r) continue;
    const Fe s = t.inv(v[lead]);
    std::uint64_t key = 0;
    for (int j = 0; j < r; ++j) key = key * t.order() + (j < lead ? 0 : t.mul(v[j], s).code);
    keys.push_back(key);
  }
  std::sort(keys.begin(), keys.end());
  PointTally out;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    out.keys.push_back(keys[i]);
    out.counts.push_back(j - i);
    i = j;
  }
  return out;
}

int weight_from_count(std::uint64_t q, std::uint64_t count) {
  std::uint64_t v = 1;
  int w = 0;
  while (v < count + 1) {
    v *= q;
    ++w;
  }
  if (v != count + 1) throw Error(ErrorCode::NonPowerCount, std::to_string(count) + " + 1 is not a power of q");
  return w;
}

LinearSet build_linear_set(const FieldTower& t, const FqSubspace& u) {
  if (u.rank() == 0) throw Error(ErrorCode::ZeroSubspace, "linear set of the zero subspace");
  if (u.ambient_dim() % t.h() != 0) throw Error(ErrorCode::AmbientMismatch, "ambient not a multiple of h");
  const int r = u.ambient_dim() / t.h();
  const PointTally tally = tally_points(t, r, u);
  std::vector<WeightedPoint> pts;
  pts.reserve(tally.keys.size());
  std::uint64_t check = 0;
  std::uint64_t qk = 1;
  for (int i = 0; i < u.rank(); ++i) qk *= t.q();
  for (std::size_t i = 0; i < tally.keys.size(); ++i) {
    const int w = weight_from_count(t.q(), tally.counts[i]);
    check += tally.counts[i];
    pts.push_back({point_from_key(t, r, tally.keys[i]), w});
  }
  if (check != qk - 1) throw Error(ErrorCode::NonPowerCount, "vector counts do not sum to q^k - 1");
  return LinearSet(t.q(), t.h(), r, u.rank(), std::move(pts));
}

std::vector<std::pair<int, std::uint64_t>> weight_spectrum(const LinearSet& l) {
  std::vector<std::pair<int, std::uint64_t>> out;
  std::vector<int> ws;
  for (const auto& p : l.points()) ws.push_back(p.weight);
  std::sort(ws.begin(), ws.end());
  for (int w : ws) {
    if (out.empty() || out.back().first != w) out.emplace_back(w, 0);
    ++out.back().second;
  }
  return out;
}

FqSubspace field_reduce(const FieldTower& t, const ProjPoint& p) {
  const int h = t.h();
  std::vector<std::vector<Fe>> vecs;
  Fe theta_j = t.one();
  for (int j = 0; j < h; ++j) {
    std::vector<Fe> v(p.coords.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = t.mul(theta_j, p.coords[i]);
    vecs.push_back(std::move(v));
    theta_j = t.mul(theta_j, t.theta());
  }
  return canonicalize(t, vecs);
}

int reduction_weight(const FieldTower& t, const FqSubspace& u, const ProjPoint& p) {
  return intersect(t.ground(), u, field_reduce(t, p)).rank();
}

bool sets_equal(const LinearSet& a, const LinearSet& b) {
  if (a.q() != b.q() || a.h() != b.h() || a.r() != b.r())
    throw Error(ErrorCode::AmbientMismatch, "linear sets live in different spaces");
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.points()[i].point != b.points()[i].point) return false;
  return true;
}

}  // namespace linset
