#include "linset/directions.hpp"

#include <numeric>

#include "linset/error.hpp"

namespace linset {

namespace {

int degree_of_size(const FieldTower& t, std::uint64_t r) {
  int d = 0;
  std::uint64_t v = 1;
  while (v < r) {
    v *= t.p();
    ++d;
  }
  return v == r ? d : -1;
}

// Additive and homogeneous over F_{p^d}, after subtracting f(0).
bool linear_over_degree(const FieldTower& t, const GraphMap& f, int d) {
  const std::uint32_t q0 = t.order();
  const Fe f0 = f.table[0];
  auto g = [&](std::uint32_t x) { return t.sub(f.table[x], f0); };
  for (std::uint32_t x = 0; x < q0; ++x)
    for (std::uint32_t y = x; y < q0; ++y)
      if (g(t.add(Fe{x}, Fe{y}).code) != t.add(g(x), g(y))) return false;
  if (d <= 1) return true;
  // Prime-field scalars come for free; F_{p^d} is generated by one element.
  const Fe gamma = t.subfield_generator(d);
  for (std::uint32_t x = 0; x < q0; ++x)
    if (g(t.mul(gamma, Fe{x}).code) != t.mul(gamma, g(x))) return false;
  return true;
}

}  // namespace

GraphMap linear_map(const FieldTower& t, std::span<const Fe> images) {
  if (t.e() != 1) throw Error(ErrorCode::InvalidParams, "maps are defined over a prime ground field");
  if (static_cast<int>(images.size()) != t.degree())
    throw Error(ErrorCode::InvalidParams, "need one image per power-basis element");
  GraphMap f;
  f.table.resize(t.order());
  for (std::uint32_t x = 0; x < t.order(); ++x) {
    const auto c = t.coeffs(Fe{x});
    Fe v = t.zero();
    for (std::size_t j = 0; j < c.size(); ++j)
      for (int rep = 0; rep < c[j]; ++rep) v = t.add(v, images[j]);
    f.table[x] = v;
  }
  return f;
}

DirectionCount count_directions(const FieldTower& t, const GraphMap& f) {
  const std::uint32_t q0 = t.order();
  if (f.table.size() != q0) throw Error(ErrorCode::InvalidParams, "map table must have q0 entries");
  if (t.e() != 1) throw Error(ErrorCode::InvalidParams, "maps are defined over a prime ground field");
  std::vector<char> seen(q0, 0);
  DirectionCount dc;
  dc.n = 0;
  for (std::uint32_t x = 0; x < q0; ++x)
    for (std::uint32_t y = x + 1; y < q0; ++y) {
      const Fe m = t.div(t.sub(f.table[x], f.table[y]), t.sub(Fe{x}, Fe{y}));
      if (!seen[m.code]) {
        seen[m.code] = 1;
        ++dc.n;
      }
    }
  // Lines of slope m through graph points: classes of x -> f(x) - m x.
  std::uint64_t g = 0;
  std::vector<std::uint32_t> cls(q0);
  for (std::uint32_t m = 0; m < q0; ++m) {
    if (!seen[m]) continue;
    std::fill(cls.begin(), cls.end(), 0);
    for (std::uint32_t x = 0; x < q0; ++x) ++cls[t.sub(f.table[x], t.mul(Fe{m}, Fe{x})).code];
    for (std::uint32_t c : cls)
      if (c) g = std::gcd(g, static_cast<std::uint64_t>(c));
  }
  dc.r = 1;
  if (g == 0) return dc;  // q0 = 1 cannot happen; no determined direction
  while (g % (dc.r * t.p()) == 0) dc.r *= t.p();
  return dc;
}

int linear_over(const FieldTower& t, const GraphMap& f) {
  if (f.table[0].code != 0 || !linear_over_degree(t, f, 1)) return 0;
  int best = 1;
  for (int d = 2; d <= t.degree(); ++d)
    if (t.degree() % d == 0 && linear_over_degree(t, f, d)) best = d;
  return best;
}

bool graph_is_fr_linear(const FieldTower& t, const GraphMap& f, std::uint64_t r) {
  const int d = degree_of_size(t, r);
  if (d < 1 || t.degree() % d != 0) return false;
  return linear_over_degree(t, f, d);
}

TrichotomyResult classify(const FieldTower& t, const GraphMap& f) {
  TrichotomyResult res;
  res.dc = count_directions(t, f);
  const std::uint64_t q0 = t.order(), n = res.dc.n, r = res.dc.r;
  if (r == 1 && 2 * n >= q0 + 3 && n <= q0 + 1) res.cases.push_back(1);
  const int d = degree_of_size(t, r);
  if (r > 1 && d > 0 && t.degree() % d == 0 && n >= q0 / r + 1 && n * (r - 1) <= q0 - 1) res.cases.push_back(2);
  if (r == q0 && n == 1) res.cases.push_back(3);
  res.linearity_checked = r > 2;
  if (res.linearity_checked) res.fr_linear = graph_is_fr_linear(t, f, r);
  res.linear_over = linear_over(t, f);
  return res;
}

}  // namespace linset
