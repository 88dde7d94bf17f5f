#include <doctest.h>

#include <chrono>
#include <random>
#include <set>

#include "linset/error.hpp"
#include "linset/fq_linalg.hpp"
#include "oracles.hpp"

using namespace linset;

namespace {

using Flat = std::vector<std::uint8_t>;

// All vectors of the row space, as a set, by brute-force combination.
std::set<Flat> vector_set(const GroundField& gf, int n, const std::vector<Flat>& rows) {
  std::set<Flat> out{Flat(n, 0)};
  for (const auto& r : rows) {
    std::set<Flat> next;
    for (const auto& v : out)
      for (int c = 0; c < gf.size(); ++c) {
        Flat w = v;
        for (int i = 0; i < n; ++i) w[i] = gf.add(w[i], gf.mul(static_cast<std::uint8_t>(c), r[i]));
        next.insert(w);
      }
    out = std::move(next);
  }
  return out;
}

std::vector<Flat> rows_of(const FqSubspace& s) {
  std::vector<Flat> out;
  for (int i = 0; i < s.rank(); ++i) out.emplace_back(s.row(i).begin(), s.row(i).end());
  return out;
}

Flat random_rows(std::mt19937_64& rng, int q, int count, int n) {
  Flat m(static_cast<std::size_t>(count) * n);
  std::uniform_int_distribution<int> d(0, q - 1);
  for (auto& x : m) x = static_cast<std::uint8_t>(d(rng));
  return m;
}

bool is_rref(const FqSubspace& s) {
  int last = -1;
  for (int i = 0; i < s.rank(); ++i) {
    const auto row = s.row(i);
    int lead = -1;
    for (int c = 0; c < s.ambient_dim(); ++c)
      if (row[c]) {
        lead = c;
        break;
      }
    if (lead <= last || row[lead] != 1) return false;
    for (int j = 0; j < s.rank(); ++j)
      if (j != i && s.row(j)[lead] != 0) return false;
    last = lead;
  }
  return true;
}

}  // namespace

TEST_CASE("canonicalize over F_4 with q = 2") {
  const FieldTower t = FieldTower::make(2, 1, 2);
  const Fe w{2};
  CHECK(canonicalize(t, {{t.one(), t.zero()}, {t.zero(), t.one()}}).rank() == 2);
  CHECK(canonicalize(t, {{t.one(), t.zero()}, {w, t.zero()}}).rank() == 2);
  CHECK(canonicalize(t, {{w, t.one()}, {w, t.one()}}).rank() == 1);
  CHECK_THROWS_AS(canonicalize(t, {{t.one()}, {t.one(), t.zero()}}), Error);
}

TEST_CASE("scalar multiples over F_3 collapse") {
  const FieldTower t = FieldTower::make(3, 1, 2);
  const std::vector<Fe> v{Fe{4}, Fe{7}};
  const std::vector<Fe> v2{t.mul(Fe{2}, v[0]), t.mul(Fe{2}, v[1])};
  CHECK(canonicalize(t, {v, v2}).rank() == 1);
}

TEST_CASE("RREF form, canonicity and idempotence") {
  std::mt19937_64 rng(7);
  for (int q : {2, 3, 4}) {
    const FieldTower t = q == 4 ? FieldTower::make(2, 2, 1) : FieldTower::make(q, 1, 1);
    const auto& gf = t.ground();
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 9), count = 1 + static_cast<int>(rng() % 6);
      const Flat m = random_rows(rng, q, count, n);
      const FqSubspace s = canonicalize(gf, n, m);
      CHECK(is_rref(s));
      std::vector<Flat> input;
      for (int i = 0; i < count; ++i) input.emplace_back(m.begin() + i * n, m.begin() + (i + 1) * n);
      CHECK(vector_set(gf, n, rows_of(s)) == vector_set(gf, n, input));
      CHECK(canonicalize(gf, n, s.data()) == s);
      // A random recombination spans the same space.
      Flat mixed = random_rows(rng, q, count + 2, count);
      Flat other(static_cast<std::size_t>(count + 2) * n, 0);
      for (int i = 0; i < count + 2; ++i)
        for (int j = 0; j < count; ++j)
          for (int c = 0; c < n; ++c)
            other[i * n + c] = gf.add(other[i * n + c], gf.mul(mixed[i * count + j], m[j * n + c]));
      const FqSubspace s2 = canonicalize(gf, n, other);
      if (s2.rank() == s.rank()) CHECK(s2 == s);
      else CHECK(s2.rank() < s.rank());
    }
  }
}

TEST_CASE("intersection and span dimensions") {
  std::mt19937_64 rng(11);
  for (int q : {2, 3}) {
    const FieldTower t = FieldTower::make(q, 1, 1);
    const auto& gf = t.ground();
    for (int trial = 0; trial < 150; ++trial) {
      const int n = q == 2 ? 2 + static_cast<int>(rng() % 11) : 2 + static_cast<int>(rng() % 5);
      const FqSubspace a = canonicalize(gf, n, random_rows(rng, q, 1 + rng() % n, n));
      const FqSubspace b = canonicalize(gf, n, random_rows(rng, q, 1 + rng() % n, n));
      const FqSubspace i = intersect(gf, a, b);
      const FqSubspace s = span(gf, a, b);
      CHECK(a.rank() + b.rank() == i.rank() + s.rank());
      CHECK(contains(gf, a, i));
      CHECK(contains(gf, b, i));
      if (n <= 8) {
        const auto va = vector_set(gf, n, rows_of(a)), vb = vector_set(gf, n, rows_of(b));
        std::set<Flat> both;
        for (const auto& v : va)
          if (vb.count(v)) both.insert(v);
        CHECK(vector_set(gf, n, rows_of(i)) == both);
      }
    }
  }
  const FieldTower t = FieldTower::make(2, 1, 3);
  const FqSubspace a = canonicalize(t, {{t.one(), t.zero()}});
  CHECK(intersect(t.ground(), a, a) == a);
  const FqSubspace comp = canonicalize(t, {{t.zero(), t.one()}});
  CHECK(intersect(t.ground(), a, comp).rank() == 0);
  CHECK_THROWS_AS(intersect(t.ground(), a, FqSubspace::zero(4)), Error);
}

TEST_CASE("F_8 x F_8 meets the flattened point <(0,1)> in rank 3") {
  const FieldTower t = FieldTower::make(2, 1, 6);
  const auto f8 = oracle::fq_basis(t, oracle::subfield(t, 3));
  std::vector<std::vector<Fe>> vecs;
  for (Fe b : f8) {
    vecs.push_back({b, t.zero()});
    vecs.push_back({t.zero(), b});
  }
  const FqSubspace u = canonicalize(t, vecs);
  REQUIRE(u.rank() == 6);
  std::vector<std::vector<Fe>> line;
  Fe x = t.one();
  for (int j = 0; j < 6; ++j) {
    line.push_back({t.zero(), x});
    x = t.mul(x, t.theta());
  }
  const FqSubspace l = canonicalize(t, line);
  CHECK(intersect(t.ground(), u, l).rank() == 3);
  // Oracle: count vectors of U with first coordinate zero.
  int zero_first = 0;
  for (const auto& v : oracle::all_combinations(t, vecs, 2))
    if (v[0].code == 0 && v[1].code != 0) ++zero_first;
  CHECK(zero_first == 7);
}

TEST_CASE("flatten and unflatten round-trip") {
  const FieldTower t = FieldTower::make(3, 1, 3);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    std::vector<Fe> v{Fe{static_cast<std::uint32_t>(rng() % 27)}, Fe{static_cast<std::uint32_t>(rng() % 27)}};
    const auto flat = flatten(t, v);
    CHECK(flat.size() == 6);
    CHECK(unflatten(t, flat) == v);
  }
  const FieldTower t4 = FieldTower::make(2, 1, 2);
  // phi(<(1,0)>) is {(lambda, 0)}: columns 0..1 only.
  const FqSubspace p = canonicalize(t4, {{t4.one(), t4.zero()}, {Fe{2}, t4.zero()}});
  CHECK(p.rank() == 2);
  CHECK(p.pivots() == std::vector<int>{0, 1});
}

TEST_CASE("Gaussian binomials") {
  CHECK(gaussian_binomial(2, 2, 1) == 3);
  CHECK(gaussian_binomial(2, 4, 2) == 35);
  CHECK(gaussian_binomial(2, 6, 3) == 1395);
  CHECK(gaussian_binomial(2, 8, 4) == 200787);
  CHECK(gaussian_binomial(3, 4, 2) == 130);
  for (int n = 0; n <= 12; ++n)
    for (int k = 0; k <= n; ++k) {
      CHECK(gaussian_binomial(2, n, k) == static_cast<std::uint64_t>(oracle::gaussian(2, n, k)));
      if (n <= 8) CHECK(gaussian_binomial(3, n, k) == static_cast<std::uint64_t>(oracle::gaussian(3, n, k)));
    }
  CHECK_THROWS_AS(gaussian_binomial(2, 200, 100), Error);
}

TEST_CASE("enumeration visits every subspace once") {
  for (auto [q, n] : std::vector<std::pair<int, int>>{{2, 4}, {2, 5}, {3, 3}, {4, 3}}) {
    const FieldTower t = q == 4 ? FieldTower::make(2, 2, 1) : FieldTower::make(q, 1, 1);
    const auto& gf = t.ground();
    for (int k = 0; k <= n; ++k) {
      std::set<std::set<Flat>> seen;
      std::vector<FqSubspace> order;
      const std::uint64_t count = enumerate_subspaces(gf, n, k, [&](const FqSubspace& s) {
        CHECK(s.rank() == k);
        CHECK(is_rref(s));
        seen.insert(vector_set(gf, n, rows_of(s)));
        order.push_back(s);
      });
      CHECK(count == static_cast<std::uint64_t>(oracle::gaussian(q, n, k)));
      CHECK(seen.size() == count);
      // Pivot sets never decrease lexicographically.
      for (std::size_t i = 1; i < order.size(); ++i) CHECK(order[i - 1].pivots() <= order[i].pivots());
    }
  }
}

TEST_CASE("brute-force subspace count at q = 2, n = 4") {
  // Distinct spans of all k-tuples of vectors.
  const FieldTower t = FieldTower::make(2, 1, 1);
  const auto& gf = t.ground();
  for (int k = 1; k <= 3; ++k) {
    std::set<std::set<Flat>> spans;
    const int total = 1 << (4 * k);
    for (int m = 0; m < total; ++m) {
      std::vector<Flat> rows;
      for (int i = 0; i < k; ++i) {
        Flat r(4);
        for (int c = 0; c < 4; ++c) r[c] = static_cast<std::uint8_t>((m >> (4 * i + c)) & 1);
        rows.push_back(r);
      }
      const auto vs = vector_set(gf, 4, rows);
      if (vs.size() == (1u << k)) spans.insert(vs);
    }
    CHECK(spans.size() == gaussian_binomial(2, 4, k));
  }
}

TEST_CASE("enumeration order: first free entry most significant") {
  std::vector<Flat> seen;
  enumerate_rref(2, 3, 1, [&](std::span<const std::uint8_t> m) { seen.emplace_back(m.begin(), m.end()); });
  const std::vector<Flat> want{{1, 0, 0}, {1, 0, 1}, {1, 1, 0}, {1, 1, 1}, {0, 1, 0}, {0, 1, 1}, {0, 0, 1}};
  CHECK(seen == want);
}

TEST_CASE("packed enumeration matches the generic one") {
  const FieldTower t = FieldTower::make(2, 1, 1);
  for (int n : {4, 6, 7})
    for (int k = 0; k <= n; ++k) {
      std::vector<FqSubspace> a, b;
      enumerate_subspaces(t.ground(), n, k, [&](const FqSubspace& s) { a.push_back(s); });
      gf2::enumerate_subspaces(n, k, [&](std::span<const std::uint64_t> rows) { b.push_back(gf2::unpack(rows, n)); });
      CHECK(a == b);
    }
}

TEST_CASE("enumeration guard") {
  const FieldTower t = FieldTower::make(2, 1, 1);
  CHECK_THROWS_AS(enumerate_subspaces(t.ground(), 12, 6, [](const FqSubspace&) {}, EnumerationLimits{1000}), Error);
}

TEST_CASE("extensions meeting a line in a fixed subspace") {
  for (int q : {2, 3}) {
    const FieldTower t = FieldTower::make(q, 1, 1);
    const auto& gf = t.ground();
    const int n = q == 2 ? 6 : 4, ldim = q == 2 ? 3 : 2;
    Flat line_rows(static_cast<std::size_t>(ldim) * n, 0);
    for (int j = 0; j < ldim; ++j) line_rows[j * n + (n - ldim) + j] = 1;
    const FqSubspace line = canonicalize(gf, n, line_rows);
    for (int f = 0; f <= ldim; ++f) {
      std::vector<FqSubspace> fixeds;
      enumerate_subspaces(gf, n, f, [&](const FqSubspace& s) {
        if (contains(gf, line, s)) fixeds.push_back(s);
      });
      const FqSubspace fixed = fixeds[fixeds.size() / 2];
      for (int k = f; k <= f + n - ldim; ++k) {
        std::set<FqSubspace> visited;
        const std::uint64_t count = enumerate_extensions(gf, fixed, k, line, [&](const FqSubspace& v) {
          CHECK(v.rank() == k);
          CHECK(intersect(gf, v, line) == fixed);
          visited.insert(v);
        });
        std::set<FqSubspace> filtered;
        enumerate_subspaces(gf, n, k, [&](const FqSubspace& v) {
          if (intersect(gf, v, line) == fixed) filtered.insert(v);
        });
        CHECK(count == visited.size());
        CHECK(visited == filtered);
        CHECK(count == count_extensions(q, n, ldim, f, k));
        if (q == 2) {
          std::set<FqSubspace> packed;
          gf2::enumerate_extensions(gf2::pack(fixed), k, gf2::pack(line), n, [&](std::span<const std::uint64_t> rows) {
            std::vector<std::uint64_t> r(rows.begin(), rows.end());
            gf2::rref(r, n);
            packed.insert(gf2::unpack(r, n));
          });
          CHECK(packed == filtered);
        }
      }
    }
    CHECK(enumerate_extensions(gf, line, ldim, line, [](const FqSubspace&) {}) == 1);
    CHECK_THROWS_AS(enumerate_extensions(gf, canonicalize(gf, n, Flat(n, 1)), 2, line, [](const FqSubspace&) {}),
                    Error);
  }
}

TEST_CASE("main-theorem extension count at q = 2, h = 6") {
  // 1395 choices of a 3-space inside the line, each with the same number of extensions.
  CHECK(gaussian_binomial(2, 6, 3) == 1395);
  CHECK(count_extensions(2, 12, 6, 3, 5) * 1395 == 58121280ull);
}

TEST_CASE("packed RREF of a 12-column system costs well under a microsecond") {
  std::mt19937_64 rng(5);
  std::vector<std::vector<std::uint64_t>> systems(20000);
  for (auto& s : systems) {
    s.resize(8);
    for (auto& r : s) r = rng() & 0xfff;
  }
  int total = 0;
  const auto start = std::chrono::steady_clock::now();
  for (auto& s : systems) total += gf2::rref(s, 12);
  const double per = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count() /
                     static_cast<double>(systems.size());
  CHECK(total > 0);
  CHECK(per < 1.0);
}
