#include <doctest.h>

#include <map>
#include <random>

#include "linset/constructions.hpp"
#include "linset/error.hpp"
#include "linset/ext_linalg.hpp"
#include "oracles.hpp"

using namespace linset;

namespace {

Fe first_of_degree(const FieldTower& t, int s) {
  for (std::uint32_t c = 0; c < t.order(); ++c)
    if (t.degree_over_q(Fe{c}) == s) return Fe{c};
  throw std::logic_error("no element of that degree");
}

Construction construction(const FieldTower& t, int s, int blocks, std::vector<Fe> betas = {}) {
  ConstructionParams p;
  p.s = s;
  p.blocks = blocks;
  p.alpha = first_of_degree(t, s);
  p.betas = std::move(betas);
  return build_construction(t, p);
}

ExtVec unit(const FieldTower& t, int k, int i) {
  ExtVec v(k, t.zero());
  v[i] = t.one();
  return v;
}

// Sigma points grouped by their image.
std::map<ProjPoint, std::vector<SigmaVec>> fibers(const FieldTower& t, const ProjectionScene& sc) {
  std::map<ProjPoint, std::vector<SigmaVec>> out;
  for (const auto& x : sigma_points(t, sc.k)) out[project(t, sc, x)].push_back(x);
  return out;
}

}  // namespace

TEST_CASE("type orbits match the PGL(2, q) action") {
  struct Case {
    int p, h;
  };
  for (const Case c : {Case{2, 2}, Case{2, 3}, Case{3, 2}, Case{2, 4}, Case{3, 3}, Case{2, 6}}) {
    const FieldTower t = FieldTower::make(c.p, 1, c.h);
    const std::uint64_t q = t.q();
    std::uint64_t covered = 0;
    std::set<std::uint32_t> reps;
    for (std::uint32_t a = 0; a < t.order(); ++a) {
      const Fe alpha{a};
      if (t.degree_over_q(alpha) == 1) {
        CHECK_THROWS_WITH_AS(type_orbit(t, alpha), doctest::Contains("AlphaInGroundField"), Error);
        continue;
      }
      const TypeOrbit o = type_orbit(t, alpha);
      const auto want = oracle::pgl_orbit(t, alpha);
      std::set<std::uint32_t> got;
      for (Fe x : o.orbit) got.insert(x.code);
      REQUIRE(got == want);
      CHECK(o.rep.code == *want.begin());
      CHECK(type_representative(t, alpha) == o.rep);
      CHECK(o.degree == t.degree_over_q(alpha));
      CHECK(o.orbit.size() == (o.degree == 2 ? q * q - q : q * q * q - q));
      CHECK(o.cosets.size() == (o.degree == 2 ? q : q * q + q));
      // Cosets of F_q^*: each element of S_alpha lies in exactly one listed coset.
      std::set<std::uint32_t> by_coset;
      for (Fe rep : o.cosets)
        for (std::uint32_t g = 1; g < q; ++g) {
          const Fe y = t.mul(t.ground().element(static_cast<int>(g)), rep);
          CHECK(got.count(y.code));
          CHECK(by_coset.insert(y.code).second);
        }
      CHECK(by_coset.size() == got.size());
      if (reps.insert(o.rep.code).second) covered += o.orbit.size();
    }
    CHECK(covered + q == t.order());
  }
}

TEST_CASE("projection formula of the s = 3 single-block construction") {
  const FieldTower t = FieldTower::make(2, 1, 6);
  const Construction c = construction(t, 3, 1);
  const Fe a = c.params.alpha;
  REQUIRE(c.k == 5);
  std::set<ProjPoint> images;
  for (std::uint32_t m = 1; m < 32; ++m) {
    SigmaVec x(5);
    std::vector<Fe> l(5);
    for (int i = 0; i < 5; ++i) {
      x[i] = static_cast<std::uint8_t>(m >> i & 1);
      l[i] = Fe{m >> i & 1};
    }
    const Fe chi1 = t.add(t.add(t.mul(t.mul(a, a), l[0]), t.mul(a, l[1])), l[2]);
    const Fe chi2 = t.add(l[4], t.mul(a, l[3]));
    const ProjPoint img = project(t, c.scene, x);
    const ExtVec want = ext_normalize(t, ExtVec{t.zero(), t.zero(), chi1, t.zero(), chi2});
    CHECK(ext_normalize(t, omega_to_ambient(t, c.scene, img.coords)) == want);
    images.insert(img);
  }
  CHECK(images.size() == 9);
  const LinearSet l = projected_linear_set(t, c.scene);
  CHECK(weight_spectrum(l) == std::vector<std::pair<int, std::uint64_t>>{{2, 8}, {3, 1}});
  CHECK(sets_equal(l, build_linear_set(t, c.closed_form)));
  CHECK(sets_equal(l, build_linear_set(t, scene_subspace(t, c.scene))));
}

TEST_CASE("points of Sigma in Omega are fixed") {
  const FieldTower t = FieldTower::make(2, 1, 6);
  const Construction c = construction(t, 3, 1);
  // Omega = <e3, e5> meets Sigma in the F_q-points of that line.
  for (auto [i, j] : std::vector<std::pair<int, int>>{{2, 4}}) {
    for (std::uint32_t m = 1; m < 4; ++m) {
      SigmaVec x(5, 0);
      x[i] = m & 1;
      x[j] = m >> 1 & 1;
      const ProjPoint img = project(t, c.scene, x);
      CHECK(ext_normalize(t, omega_to_ambient(t, c.scene, img.coords)) == ext_normalize(t, sigma_to_ext(t, x)));
    }
  }
}

TEST_CASE("s = 2 single block at h = 4 gives the F_4-subline") {
  const FieldTower t = FieldTower::make(2, 1, 4);
  const Construction c = construction(t, 2, 1);
  const LinearSet l = projected_linear_set(t, c.scene);
  CHECK(weight_spectrum(l) == std::vector<std::pair<int, std::uint64_t>>{{2, 5}});
  std::set<oracle::Point> pts;
  for (const auto& wp : l.points()) pts.insert(oracle::codes(wp.point.coords));
  CHECK(oracle::is_subline(t, pts, oracle::subfield(t, 2)));
}

TEST_CASE("empty Pi: the projection is Sigma itself") {
  const FieldTower t = FieldTower::make(2, 1, 4);
  const ProjectionScene sc = make_scene(t, 3, {}, {unit(t, 3, 0), unit(t, 3, 1), unit(t, 3, 2)});
  const LinearSet l = projected_linear_set(t, sc);
  CHECK(weight_spectrum(l) == std::vector<std::pair<int, std::uint64_t>>{{1, 7}});
  CHECK(find_pi_lines(t, sc).empty());
  CHECK(check_pi_line_bounds(t, sc).violations.empty());
}

TEST_CASE("Pi-line through e1 and e2 with rank-2 point e1 - alpha e2") {
  const FieldTower t = FieldTower::make(2, 1, 4);
  const Construction c = construction(t, 2, 1);
  const Fe a = c.params.alpha;
  const auto pl = pi_line_through(t, c.scene, SigmaVec{1, 0, 0, 0}, SigmaVec{0, 1, 0, 0});
  REQUIRE(pl.has_value());
  CHECK(pl->rank2_point == ext_normalize(t, ExtVec{t.one(), t.neg(a), t.zero(), t.zero()}));
  CHECK(pl->type == type_representative(t, a));
  CHECK(pl->degree == 2);
  CHECK_FALSE(pi_line_through(t, c.scene, SigmaVec{1, 0, 0, 0}, SigmaVec{0, 0, 1, 0}).has_value());
}

TEST_CASE("each fiber of weight w carries exactly the lines of a (w-1)-space") {
  const FieldTower t6 = FieldTower::make(2, 1, 6);
  const FieldTower t4 = FieldTower::make(2, 1, 4);
  std::mt19937_64 rng(5);
  std::vector<std::pair<const FieldTower*, ProjectionScene>> scenes{
      {&t4, construction(t4, 2, 1).scene},
      {&t6, construction(t6, 3, 1).scene},
      {&t6, build_construction(t6, random_construction_params(t6, 2, 2, 9)).scene}};
  // Random k = 4 scenes at h = 6.
  while (scenes.size() < 12) {
    ExtRows pi(2, ExtVec(4)), omega{unit(t6, 4, 2), unit(t6, 4, 3)};
    for (auto& row : pi)
      for (auto& x : row) x = Fe{static_cast<std::uint32_t>(rng() % 64)};
    try {
      scenes.emplace_back(&t6, make_scene(t6, 4, pi, omega));
    } catch (const Error&) {
    }
  }
  for (const auto& [tp, sc] : scenes) {
    const FieldTower& t = *tp;
    const auto lines = find_pi_lines(t, sc);
    std::map<ProjPoint, std::uint64_t> lines_per_image;
    std::set<ExtVec> rank2;
    for (const auto& l : lines) {
      ++lines_per_image[l.image];
      CHECK(ext_in_span(t, sc.pi, l.rank2_point));
      CHECK(rank2.insert(l.rank2_point).second);  // bijection with rank-2 points of Pi
      CHECK(project(t, sc, l.p1) == l.image);
      CHECK(project(t, sc, l.p2) == l.image);
    }
    std::uint64_t total = 0;
    for (const auto& [img, pts] : fibers(t, sc)) {
      const int w = weight_from_count(t.q(), pts.size() * (t.q() - 1));
      CHECK(lines_per_image[img] == static_cast<std::uint64_t>(oracle::gaussian(t.q(), w, 2)));
      total += pts.size();
    }
    CHECK(total == (1ull << sc.k) - 1);
    CHECK(check_pi_line_bounds(t, sc).violations.empty());
    CHECK(sets_equal(projected_linear_set(t, sc), build_linear_set(t, scene_subspace(t, sc))));
  }
}

TEST_CASE("two blocks with s = 2 at h = 6: one degree-2 line per point of the heavy fiber") {
  const FieldTower t = FieldTower::make(2, 1, 6);
  const Construction c = build_construction(t, random_construction_params(t, 2, 2, 3));
  const auto& sc = c.scene;
  const LinearSet l = projected_linear_set(t, sc);
  CHECK(weight_spectrum(l) == std::vector<std::pair<int, std::uint64_t>>{{2, 16}, {4, 1}});
  const auto fb = fibers(t, sc);
  const auto lines = find_pi_lines(t, sc);
  int heavy = 0;
  for (const auto& [img, pts] : fb) {
    if (pts.size() != 15) continue;
    ++heavy;
    for (const auto& x : pts) {
      int n = 0;
      for (const auto& ln : lines)
        if (ln.degree == 2 && ln.image == img && contains(t.ground(), ln.line, x)) ++n;
      CHECK(n == 1);
    }
  }
  CHECK(heavy == 1);
}

TEST_CASE("single block with s = 3: the heavy plane carries seven lines of one type") {
  const FieldTower t = FieldTower::make(2, 1, 6);
  const Construction c = construction(t, 3, 1);
  const auto lines = find_pi_lines(t, c.scene);
  for (const auto& [img, pts] : fibers(t, c.scene)) {
    if (pts.size() != 7) continue;
    int in_plane = 0;
    for (const auto& ln : lines) {
      if (ln.image != img) continue;
      ++in_plane;
      CHECK(ln.type == type_representative(t, c.params.alpha));
      CHECK(ln.degree == 3);
    }
    CHECK(in_plane == 7);
    for (const auto& x : pts) {
      int n = 0;
      for (const auto& ln : lines)
        if (ln.image == img && contains(t.ground(), ln.line, x)) ++n;
      CHECK(n == 3);
    }
  }
  const PiLineBounds b = check_pi_line_bounds(t, c.scene);
  CHECK(b.violations.empty());
  CHECK(b.heavy_fibers == 1);
  CHECK(b.threshold_hits == 1);
}

TEST_CASE("regulus in the s = 2 single-block scene") {
  const FieldTower t = FieldTower::make(2, 1, 4);
  const Construction c = construction(t, 2, 1);
  const auto lines = find_pi_lines(t, c.scene);
  REQUIRE(lines.size() == 5);  // a line spread of PG(3, 2)
  for (const auto& l : lines) CHECK(l.type == lines[0].type);
  const RegulusReport r = check_regulus(t, c.scene, lines[0], lines[1], lines[2]);
  CHECK(r.regulus.size() == 3);
  CHECK(r.all_pi_lines);
  CHECK(r.same_type);
  CHECK(r.degree == 2);
  CHECK(r.fourth_line);
  CHECK(r.partitioned);
  CHECK(r.violations.empty());
  for (const auto& l : {lines[0], lines[1], lines[2]}) CHECK(std::count(r.regulus.begin(), r.regulus.end(), l.line) == 1);
  CHECK_THROWS_WITH_AS(check_regulus(t, c.scene, lines[0], lines[0], lines[1]), doctest::Contains("NotDisjoint"),
                       Error);
}

TEST_CASE("rank-2 points off a common line of Pi are rejected") {
  const FieldTower t = FieldTower::make(2, 1, 6);
  const Construction c = build_construction(t, random_construction_params(t, 2, 2, 3));
  const auto lines = find_pi_lines(t, c.scene);
  const auto& gf = t.ground();
  bool tried = false;
  for (std::size_t a = 0; a < lines.size() && !tried; ++a)
    for (std::size_t b = a + 1; b < lines.size() && !tried; ++b) {
      if (intersect(gf, lines[a].line, lines[b].line).rank()) continue;
      for (std::size_t d = b + 1; d < lines.size() && !tried; ++d) {
        if (intersect(gf, lines[a].line, lines[d].line).rank() || intersect(gf, lines[b].line, lines[d].line).rank())
          continue;
        if (span(gf, span(gf, lines[a].line, lines[b].line), lines[d].line).rank() != 4) continue;
        if (ext_rank(t, {lines[a].rank2_point, lines[b].rank2_point, lines[d].rank2_point}) != 3) continue;
        tried = true;
        CHECK_THROWS_WITH_AS(check_regulus(t, c.scene, lines[a], lines[b], lines[d]),
                             doctest::Contains("NotCollinearInPi"), Error);
      }
    }
  CHECK(tried);
}

TEST_CASE("scene errors") {
  const FieldTower t = FieldTower::make(2, 1, 4);
  const Construction c = construction(t, 2, 1);
  CHECK_THROWS_WITH_AS(project(t, c.scene, ProjPoint{{t.one(), t.theta(), t.zero(), t.zero()}}),
                       doctest::Contains("NotInSigma"), Error);
  const ExtVec a{t.one(), t.theta(), t.zero(), t.zero()};
  CHECK_THROWS_WITH_AS(make_scene(t, 4, {a, a}, {unit(t, 4, 2), unit(t, 4, 3)}), doctest::Contains("DegenerateScene"),
                       Error);
  CHECK_THROWS_WITH_AS(make_scene(t, 4, {unit(t, 4, 0), a}, {unit(t, 4, 2), unit(t, 4, 3)}),
                       doctest::Contains("PiNotDisjoint"), Error);
  CHECK_THROWS_WITH_AS(type_orbit(t, t.one()), doctest::Contains("AlphaInGroundField"), Error);
  CHECK(in_sigma(t, ExtVec{t.theta(), t.theta(), t.zero()}));
  CHECK_FALSE(in_sigma(t, ExtVec{t.one(), t.theta(), t.zero()}));
}
