#include "linset/projection.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "linset/error.hpp"

namespace linset {

namespace {

SigmaVec normalize_sigma(const GroundField& gf, SigmaVec v) {
  auto it = std::find_if(v.begin(), v.end(), [](std::uint8_t x) { return x != 0; });
  if (it == v.end()) throw Error(ErrorCode::ZeroSubspace, "zero vector of Sigma");
  const std::uint8_t s = gf.inv(*it);
  for (auto p = it; p != v.end(); ++p) *p = gf.mul(*p, s);
  return v;
}

// Normalized vectors of the points of an F_q-subspace of F_q^k.
std::vector<SigmaVec> subspace_points(const GroundField& gf, const FqSubspace& s) {
  const int k = s.ambient_dim();
  const auto all = span_vectors(gf, s);
  std::set<SigmaVec> pts;
  for (std::size_t i = 1; i < all.size() / k; ++i) {
    SigmaVec v(all.begin() + i * k, all.begin() + (i + 1) * k);
    pts.insert(normalize_sigma(gf, std::move(v)));
  }
  return {pts.begin(), pts.end()};
}

FqSubspace span_rows(const GroundField& gf, int k, std::initializer_list<std::span<const std::uint8_t>> parts) {
  std::vector<std::uint8_t> rows;
  for (auto p : parts) rows.insert(rows.end(), p.begin(), p.end());
  return canonicalize(gf, k, rows);
}

ExtVec image_vector(const FieldTower& t, const ProjectionScene& sc, const SigmaVec& x) {
  const auto& gf = t.ground();
  ExtVec out(sc.r, t.zero());
  for (int i = 0; i < sc.k; ++i) {
    if (x[i] == 0) continue;
    const Fe c = gf.element(x[i]);
    for (int j = 0; j < sc.r; ++j) out[j] = t.add(out[j], t.mul(c, sc.omega_map[i][j]));
  }
  return out;
}

PiLine make_pi_line(const FieldTower& t, const ProjectionScene& sc, FqSubspace line) {
  PiLine pl;
  pl.p1.assign(line.row(0).begin(), line.row(0).end());
  pl.p2.assign(line.row(1).begin(), line.row(1).end());
  const ExtVec y1 = image_vector(t, sc, pl.p1);
  const ExtVec y2 = image_vector(t, sc, pl.p2);
  int j = 0;
  while (y2[j].code == 0) ++j;
  pl.alpha = t.div(y1[j], y2[j]);
  const ExtVec v1 = sigma_to_ext(t, pl.p1);
  const ExtVec v2 = sigma_to_ext(t, pl.p2);
  ExtVec r2(sc.k);
  for (int i = 0; i < sc.k; ++i) r2[i] = t.sub(v1[i], t.mul(pl.alpha, v2[i]));
  pl.rank2_point = ext_normalize(t, r2);
  pl.type = type_representative(t, pl.alpha);
  pl.degree = t.degree_over_q(pl.alpha);
  pl.image = normalize_point(t, y1);
  pl.line = std::move(line);
  return pl;
}

std::string fmt_vec(const SigmaVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

}  // namespace

TypeOrbit type_orbit(const FieldTower& t, Fe alpha) {
  if (t.in_ground_field(alpha)) throw Error(ErrorCode::AlphaInGroundField, "alpha lies in F_q");
  const auto& gf = t.ground();
  const int q = gf.size();
  std::set<Fe> orbit;
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b)
      for (int c = 0; c < q; ++c)
        for (int d = 0; d < q; ++d) {
          const auto ua = static_cast<std::uint8_t>(a), ub = static_cast<std::uint8_t>(b);
          const auto uc = static_cast<std::uint8_t>(c), ud = static_cast<std::uint8_t>(d);
          if (gf.mul(ua, ud) == gf.mul(ub, uc)) continue;
          const Fe num = t.add(t.mul(gf.element(ua), alpha), gf.element(ub));
          const Fe den = t.add(t.mul(gf.element(uc), alpha), gf.element(ud));
          orbit.insert(t.div(num, den));
        }
  TypeOrbit out;
  out.orbit.assign(orbit.begin(), orbit.end());
  out.rep = out.orbit.front();
  out.degree = t.degree_over_q(alpha);
  std::set<Fe> cos;
  for (Fe x : out.orbit) {
    Fe least = x;
    for (int l = 2; l < q; ++l) least = std::min(least, t.mul(gf.element(static_cast<std::uint8_t>(l)), x));
    cos.insert(least);
  }
  out.cosets.assign(cos.begin(), cos.end());
  return out;
}

Fe type_representative(const FieldTower& t, Fe alpha) { return type_orbit(t, alpha).rep; }

ProjectionScene make_scene(const FieldTower& t, int k, ExtRows pi, ExtRows omega) {
  ProjectionScene sc;
  sc.k = k;
  sc.r = static_cast<int>(omega.size());
  if (k < 1 || sc.r < 1 || static_cast<int>(pi.size()) != k - sc.r)
    throw Error(ErrorCode::DegenerateScene, "Pi and Omega must have k - r and r rows");
  ExtRows b;
  for (const auto& rows : {&pi, &omega})
    for (const auto& row : *rows) {
      if (static_cast<int>(row.size()) != k) throw Error(ErrorCode::AmbientMismatch, "scene row length is not k");
      b.push_back(row);
    }
  auto inv = ext_inverse(t, b);
  if (!inv) throw Error(ErrorCode::DegenerateScene, "Pi and Omega do not span Sigma* with trivial intersection");
  sc.pi = std::move(pi);
  sc.omega = std::move(omega);
  sc.omega_map.assign(k, ExtVec(sc.r));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < sc.r; ++j) sc.omega_map[i][j] = (*inv)[i][k - sc.r + j];
  if (scene_subspace(t, sc).rank() != k) throw Error(ErrorCode::PiNotDisjoint, "Pi meets the subgeometry Sigma");
  return sc;
}

bool in_sigma(const FieldTower& t, std::span<const Fe> v) {
  if (is_zero(v)) return false;
  for (Fe x : ext_normalize(t, v))
    if (!t.in_ground_field(x)) return false;
  return true;
}

ProjPoint project(const FieldTower& t, const ProjectionScene& sc, const SigmaVec& x) {
  return normalize_point(t, image_vector(t, sc, x));
}

ProjPoint project(const FieldTower& t, const ProjectionScene& sc, const ProjPoint& p) {
  if (static_cast<int>(p.coords.size()) != sc.k) throw Error(ErrorCode::AmbientMismatch, "point is not in Sigma*");
  if (!in_sigma(t, p.coords)) throw Error(ErrorCode::NotInSigma, "point is not in Sigma");
  const ExtVec n = ext_normalize(t, p.coords);
  SigmaVec x(sc.k);
  for (int i = 0; i < sc.k; ++i) x[i] = static_cast<std::uint8_t>(t.ground().index_of(n[i]));
  return project(t, sc, x);
}

ExtVec omega_to_ambient(const FieldTower& t, const ProjectionScene& sc, std::span<const Fe> c) {
  ExtVec out(sc.k, t.zero());
  for (int j = 0; j < sc.r; ++j)
    for (int i = 0; i < sc.k; ++i) out[i] = t.add(out[i], t.mul(c[j], sc.omega[j][i]));
  return out;
}

std::vector<SigmaVec> sigma_points(const FieldTower& t, int k) {
  const int q = static_cast<int>(t.q());
  std::vector<SigmaVec> out;
  for (int lead = 0; lead < k; ++lead) {
    SigmaVec v(k, 0);
    v[lead] = 1;
    while (true) {
      out.push_back(v);
      int j = k - 1;
      while (j > lead && v[j] == q - 1) v[j--] = 0;
      if (j == lead) break;
      ++v[j];
    }
  }
  return out;
}

ExtVec sigma_to_ext(const FieldTower& t, const SigmaVec& x) {
  ExtVec v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = t.ground().element(x[i]);
  return v;
}

FqSubspace scene_subspace(const FieldTower& t, const ProjectionScene& sc) {
  return canonicalize(t, std::vector<std::vector<Fe>>(sc.omega_map.begin(), sc.omega_map.end()));
}

LinearSet projected_linear_set(const FieldTower& t, const ProjectionScene& sc) {
  std::map<ProjPoint, std::uint64_t> fibers;
  for (const auto& x : sigma_points(t, sc.k)) ++fibers[project(t, sc, x)];
  std::vector<WeightedPoint> pts;
  for (const auto& [p, n] : fibers) pts.push_back({p, weight_from_count(t.q(), n * (t.q() - 1))});
  return LinearSet(t.q(), t.h(), sc.r, sc.k, std::move(pts));
}

std::vector<PiLine> find_pi_lines(const FieldTower& t, const ProjectionScene& sc) {
  const auto& gf = t.ground();
  std::map<ProjPoint, std::vector<std::uint8_t>> fibers;
  for (const auto& x : sigma_points(t, sc.k)) {
    auto& rows = fibers[project(t, sc, x)];
    rows.insert(rows.end(), x.begin(), x.end());
  }
  std::vector<PiLine> out;
  for (const auto& [img, rows] : fibers) {
    const FqSubspace f = canonicalize(gf, sc.k, rows);
    if (f.rank() < 2) continue;
    enumerate_subspaces(gf, f.rank(), 2, [&](const FqSubspace& c) {
      // Map coefficient rows through the fiber basis.
      std::vector<std::uint8_t> lrows(2 * sc.k, 0);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < f.rank(); ++b) {
          const std::uint8_t co = c.row(a)[b];
          if (co == 0) continue;
          for (int i = 0; i < sc.k; ++i)
            lrows[a * sc.k + i] = gf.add(lrows[a * sc.k + i], gf.mul(co, f.row(b)[i]));
        }
      out.push_back(make_pi_line(t, sc, canonicalize(gf, sc.k, lrows)));
    });
  }
  std::sort(out.begin(), out.end(), [](const PiLine& a, const PiLine& b) { return a.line < b.line; });
  return out;
}

std::optional<PiLine> pi_line_through(const FieldTower& t, const ProjectionScene& sc, const SigmaVec& a,
                                      const SigmaVec& b) {
  const FqSubspace line = span_rows(t.ground(), sc.k, {a, b});
  if (line.rank() != 2) return std::nullopt;
  if (project(t, sc, a) != project(t, sc, b)) return std::nullopt;
  return make_pi_line(t, sc, line);
}

PiLineBounds check_pi_line_bounds(const FieldTower& t, const ProjectionScene& sc) {
  const auto& gf = t.ground();
  const std::uint64_t q = t.q();
  PiLineBounds rep;
  const auto pts = sigma_points(t, sc.k);
  rep.points = pts.size();
  const auto lines = find_pi_lines(t, sc);
  rep.pi_lines = lines.size();

  // Pi-lines of one type through a point: at most 1 for degree 2, q + 1 otherwise.
  std::map<std::pair<SigmaVec, Fe>, std::uint64_t> through;
  std::map<Fe, int> degree_of;
  for (const auto& l : lines) {
    degree_of[l.type] = l.degree;
    for (const auto& p : subspace_points(gf, l.line)) ++through[{p, l.type}];
  }
  for (const auto& [key, n] : through) {
    const int deg = degree_of[key.second];
    const std::uint64_t cap = deg == 2 ? 1 : q + 1;
    if (n > cap)
      rep.violations.push_back("point " + fmt_vec(key.first) + " lies on " + std::to_string(n) +
                               " Pi-lines of type " + std::to_string(key.second.code) + " (degree " +
                               std::to_string(deg) + ")");
  }

  // Heavy fibers carrying as many lines of one type as they have points.
  std::map<ProjPoint, std::map<Fe, std::uint64_t>> per_fiber;
  for (const auto& l : lines) ++per_fiber[l.image][l.type];
  std::map<ProjPoint, std::uint64_t> fiber_size;
  for (const auto& x : pts) ++fiber_size[project(t, sc, x)];
  for (const auto& [img, n] : fiber_size) {
    const int w = weight_from_count(q, n * (q - 1));
    if (w < 3) continue;
    ++rep.heavy_fibers;
    const std::uint64_t threshold = n;  // (q^w - 1)/(q - 1) = number of points of the fiber
    for (const auto& [type, count] : per_fiber[img]) {
      if (count < threshold) continue;
      ++rep.threshold_hits;
      const int deg = degree_of[type];
      if (count != threshold || deg <= 2 || w % deg != 0)
        rep.violations.push_back("fiber of weight " + std::to_string(w) + " has " + std::to_string(count) +
                                 " Pi-lines of type " + std::to_string(type.code) + " (degree " +
                                 std::to_string(deg) + ")");
    }
  }
  return rep;
}

RegulusReport check_regulus(const FieldTower& t, const ProjectionScene& sc, const PiLine& l1, const PiLine& l2,
                            const PiLine& l3) {
  const auto& gf = t.ground();
  const int k = sc.k;
  const PiLine* ls[3] = {&l1, &l2, &l3};
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b)
      if (intersect(gf, ls[a]->line, ls[b]->line).rank() != 0)
        throw Error(ErrorCode::NotDisjoint, "regulus lines must be pairwise disjoint");
  const FqSubspace h = span(gf, span(gf, l1.line, l2.line), l3.line);
  if (h.rank() != 4) throw Error(ErrorCode::NotDisjoint, "lines do not lie in a common 3-space");
  ExtRows m{l1.rank2_point, l2.rank2_point, l3.rank2_point};
  if (ext_rank(t, m) != 2) throw Error(ErrorCode::NotCollinearInPi, "rank-2 points do not span a line of Pi");
  ext_rref(t, m);

  auto transversal_hit = [&](const SigmaVec& x, const FqSubspace& a, const FqSubspace& b) {
    const FqSubspace plane = span(gf, span_rows(gf, k, {x}), a);
    const FqSubspace y = intersect(gf, plane, b);
    if (y.rank() != 1) throw Error(ErrorCode::NotDisjoint, "lines are not in regulus position");
    return span_rows(gf, k, {x, y.row(0)});
  };
  const auto l1_points = subspace_points(gf, l1.line);
  std::vector<FqSubspace> trans;
  for (int i = 0; i < 3; ++i) trans.push_back(transversal_hit(l1_points[i], l2.line, l3.line));

  RegulusReport rep;
  for (const auto& x : subspace_points(gf, trans[0])) rep.regulus.push_back(transversal_hit(x, trans[1], trans[2]));
  std::sort(rep.regulus.begin(), rep.regulus.end());

  rep.all_pi_lines = true;
  rep.same_type = true;
  rep.type = l1.type;
  rep.degree = l1.degree;
  for (const auto& line : rep.regulus) {
    auto pl = pi_line_through(t, sc, SigmaVec(line.row(0).begin(), line.row(0).end()),
                              SigmaVec(line.row(1).begin(), line.row(1).end()));
    if (!pl) {
      rep.all_pi_lines = false;
      rep.same_type = false;
      continue;
    }
    if (pl->type != rep.type) rep.same_type = false;
  }
  if (!rep.all_pi_lines) rep.violations.push_back("a regulus line is not a Pi-line");
  else if (!rep.same_type) rep.violations.push_back("regulus lines have different types");

  // Pi-lines inside H, by type; and a fourth line off the regulus meeting M.
  const auto h_points = subspace_points(gf, h);
  std::vector<PiLine> typed;
  enumerate_subspaces(gf, 4, 2, [&](const FqSubspace& c) {
    std::vector<std::uint8_t> rows(2 * k, 0);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 4; ++b) {
        const std::uint8_t co = c.row(a)[b];
        if (co == 0) continue;
        for (int i = 0; i < k; ++i) rows[a * k + i] = gf.add(rows[a * k + i], gf.mul(co, h.row(b)[i]));
      }
    const FqSubspace line = canonicalize(gf, k, rows);
    auto pl = pi_line_through(t, sc, SigmaVec(line.row(0).begin(), line.row(0).end()),
                              SigmaVec(line.row(1).begin(), line.row(1).end()));
    if (!pl) return;
    if (pl->type == rep.type) typed.push_back(*pl);
    const bool off = std::all_of(rep.regulus.begin(), rep.regulus.end(),
                                 [&](const FqSubspace& rl) { return intersect(gf, rl, line).rank() == 0; });
    if (off && ext_in_span(t, m, pl->rank2_point)) rep.fourth_line = true;
  });
  std::map<SigmaVec, int> cover;
  for (const auto& pl : typed)
    for (const auto& p : subspace_points(gf, pl.line)) ++cover[p];
  rep.partitioned = cover.size() == h_points.size() &&
                    std::all_of(cover.begin(), cover.end(), [](const auto& kv) { return kv.second == 1; });
  if (rep.fourth_line && rep.same_type && (!rep.partitioned || rep.degree != 2))
    rep.violations.push_back("a fourth Pi-line meets M but H is not partitioned by degree-2 lines");
  if (rep.same_type && rep.degree == 2 && !rep.partitioned)
    rep.violations.push_back("degree-2 regulus type but H is not partitioned");
  return rep;
}

}  // namespace linset
