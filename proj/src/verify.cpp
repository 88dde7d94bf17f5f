#include "linset/verify.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <functional>
#include <mutex>
#include <random>
#include <set>

#include "linset/constructions.hpp"
#include "linset/directions.hpp"
#include "linset/error.hpp"
#include "linset/linearity.hpp"
#include "linset/parallel.hpp"

namespace linset {

namespace {

constexpr std::size_t kMaxListedViolations = 200;
constexpr std::uint64_t kMaxExhaustive = 200'000'000ull;

struct Partial {
  std::uint64_t visited = 0;
  std::uint64_t violation_count = 0;
  std::vector<std::string> violations;
  std::map<std::string, std::uint64_t> hist;

  void violate(std::string msg) {
    ++violation_count;
    if (violations.size() < kMaxListedViolations) violations.push_back(std::move(msg));
  }
  void merge(const Partial& o) {
    visited += o.visited;
    violation_count += o.violation_count;
    for (const auto& v : o.violations)
      if (violations.size() < kMaxListedViolations) violations.push_back(v);
    for (const auto& [k, n] : o.hist) hist[k] += n;
  }
};

void finish(SuiteReport& rep, const Partial& p) {
  rep.visited = p.visited;
  rep.violations = p.violations;
  rep.histogram = p.hist;
  rep.details["violation_count"] = p.violation_count;
}

// Runs fn(i, partial) for i < n in parallel chunks and merges in index order.
void run_chunked(std::size_t n, int jobs, const std::function<void(std::size_t, Partial&)>& fn, Partial& out,
                 std::size_t chunk = 256) {
  const std::size_t chunks = (n + chunk - 1) / chunk;
  std::vector<Partial> parts(chunks);
  parallel_for(chunks, jobs, [&](std::size_t c) {
    const std::size_t end = std::min(n, (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < end; ++i) fn(i, parts[c]);
  });
  for (const auto& p : parts) out.merge(p);
}

std::uint64_t ipow(std::uint64_t b, int k) {
  std::uint64_t v = 1;
  for (int i = 0; i < k; ++i) v *= b;
  return v;
}

FieldTower tower_of(const SuiteConfig& c, int p, int e, int h) {
  return FieldTower::make(c.p.value_or(p), c.e.value_or(e), h);
}

std::string spectrum_string(const LinearSet& l) {
  std::string s = "{";
  bool first = true;
  for (auto [w, n] : weight_spectrum(l)) {
    s += (first ? "" : ",") + std::string("(") + std::to_string(w) + "," + std::to_string(n) + ")";
    first = false;
  }
  return s + "}";
}

std::string rows_string(const FqSubspace& u) {
  std::string s = "[";
  for (int i = 0; i < u.rank(); ++i) {
    s += i ? ";" : "";
    for (auto x : u.row(i)) s += std::to_string(x);
  }
  return s + "]";
}

FqSubspace random_subspace(const GroundField& gf, int n, int k, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, gf.size() - 1);
  while (true) {
    std::vector<std::uint8_t> rows(static_cast<std::size_t>(k) * n);
    for (auto& x : rows) x = static_cast<std::uint8_t>(pick(rng));
    FqSubspace s = canonicalize(gf, n, rows);
    if (s.rank() == k) return s;
  }
}

std::vector<FqSubspace> all_subspaces(const GroundField& gf, int n, int k) {
  std::vector<FqSubspace> out;
  out.reserve(gaussian_binomial(gf.size(), n, k));
  if (gf.size() == 2 && n <= 64) {
    gf2::enumerate_subspaces(n, k, [&](std::span<const std::uint64_t> rows) { out.push_back(gf2::unpack(rows, n)); });
  } else {
    enumerate_subspaces(gf, n, k, [&](const FqSubspace& s) { out.push_back(s); });
  }
  return out;
}

std::uint64_t budget_of(const SuiteConfig& c) { return c.budget.value_or(default_search_budget()); }

void base_params(SuiteReport& rep, const std::string& name, const SuiteConfig& c) {
  rep.suite = name;
  rep.seed = c.seed;
  rep.params["scope"] = c.scope;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"orbits",       "weights",     "prop2",       "trichotomy",
                                              "regulus",      "construction", "lower-bound", "main-theorem"};
  return names;
}

nlohmann::ordered_json to_json(const SuiteReport& r, bool with_time) {
  nlohmann::ordered_json j;
  j["suite"] = r.suite;
  j["params"] = r.params;
  j["seed"] = r.seed;
  j["visited"] = r.visited;
  j["expected"] = r.expected;
  j["violations"] = r.violations;
  nlohmann::ordered_json h = nlohmann::ordered_json::object();
  for (const auto& [k, n] : r.histogram) h[k] = n;
  j["witnesses_histogram"] = h;
  j["details"] = r.details;
  j["passed"] = r.passed();
  if (with_time) j["wall_time"] = r.wall_time;
  return j;
}

SuiteReport run_suite(const std::string& name, const SuiteConfig& c) {
  if (c.scope != "exhaustive" && c.scope != "sample" && c.scope != "construction")
    throw Error(ErrorCode::InvalidParams, "scope must be exhaustive, sample or construction");
  const auto start = std::chrono::steady_clock::now();
  SuiteReport rep;
  if (name == "orbits") rep = verify_orbits(c);
  else if (name == "weights") rep = verify_weights(c);
  else if (name == "prop2") rep = verify_prop2(c);
  else if (name == "trichotomy") rep = verify_trichotomy(c);
  else if (name == "regulus") rep = verify_regulus(c);
  else if (name == "construction") rep = verify_construction(c);
  else if (name == "lower-bound") rep = verify_lower_bound(c);
  else if (name == "main-theorem") rep = verify_main_theorem(c);
  else throw Error(ErrorCode::UnknownSuite, "unknown suite '" + name + "'");
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

// ---------------------------------------------------------------------------

SuiteReport verify_orbits(const SuiteConfig& c) {
  SuiteReport rep;
  base_params(rep, "orbits", c);
  std::vector<std::pair<int, int>> qs = c.p ? std::vector<std::pair<int, int>>{{*c.p, c.e.value_or(1)}}
                                            : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}};
  std::vector<int> hs = c.h ? std::vector<int>{*c.h} : std::vector<int>{2, 3, 4};
  rep.params["q"] = nlohmann::ordered_json::array();
  for (auto [p, e] : qs) rep.params["q"].push_back(std::to_string(p) + "^" + std::to_string(e));
  rep.params["h"] = hs;
  Partial all;
  for (auto [p, e] : qs)
    for (int h : hs) {
      const FieldTower t = FieldTower::make(p, e, h);
      const std::uint64_t q = t.q();
      const std::string tag = "q=" + std::to_string(q) + ",h=" + std::to_string(h);
      std::vector<char> covered(t.order(), 0);
      std::uint64_t covered_count = 0;
      for (std::uint32_t a = 0; a < t.order(); ++a) {
        const Fe alpha{a};
        if (t.in_ground_field(alpha)) continue;
        ++all.visited;
        ++rep.expected;
        const TypeOrbit o = type_orbit(t, alpha);
        const std::uint64_t want = o.degree == 2 ? q * q - q : q * q * q - q;
        const std::uint64_t want_cosets = o.degree == 2 ? q : q * q + q;
        if (o.orbit.size() != want)
          all.violate(tag + ": |S_alpha| = " + std::to_string(o.orbit.size()) + " for alpha " + std::to_string(a));
        if (o.cosets.size() != want_cosets)
          all.violate(tag + ": " + std::to_string(o.cosets.size()) + " cosets for alpha " + std::to_string(a));
        if (!std::binary_search(o.orbit.begin(), o.orbit.end(), alpha))
          all.violate(tag + ": alpha not in its own orbit");
        if (covered[a]) continue;
        // New orbit: its elements must all be uncovered.
        ++all.hist[tag + ",degree=" + std::to_string(o.degree)];
        for (Fe x : o.orbit) {
          if (covered[x.code]) all.violate(tag + ": orbits overlap at " + std::to_string(x.code));
          covered[x.code] = 1;
          ++covered_count;
        }
      }
      if (covered_count != t.order() - q) all.violate(tag + ": orbits do not cover F_{q^h} minus F_q");
    }
  finish(rep, all);
  return rep;
}

SuiteReport verify_weights(const SuiteConfig& c) {
  SuiteReport rep;
  base_params(rep, "weights", c);
  const bool exhaustive = c.scope == "exhaustive";
  const int h = c.h.value_or(exhaustive ? 4 : 6);
  const FieldTower t = tower_of(c, 2, 1, h);
  const auto& gf = t.ground();
  const int n = 2 * h;
  const int kmax = c.k.value_or(exhaustive ? std::min(4, n) : std::min(6, n));
  rep.params["q"] = t.q();
  rep.params["h"] = h;
  rep.params["r"] = 2;
  rep.params["k_max"] = kmax;
  std::vector<FqSubspace> subs;
  if (exhaustive) {
    std::uint64_t total = 0;
    for (int k = 1; k <= kmax; ++k) total += gaussian_binomial(t.q(), n, k);
    if (total > kMaxExhaustive) throw Error(ErrorCode::InfeasibleScope, "too many subspaces for an exhaustive run");
    for (int k = 1; k <= kmax; ++k) {
      auto part = all_subspaces(gf, n, k);
      subs.insert(subs.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    rep.expected = total;
  } else {
    const std::uint64_t samples = c.samples.value_or(1000);
    rep.params["samples"] = samples;
    std::mt19937_64 rng(c.seed);
    std::uniform_int_distribution<int> pick_k(1, kmax);
    for (std::uint64_t i = 0; i < samples; ++i) subs.push_back(random_subspace(gf, n, pick_k(rng), rng));
    rep.expected = samples;
  }
  Partial all;
  run_chunked(
      subs.size(), c.jobs,
      [&](std::size_t i, Partial& part) {
        const FqSubspace& u = subs[i];
        ++part.visited;
        const int k = u.rank();
        try {
          const LinearSet l = build_linear_set(t, u);
          std::uint64_t sum = 0;
          for (const auto& wp : l.points()) {
            sum += ipow(t.q(), wp.weight) - 1;
            if (wp.weight < 1 || wp.weight > k || (l.size() > 1 && wp.weight > k - 1))
              part.violate("weight out of range in " + rows_string(u));
            const int rw = reduction_weight(t, u, wp.point);
            if (rw != wp.weight) {
              part.violate("reduction weight " + std::to_string(rw) + " != " + std::to_string(wp.weight) + " in " +
                           rows_string(u));
              ++part.hist["weight_path_mismatch"];
            }
          }
          if (sum != ipow(t.q(), k) - 1) part.violate("vector-count identity fails for " + rows_string(u));
          ++part.hist["k=" + std::to_string(k)];
        } catch (const Error& e) {
          part.violate(std::string(e.what()) + " for " + rows_string(u));
        }
      },
      all);
  finish(rep, all);
  return rep;
}

SuiteReport verify_prop2(const SuiteConfig& c) {
  SuiteReport rep;
  base_params(rep, "prop2", c);
  const int h = c.h.value_or(4);
  const FieldTower t = tower_of(c, 2, 1, h);
  const auto& gf = t.ground();
  const std::uint64_t budget = budget_of(c);
  rep.params["q"] = t.q();
  rep.params["h"] = h;
  rep.params["budget"] = budget;
  std::vector<FqSubspace> subs;
  if (c.scope == "exhaustive") {
    rep.expected = gaussian_binomial(t.q(), 2 * h, h);
    if (rep.expected > kMaxExhaustive) throw Error(ErrorCode::InfeasibleScope, "too many rank-h subspaces");
    subs = all_subspaces(gf, 2 * h, h);
  } else {
    const std::uint64_t samples = c.samples.value_or(1000);
    rep.params["samples"] = samples;
    std::mt19937_64 rng(c.seed);
    for (std::uint64_t i = 0; i < samples; ++i) subs.push_back(random_subspace(gf, 2 * h, h, rng));
    rep.expected = samples;
  }
  Partial all;
  run_chunked(
      subs.size(), c.jobs,
      [&](std::size_t i, Partial& part) {
        ++part.visited;
        const RankHLineCheck pc = check_rank_h_line(t, subs[i], budget);
        ++part.hist["s=" + std::to_string(pc.geometric)];
        if (!pc.consistent())
          part.violate("algebraic " + std::to_string(pc.algebraic) + ", min weight " + std::to_string(pc.min_weight) +
                       ", geometric " + std::to_string(pc.geometric) + (pc.inconclusive ? " (inconclusive)" : "") +
                       " for " + rows_string(subs[i]));
      },
      all, 64);
  finish(rep, all);
  return rep;
}

SuiteReport verify_trichotomy(const SuiteConfig& c) {
  SuiteReport rep;
  base_params(rep, "trichotomy", c);
  const int h = c.h.value_or(4);
  const int p = c.p.value_or(2);
  if (c.e.value_or(1) != 1) throw Error(ErrorCode::InvalidParams, "trichotomy runs over a prime ground field");
  const FieldTower t = FieldTower::make(p, 1, h);
  const std::uint64_t q0 = t.order();
  rep.params["p"] = p;
  rep.params["h"] = h;
  rep.params["q0"] = q0;
  long double total_ld = 1;
  for (int i = 0; i < h; ++i) total_ld *= q0;
  std::uint64_t count = 0;
  const bool exhaustive = c.scope == "exhaustive";
  if (exhaustive) {
    if (total_ld > (1 << 20)) throw Error(ErrorCode::InfeasibleScope, "too many F_p-linear maps; use --scope sample");
    count = static_cast<std::uint64_t>(total_ld);
  } else {
    count = c.samples.value_or(1000);
    rep.params["samples"] = count;
  }
  rep.expected = count;
  std::vector<std::uint64_t> codes(count);
  if (exhaustive) {
    for (std::uint64_t i = 0; i < count; ++i) codes[i] = i;
  } else {
    std::mt19937_64 rng(c.seed);
    std::uniform_int_distribution<std::uint64_t> pick(0, static_cast<std::uint64_t>(total_ld) - 1);
    for (auto& x : codes) x = pick(rng);
  }
  Partial all;
  run_chunked(
      count, c.jobs,
      [&](std::size_t i, Partial& part) {
        ++part.visited;
        std::vector<Fe> images(h);
        std::uint64_t m = codes[i];
        for (int j = 0; j < h; ++j) {
          images[j] = Fe{static_cast<std::uint32_t>(m % q0)};
          m /= q0;
        }
        const GraphMap f = linear_map(t, images);
        const TrichotomyResult res = classify(t, f);
        const std::string tag = "map " + std::to_string(codes[i]);
        if (res.cases.size() != 1)
          part.violate(tag + ": matches " + std::to_string(res.cases.size()) + " cases (N=" +
                       std::to_string(res.dc.n) + ", r=" + std::to_string(res.dc.r) + ")");
        else
          ++part.hist["case=" + std::to_string(res.cases.front())];
        ++part.hist["r=" + std::to_string(res.dc.r)];
        if (res.linearity_checked && !res.fr_linear) part.violate(tag + ": r > 2 but the graph is not F_r-linear");
        if (res.dc.r == 2) ++part.hist["r=2 linearity not asserted"];
        // Strictly F_{p^s}-linear: size window for the associated rank-h linear set.
        const int s = res.linear_over;
        ++part.hist["linear_over=" + std::to_string(s)];
        const std::uint64_t n = res.dc.n;
        if (s >= 1 && s < h) {
          const std::uint64_t lo = ipow(p, h - s) + 1, hi = (q0 - 1) / (ipow(p, s) - 1);
          if (n < lo || n > hi)
            part.violate(tag + ": N=" + std::to_string(n) + " outside [" + std::to_string(lo) + "," +
                         std::to_string(hi) + "] for s=" + std::to_string(s));
        } else if (s == h) {
          ++part.hist["s=h, N=1"];
          if (n != 1) part.violate(tag + ": F_{q0}-linear map with N=" + std::to_string(n));
        }
        // Directions agree with the points of L_U, U the graph of f.
        std::vector<std::vector<Fe>> vecs;
        Fe x = t.one();
        for (int j = 0; j < h; ++j) {
          vecs.push_back({x, f.table[x.code]});
          x = t.mul(x, t.theta());
        }
        const LinearSet l = build_linear_set(t, canonicalize(t, vecs));
        if (l.size() != n) part.violate(tag + ": |L_U| = " + std::to_string(l.size()) + " but N = " + std::to_string(n));
      },
      all, 1024);
  finish(rep, all);
  return rep;
}

namespace {

struct SceneCase {
  std::string label;
  std::uint32_t q = 0;
  int p = 2, e = 1, h = 0;
  ProjectionScene scene;
};

void check_scene(const FieldTower& t, const SceneCase& sc, Partial& part, std::size_t max_triples) {
  ++part.visited;
  const PiLineBounds b = check_pi_line_bounds(t, sc.scene);
  for (const auto& v : b.violations) part.violate(sc.label + ": " + v);
  part.hist["pi_lines"] += b.pi_lines;
  part.hist["threshold_hits"] += b.threshold_hits;
  const auto lines = find_pi_lines(t, sc.scene);
  const auto& gf = t.ground();
  std::size_t triples = 0;
  for (std::size_t i = 0; i < lines.size() && triples < max_triples; ++i)
    for (std::size_t j = i + 1; j < lines.size() && triples < max_triples; ++j) {
      if (intersect(gf, lines[i].line, lines[j].line).rank() != 0) continue;
      ExtRows m{lines[i].rank2_point, lines[j].rank2_point};
      if (ext_rank(t, m) != 2) continue;
      const FqSubspace hspace = span(gf, lines[i].line, lines[j].line);
      for (std::size_t l = j + 1; l < lines.size() && triples < max_triples; ++l) {
        if (!contains(gf, hspace, lines[l].line)) continue;
        if (intersect(gf, lines[l].line, lines[i].line).rank() != 0) continue;
        if (intersect(gf, lines[l].line, lines[j].line).rank() != 0) continue;
        if (!ext_in_span(t, m, lines[l].rank2_point)) continue;
        ++triples;
        const RegulusReport rr = check_regulus(t, sc.scene, lines[i], lines[j], lines[l]);
        ++part.hist["regulus_triples"];
        if (rr.fourth_line) ++part.hist["fourth_line"];
        if (rr.partitioned) ++part.hist["partitioned"];
        ++part.hist["regulus_degree=" + std::to_string(rr.degree)];
        for (const auto& v : rr.violations) part.violate(sc.label + ": " + v);
      }
    }
}

}  // namespace

SuiteReport verify_regulus(const SuiteConfig& c) {
  SuiteReport rep;
  base_params(rep, "regulus", c);
  const int p = c.p.value_or(2), e = c.e.value_or(1);
  const std::vector<int> hs = c.h ? std::vector<int>{*c.h} : std::vector<int>{4, 5, 6};
  const std::uint64_t per_shape = 5;
  const std::uint64_t randoms = c.samples.value_or(100);
  const int rk = c.k.value_or(4);
  const int rh = c.h.value_or(4);
  rep.params["q"] = std::to_string(p) + "^" + std::to_string(e);
  rep.params["construction_h"] = hs;
  rep.params["choices_per_shape"] = per_shape;
  rep.params["random_scenes"] = randoms;
  rep.params["random_k"] = rk;
  rep.params["random_h"] = rh;

  std::map<int, FieldTower> towers;
  auto tower = [&](int h) -> const FieldTower& {
    auto it = towers.find(h);
    if (it == towers.end()) it = towers.emplace(h, FieldTower::make(p, e, h)).first;
    return it->second;
  };
  std::vector<SceneCase> cases;
  for (int h : hs) {
    const FieldTower& t = tower(h);
    for (auto [s, b] : construction_shapes(t))
      for (std::uint64_t i = 0; i < per_shape; ++i) {
        const auto params = random_construction_params(t, s, b, c.seed * 1000003 + i);
        SceneCase sc;
        sc.label = "construction h=" + std::to_string(h) + " s=" + std::to_string(s) + " blocks=" + std::to_string(b) +
                   " choice=" + std::to_string(i);
        sc.h = h;
        sc.scene = build_construction(t, params).scene;
        cases.push_back(std::move(sc));
      }
  }
  {
    const FieldTower& t = tower(rh);
    std::mt19937_64 rng(c.seed ^ 0x5eedull);
    std::uniform_int_distribution<std::uint32_t> pick(0, t.order() - 1);
    for (std::uint64_t i = 0; i < randoms; ++i) {
      for (int attempt = 0;; ++attempt) {
        if (attempt > 100000) throw Error(ErrorCode::InfeasibleScope, "no valid random scene found");
        ExtRows pi(rk - 2, ExtVec(rk)), om(2, ExtVec(rk));
        for (auto* rows : {&pi, &om})
          for (auto& row : *rows)
            for (auto& x : row) x = Fe{pick(rng)};
        try {
          SceneCase sc;
          sc.scene = make_scene(t, rk, pi, om);
          sc.label = "random scene " + std::to_string(i);
          sc.h = rh;
          cases.push_back(std::move(sc));
          break;
        } catch (const Error&) {
        }
      }
    }
  }
  rep.expected = cases.size();
  std::vector<Partial> parts(cases.size());
  parallel_for(cases.size(), c.jobs, [&](std::size_t i) { check_scene(towers.at(cases[i].h), cases[i], parts[i], 64); });
  Partial all;
  for (const auto& pt : parts) all.merge(pt);
  finish(rep, all);
  return rep;
}

SuiteReport verify_construction(const SuiteConfig& c) {
  SuiteReport rep;
  base_params(rep, "construction", c);
  const int p = c.p.value_or(2), e = c.e.value_or(1);
  const std::vector<int> hs = c.h ? std::vector<int>{*c.h} : std::vector<int>{4, 6};
  const std::uint64_t choices = c.samples.value_or(5);
  const std::uint64_t budget = budget_of(c);
  rep.params["q"] = std::to_string(p) + "^" + std::to_string(e);
  rep.params["h"] = hs;
  rep.params["choices_per_shape"] = choices;
  struct Item {
    int h, s, blocks;
    std::uint64_t choice;
  };
  std::vector<Item> items;
  std::map<int, FieldTower> towers;
  for (int h : hs) {
    towers.emplace(h, FieldTower::make(p, e, h));
    for (auto [s, b] : construction_shapes(towers.at(h)))
      for (std::uint64_t i = 0; i < choices; ++i) items.push_back({h, s, b, i});
  }
  rep.expected = items.size();
  std::vector<Partial> parts(items.size());
  parallel_for(items.size(), c.jobs, [&](std::size_t idx) {
    const Item& it = items[idx];
    const FieldTower& t = towers.at(it.h);
    Partial& part = parts[idx];
    ++part.visited;
    const std::string tag = "h=" + std::to_string(it.h) + " s=" + std::to_string(it.s) +
                            " blocks=" + std::to_string(it.blocks) + " choice=" + std::to_string(it.choice);
    const auto params = random_construction_params(t, it.s, it.blocks, c.seed * 1000003 + it.choice);
    const Construction con = build_construction(t, params);
    const LinearSet projected = projected_linear_set(t, con.scene);
    const LinearSet closed = build_linear_set(t, con.closed_form);
    const LinearSet solved = build_linear_set(t, scene_subspace(t, con.scene));
    if (!sets_equal(projected, closed) || projected.points().size() != closed.points().size())
      part.violate(tag + ": projected set differs from the closed form");
    for (std::size_t i = 0; i < projected.size() && i < closed.size(); ++i)
      if (projected.points()[i].weight != closed.points()[i].weight) {
        part.violate(tag + ": fiber weights differ from vector-count weights");
        break;
      }
    if (!sets_equal(solved, closed)) part.violate(tag + ": generic solver differs from the closed form");
    const int rs = it.s * it.blocks;
    const std::uint64_t qrs = ipow(t.q(), rs);
    if (closed.size() != qrs + 1) part.violate(tag + ": size " + std::to_string(closed.size()));
    std::vector<std::pair<int, std::uint64_t>> want;
    if (rs == 2) want = {{2, qrs + 1}};
    else want = {{2, qrs}, {rs, 1}};
    if (weight_spectrum(closed) != want) part.violate(tag + ": spectrum " + spectrum_string(closed));
    const FieldSearch fs = find_fqs_witness(t, closed, it.s, budget);
    if (fs.status != SearchStatus::Witness) {
      part.violate(tag + ": no F_{q^s} witness (" + to_string(fs.status) + ")");
    } else {
      ++part.hist["witness_s=" + std::to_string(it.s)];
      if (!is_fqs_linear(t, *fs.witness, it.s) || !sets_equal(build_linear_set(t, *fs.witness), closed))
        part.violate(tag + ": witness fails independent validation");
    }
  });
  Partial all;
  for (const auto& pt : parts) all.merge(pt);
  finish(rep, all);
  return rep;
}

SuiteReport verify_lower_bound(const SuiteConfig& c) {
  SuiteReport rep;
  base_params(rep, "lower-bound", c);
  const int h = c.h.value_or(4);
  const FieldTower t = tower_of(c, 2, 1, h);
  const auto& gf = t.ground();
  std::vector<int> ks;
  if (c.k) ks = {*c.k};
  else
    for (int k = 2; k <= h; ++k) ks.push_back(k);
  for (int k : ks)
    if (k < 2 || k > h) throw Error(ErrorCode::InvalidParams, "lower bound needs 2 <= k <= h");
  rep.params["q"] = t.q();
  rep.params["h"] = h;
  rep.params["k"] = ks;
  const std::uint64_t q = t.q();
  Partial all;
  nlohmann::ordered_json per_k = nlohmann::ordered_json::array();
  for (int k : ks) {
    std::vector<FqSubspace> subs;
    if (c.scope == "exhaustive") {
      const std::uint64_t total = gaussian_binomial(q, 2 * h, k);
      if (total > kMaxExhaustive) throw Error(ErrorCode::InfeasibleScope, "too many subspaces");
      subs = all_subspaces(gf, 2 * h, k);
      rep.expected += total;
    } else {
      const std::uint64_t samples = c.samples.value_or(1000);
      std::mt19937_64 rng(c.seed + static_cast<std::uint64_t>(k));
      for (std::uint64_t i = 0; i < samples; ++i) subs.push_back(random_subspace(gf, 2 * h, k, rng));
      rep.expected += samples;
    }
    const std::uint64_t bound = ipow(q, k - 1) + 1;
    struct Stats {
      std::uint64_t min_with_light = UINT64_MAX, attaining_clubs = 0, below_without_light = 0;
      std::uint64_t min_without_light = UINT64_MAX;
    };
    const std::size_t chunk = 512;
    const std::size_t chunks = (subs.size() + chunk - 1) / chunk;
    std::vector<Partial> parts(chunks);
    std::vector<Stats> stats(chunks);
    parallel_for(chunks, c.jobs, [&](std::size_t ci) {
      for (std::size_t i = ci * chunk; i < std::min(subs.size(), (ci + 1) * chunk); ++i) {
        ++parts[ci].visited;
        const LinearSet l = build_linear_set(t, subs[i]);
        Stats& st = stats[ci];
        if (l.min_weight() == 1) {
          st.min_with_light = std::min<std::uint64_t>(st.min_with_light, l.size());
          if (l.size() < bound)
            parts[ci].violate("k=" + std::to_string(k) + ": " + std::to_string(l.size()) +
                              " points with a weight-1 point in " + rows_string(subs[i]));
          const bool club = l.size() == bound && l.max_weight() == k - 1;
          if (club || (k == 2 && l.size() == bound)) ++st.attaining_clubs;
        } else {
          st.min_without_light = std::min<std::uint64_t>(st.min_without_light, l.size());
          if (l.size() < bound) ++st.below_without_light;
        }
      }
    });
    Stats tot;
    for (std::size_t ci = 0; ci < chunks; ++ci) {
      all.merge(parts[ci]);
      tot.min_with_light = std::min(tot.min_with_light, stats[ci].min_with_light);
      tot.min_without_light = std::min(tot.min_without_light, stats[ci].min_without_light);
      tot.attaining_clubs += stats[ci].attaining_clubs;
      tot.below_without_light += stats[ci].below_without_light;
    }
    // The explicit club F_q x B attains the bound.
    const LinearSet club = build_linear_set(t, build_club(t, k - 1, k));
    const bool club_ok = club.size() == bound && club.min_weight() == 1;
    if (!club_ok) all.violate("k=" + std::to_string(k) + ": built club has " + std::to_string(club.size()) + " points");
    if (c.scope == "exhaustive" && tot.attaining_clubs == 0)
      all.violate("k=" + std::to_string(k) + ": no enumerated club attains the bound");
    all.hist["k=" + std::to_string(k) + ",attaining_clubs"] += tot.attaining_clubs;
    all.hist["k=" + std::to_string(k) + ",below_bound_without_weight_1"] += tot.below_without_light;
    nlohmann::ordered_json row;
    row["k"] = k;
    row["bound"] = bound;
    row["min_size_with_weight_1"] = tot.min_with_light == UINT64_MAX ? nlohmann::ordered_json() : nlohmann::ordered_json(tot.min_with_light);
    row["min_size_without_weight_1"] =
        tot.min_without_light == UINT64_MAX ? nlohmann::ordered_json() : nlohmann::ordered_json(tot.min_without_light);
    row["explicit_club_size"] = club.size();
    per_k.push_back(row);
  }
  finish(rep, all);
  rep.details["per_k"] = per_k;
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

struct MainContext {
  const FieldTower& t;
  int k, w;
  std::uint64_t budget;
  std::mutex mu;
  std::map<std::vector<std::uint64_t>, Partial> cache;  // point keys -> contribution of one qualifying set
};

// Evaluates a qualifying set; returns its histogram/violation contribution.
Partial evaluate_set(MainContext& ctx, const LinearSet& l) {
  std::vector<std::uint64_t> keys;
  for (const auto& wp : l.points()) keys.push_back(point_key(ctx.t, wp.point.coords));
  {
    std::lock_guard<std::mutex> lock(ctx.mu);
    auto it = ctx.cache.find(keys);
    if (it != ctx.cache.end()) return it->second;
  }
  Partial out;
  const int h = ctx.t.h();
  bool valid = false, strong = false, inconclusive = false;
  int max_s = 1;
  for (int s = 2; s <= h; ++s) {
    if (h % s != 0) continue;
    const FieldSearch fs = find_fqs_witness(ctx.t, l, s, ctx.budget);
    if (fs.status == SearchStatus::Inconclusive) inconclusive = true;
    if (fs.status != SearchStatus::Witness) continue;
    ++out.hist["witness_s=" + std::to_string(s)];
    max_s = s;
    if ((ctx.k - ctx.w) % s == 0 && s >= ctx.w) {
      valid = true;
      if (s >= ctx.k - ctx.w) strong = true;
    }
  }
  ++out.hist["max_s=" + std::to_string(max_s)];
  if (strong) ++out.hist["meets s>=k-w"];
  if (valid) ++out.hist["meets s>=w"];
  if (!valid) {
    std::string msg = "no witness with s | k-w, s > 1, s | h, s >= w for set " + spectrum_string(l);
    if (inconclusive) msg += " (search inconclusive)";
    out.violate(msg);
  }
  std::lock_guard<std::mutex> lock(ctx.mu);
  ctx.cache.emplace(std::move(keys), out);
  return out;
}

// One point of weight k - w, all others of weight w.
bool qualifies(const LinearSet& l, int k, int w) {
  std::size_t heavy = 0;
  for (const auto& wp : l.points()) {
    if (wp.weight == k - w) ++heavy;
    else if (wp.weight != w) return false;
  }
  return k - w == w ? heavy == l.size() : heavy == 1;
}

}  // namespace

SuiteReport verify_main_theorem(const SuiteConfig& c) {
  SuiteReport rep;
  base_params(rep, "main-theorem", c);
  const int h = c.h.value_or(6), k = c.k.value_or(5), w = c.w.value_or(2);
  if (k < 4 || k > h || w < 2 || k - w < 2)
    throw Error(ErrorCode::InvalidParams, "need 4 <= k <= h, w >= 2 and k - w >= 2");
  const FieldTower t = tower_of(c, 2, 1, h);
  const auto& gf = t.ground();
  const std::uint64_t q = t.q();
  const std::uint64_t budget = budget_of(c);
  rep.params["q"] = q;
  rep.params["h"] = h;
  rep.params["k"] = k;
  rep.params["w"] = w;
  rep.params["budget"] = budget;
  rep.params["heavy_point"] = "<(0,1)>";
  MainContext ctx{t, k, w, budget, {}, {}};
  Partial all;
  const int n = 2 * h;

  if (c.scope == "construction") {
    if (w != 2) throw Error(ErrorCode::InfeasibleScope, "block-construction instances only cover w = 2");
    const std::uint64_t choices = c.samples.value_or(5);
    std::vector<std::pair<int, int>> shapes;
    for (auto [s, b] : construction_shapes(t))
      if (s * b + 2 == k) shapes.emplace_back(s, b);
    if (shapes.empty()) throw Error(ErrorCode::InfeasibleScope, "no block-construction shape has this k");
    for (auto [s, b] : shapes)
      for (std::uint64_t i = 0; i < choices; ++i) {
        ++all.visited;
        const auto params = random_construction_params(t, s, b, c.seed * 1000003 + i);
        const LinearSet l = build_linear_set(t, build_construction(t, params).closed_form);
        if (!qualifies(l, k, w)) {
          all.violate("construction instance does not satisfy the hypotheses: " + spectrum_string(l));
          continue;
        }
        ++all.hist["qualifying"];
        all.merge(evaluate_set(ctx, l));
      }
    rep.expected = shapes.size() * choices;
    finish(rep, all);
    return rep;
  }

  // Fixed part: a (k-w)-subspace of the line <(0,1)>, i.e. columns h..2h-1.
  auto embed = [&](const FqSubspace& s) {
    std::vector<std::uint8_t> rows(static_cast<std::size_t>(s.rank()) * n, 0);
    for (int i = 0; i < s.rank(); ++i)
      for (int j = 0; j < h; ++j) rows[i * n + h + j] = s.row(i)[j];
    return FqSubspace(n, s.rank(), std::move(rows));
  };
  std::vector<std::uint8_t> line_rows(static_cast<std::size_t>(h) * n, 0);
  for (int j = 0; j < h; ++j) line_rows[j * n + h + j] = 1;
  const FqSubspace line(n, h, line_rows);

  if (c.scope == "sample") {
    const std::uint64_t samples = c.samples.value_or(10000);
    rep.params["samples"] = samples;
    rep.expected = samples;
    std::mt19937_64 rng(c.seed);
    for (std::uint64_t i = 0; i < samples; ++i) {
      ++all.visited;
      const FqSubspace fixed = embed(random_subspace(gf, h, k - w, rng));
      const FqSubspace extra = random_subspace(gf, n, w, rng);
      const FqSubspace v = span(gf, fixed, extra);
      if (v.rank() != k || intersect(gf, v, line) != fixed) continue;
      const LinearSet l = build_linear_set(t, v);
      if (!qualifies(l, k, w)) continue;
      ++all.hist["qualifying"];
      all.merge(evaluate_set(ctx, l));
    }
    finish(rep, all);
    return rep;
  }

  const std::uint64_t per_fixed = count_extensions(q, n, h, k - w, k);
  const std::uint64_t fixed_count = gaussian_binomial(q, h, k - w);
  rep.expected = per_fixed * fixed_count;
  rep.params["candidates"] = rep.expected;
  if (rep.expected > kMaxExhaustive)
    throw Error(ErrorCode::InfeasibleScope, std::to_string(rep.expected) +
                                                " candidates; use --scope construction or --scope sample");
  const std::vector<FqSubspace> fixeds = all_subspaces(gf, h, k - w);
  std::vector<Partial> parts(fixeds.size());
  const bool packed = q == 2 && t.e() == 1 && n <= 64 && t.has_tables();
  const std::uint64_t lim = ipow(q, w) - 1;
  const std::uint64_t light_vectors = ipow(q, k) - ipow(q, k - w);

  parallel_for(fixeds.size(), c.jobs, [&](std::size_t fi) {
    Partial& part = parts[fi];
    const FqSubspace fixed = embed(fixeds[fi]);
    if (packed) {
      const std::uint32_t amask = (1u << h) - 1;
      const std::uint32_t ord = t.order() - 1;
      std::vector<std::uint32_t> count(t.order(), 0);
      std::vector<std::uint32_t> touched;
      touched.reserve(t.order());
      const auto fixed_packed = gf2::pack(fixed);
      const auto line_packed = gf2::pack(line);
      gf2::enumerate_extensions(fixed_packed, k, line_packed, n, [&](std::span<const std::uint64_t> rows) {
        ++part.visited;
        std::uint64_t v = 0;
        bool ok = true;
        const std::uint64_t combos = 1ull << k;
        for (std::uint64_t g = 1; g < combos; ++g) {
          v ^= rows[std::countr_zero(g)];
          const auto a = static_cast<std::uint32_t>(v & amask);
          if (a == 0) continue;
          const auto b = static_cast<std::uint32_t>(v >> h);
          std::uint32_t tc = 0;
          if (b != 0) {
            std::uint32_t e = t.log(Fe{b}) + ord - t.log(Fe{a});
            if (e >= ord) e -= ord;
            tc = t.exp(e).code;
          }
          if (count[tc]++ == 0) touched.push_back(tc);
          if (count[tc] > lim) {
            ok = false;
            break;
          }
        }
        const std::uint64_t distinct = touched.size();
        for (auto x : touched) count[x] = 0;
        touched.clear();
        if (!ok || distinct * lim != light_vectors) return;
        ++part.hist["qualifying"];
        const FqSubspace vsub = canonicalize(gf, n, [&] {
          std::vector<std::uint8_t> m(static_cast<std::size_t>(k) * n);
          for (int i = 0; i < k; ++i)
            for (int col = 0; col < n; ++col) m[i * n + col] = static_cast<std::uint8_t>((rows[i] >> col) & 1u);
          return m;
        }());
        part.merge(evaluate_set(ctx, build_linear_set(t, vsub)));
      });
    } else {
      enumerate_extensions(gf, fixed, k, line, [&](const FqSubspace& v) {
        ++part.visited;
        const LinearSet l = build_linear_set(t, v);
        if (!qualifies(l, k, w)) return;
        ++part.hist["qualifying"];
        part.merge(evaluate_set(ctx, l));
      });
    }
  });
  for (const auto& pt : parts) all.merge(pt);
  finish(rep, all);
  rep.details["distinct_sets"] = ctx.cache.size();
  return rep;
}

}  // namespace linset
