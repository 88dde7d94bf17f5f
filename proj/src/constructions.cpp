#include "linset/constructions.hpp"

#include <random>
#include <string>

#include "linset/error.hpp"

namespace linset {

namespace {

ExtVec unit(const FieldTower& t, int k, int i) {
  ExtVec v(k, t.zero());
  v[i] = t.one();
  return v;
}

// e_a - c e_b
ExtVec diff(const FieldTower& t, int k, int a, Fe c, int b) {
  ExtVec v = unit(t, k, a);
  v[b] = t.neg(c);
  return v;
}

std::vector<Fe> outside_subfield(const FieldTower& t, int s) {
  std::vector<Fe> out;
  for (std::uint32_t c = 0; c < t.order(); ++c)
    if (s % t.degree_over_q(Fe{c}) != 0) out.push_back(Fe{c});
  return out;
}

}  // namespace

std::vector<std::pair<int, int>> construction_shapes(const FieldTower& t) {
  std::vector<std::pair<int, int>> out;
  for (int s = 2; s <= t.h(); ++s) {
    if (t.h() % s != 0) continue;
    for (int b = 1; b * s + 2 <= t.h(); ++b) out.emplace_back(s, b);
  }
  return out;
}

Construction build_construction(const FieldTower& t, const ConstructionParams& p) {
  const int s = p.s, r = p.blocks;
  if (s < 2 || t.h() % s != 0) throw Error(ErrorCode::InvalidParams, "s must be a divisor of h with s >= 2");
  if (r < 1) throw Error(ErrorCode::InvalidParams, "need at least one block");
  const int k = r * s + 2;
  if (k > t.h()) throw Error(ErrorCode::InvalidParams, "k = blocks*s + 2 exceeds h");
  if (t.degree_over_q(p.alpha) != s) throw Error(ErrorCode::InvalidParams, "alpha must have degree s over F_q");
  if (static_cast<int>(p.betas.size()) != r - 1) throw Error(ErrorCode::InvalidParams, "need blocks - 1 betas");
  for (Fe b : p.betas)
    if (s % t.degree_over_q(b) == 0) throw Error(ErrorCode::InvalidParams, "beta lies in F_{q^s}");

  auto idx = [s](int i, int j) { return (i - 1) * s + (j - 1); };  // e_{i,j}, 1-based block and position
  ExtRows pi;
  for (int i = 1; i <= r; ++i)
    for (int j = 1; j < s; ++j) pi.push_back(diff(t, k, idx(i, j), p.alpha, idx(i, j + 1)));
  for (int i = 1; i < r; ++i) pi.push_back(diff(t, k, idx(i, s), p.betas[i - 1], idx(i + 1, s)));
  pi.push_back(diff(t, k, r * s, p.alpha, r * s + 1));
  ExtRows omega{unit(t, k, idx(r, s)), unit(t, k, r * s + 1)};

  Construction c;
  c.params = p;
  c.k = k;
  try {
    c.scene = make_scene(t, k, std::move(pi), std::move(omega));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DegenerateScene) throw Error(ErrorCode::PiNotDisjoint, "Pi meets Omega");
    throw;
  }

  // e_{i,j} -> (beta_i ... beta_{r-1} alpha^{s-j}, 0), e_{rs+1} -> (0, alpha), e_{rs+2} -> (0, 1)
  std::vector<std::vector<Fe>> vecs;
  for (int i = 1; i <= r; ++i) {
    Fe prod = t.one();
    for (int l = i; l < r; ++l) prod = t.mul(prod, p.betas[l - 1]);
    for (int j = 1; j <= s; ++j) vecs.push_back({t.mul(prod, t.pow(p.alpha, s - j)), t.zero()});
  }
  vecs.push_back({t.zero(), p.alpha});
  vecs.push_back({t.zero(), t.one()});
  c.closed_form = canonicalize(t, vecs);
  return c;
}

ConstructionParams random_construction_params(const FieldTower& t, int s, int blocks, std::uint64_t seed) {
  if (s < 2 || t.h() % s != 0) throw Error(ErrorCode::InvalidParams, "s must be a divisor of h with s >= 2");
  std::vector<Fe> alphas;
  for (std::uint32_t c = 0; c < t.order(); ++c)
    if (t.degree_over_q(Fe{c}) == s) alphas.push_back(Fe{c});
  const std::vector<Fe> betas = outside_subfield(t, s);
  if (blocks > 1 && betas.empty()) throw Error(ErrorCode::InvalidParams, "no element outside F_{q^s}");
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    ConstructionParams p;
    p.s = s;
    p.blocks = blocks;
    p.alpha = alphas[std::uniform_int_distribution<std::size_t>(0, alphas.size() - 1)(rng)];
    for (int i = 1; i < blocks; ++i)
      p.betas.push_back(betas[std::uniform_int_distribution<std::size_t>(0, betas.size() - 1)(rng)]);
    try {
      build_construction(t, p);
      return p;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::PiNotDisjoint) throw;
    }
  }
  throw Error(ErrorCode::PiNotDisjoint, "no disjoint Pi found after 1000 attempts");
}

FqSubspace build_subline(const FieldTower& t, int s) {
  if (s < 1 || t.h() % s != 0) throw Error(ErrorCode::NotADivisor, std::to_string(s) + " does not divide h");
  const Fe g = t.subfield_generator(s);
  std::vector<std::vector<Fe>> vecs;
  Fe x = t.one();
  for (int j = 0; j < s; ++j) {
    vecs.push_back({x, t.zero()});
    vecs.push_back({t.zero(), x});
    x = t.mul(x, g);
  }
  return canonicalize(t, vecs);
}

FqSubspace build_club(const FieldTower& t, int i, int k, std::uint64_t seed) {
  if (i < 1 || k < 2 || i > k - 1 || k > t.h())
    throw Error(ErrorCode::InvalidParams, "club needs 1 <= i <= k - 1 and k <= h");
  // B: F_{q^i} when i | h, otherwise span of 1, theta, ..., theta^{i-1}.
  std::vector<std::vector<Fe>> heavy;
  const Fe g = t.h() % i == 0 ? t.subfield_generator(i) : t.theta();
  Fe x = t.one();
  for (int j = 0; j < i; ++j) {
    heavy.push_back({t.zero(), x});
    x = t.mul(x, g);
  }
  if (i == k - 1) {
    heavy.push_back({t.one(), t.zero()});
    return canonicalize(t, heavy);
  }
  if (i == 1) {
    // {(x, x^q)} is scattered; x -> (x - x^q, x^q) moves <(1,1)> to <(0,1)>.
    std::vector<std::vector<Fe>> vecs;
    Fe th = t.one();
    for (int j = 0; j < k; ++j) {
      const Fe fq = t.frobenius_q(th);
      vecs.push_back({t.sub(th, fq), fq});
      th = t.mul(th, t.theta());
    }
    return canonicalize(t, vecs);
  }
  // Random search: B as above (later random), plus the graph of x -> x^q
  // (or a random map) on a random (k - i)-dimensional A.
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> pick(0, t.order() - 1);
  auto random_basis = [&](int dim) {
    std::vector<Fe> out;
    while (true) {
      out.clear();
      std::vector<std::vector<Fe>> probe;
      for (int j = 0; j < dim; ++j) {
        out.push_back(Fe{pick(rng)});
        probe.push_back({out.back()});
      }
      if (canonicalize(t, probe).rank() == dim) return out;
    }
  };
  for (int attempt = 0; attempt < 20000; ++attempt) {
    if (attempt >= 1000) {
      heavy.clear();
      for (Fe b : random_basis(i)) heavy.push_back({t.zero(), b});
    }
    std::vector<std::vector<Fe>> vecs = heavy;
    const bool frobenius = attempt % 2 == 0;
    for (Fe a : random_basis(k - i)) vecs.push_back({a, frobenius ? t.frobenius_q(a) : Fe{pick(rng)}});
    const FqSubspace u = canonicalize(t, vecs);
    if (u.rank() != k) continue;
    const LinearSet l = build_linear_set(t, u);
    bool ok = true;
    for (const auto& wp : l.points()) {
      const bool vertical = wp.point.coords[0].code == 0;
      if (wp.weight != (vertical ? i : 1)) {
        ok = false;
        break;
      }
    }
    if (ok) return u;
  }
  throw Error(ErrorCode::ConstraintInfeasible, "no club found by random search");
}

}  // namespace linset
