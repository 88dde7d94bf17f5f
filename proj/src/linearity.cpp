#include "linset/linearity.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <string>

#include "linset/error.hpp"

namespace linset {

namespace {

void require_divisor(const FieldTower& t, int s) {
  if (s < 1 || t.h() % s != 0) throw Error(ErrorCode::NotADivisor, std::to_string(s) + " does not divide h");
}

std::vector<std::uint64_t> set_keys(const FieldTower& t, const LinearSet& l) {
  std::vector<std::uint64_t> keys;
  keys.reserve(l.size());
  for (const auto& p : l.points()) keys.push_back(point_key(t, p.point.coords));
  return keys;
}

// F_q-span of W together with x v for x in F_{q^s}; W must be F_{q^s}-closed.
FqSubspace extend_fqs(const FieldTower& t, const FqSubspace& w, const ExtVec& v, Fe gamma, int s) {
  std::vector<std::uint8_t> rows(w.data().begin(), w.data().end());
  ExtVec cur = v;
  for (int j = 0; j < s; ++j) {
    const auto flat = flatten(t, cur);
    rows.insert(rows.end(), flat.begin(), flat.end());
    for (auto& x : cur) x = t.mul(x, gamma);
  }
  return canonicalize(t.ground(), w.ambient_dim(), rows);
}

class WitnessSearch {
 public:
  WitnessSearch(const FieldTower& t, const LinearSet& l, int s, std::uint64_t budget)
      : t_(t), l_(l), s_(s), budget_(budget), keys_(set_keys(t, l)), gamma_(t.subfield_generator(s)) {
    std::uint64_t qs = 1;
    for (int i = 0; i < s; ++i) qs *= t.q();
    cosets_ = (t.order() - 1) / (qs - 1);
  }

  FieldSearch run() {
    FieldSearch out;
    out.s = s_;
    const FqSubspace start = extend_fqs(t_, FqSubspace::zero(l_.r() * t_.h()), l_.points().front().point.coords,
                                        gamma_, s_);
    const bool found = dfs(start);
    out.nodes = nodes_;
    if (found) {
      out.status = SearchStatus::Witness;
      out.witness = witness_;
    } else {
      out.status = exhausted_ ? SearchStatus::Inconclusive : SearchStatus::None;
    }
    return out;
  }

 private:
  bool dfs(const FqSubspace& w) {
    if (!seen_.insert(std::vector<std::uint8_t>(w.data().begin(), w.data().end())).second) return false;
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return false;
    }
    const PointTally tally = tally_points(t_, l_.r(), w);
    // Every point of L_W must be in L; find the first point of L not yet covered.
    if (!std::includes(keys_.begin(), keys_.end(), tally.keys.begin(), tally.keys.end())) return false;
    std::size_t first_missing = 0;
    while (first_missing < tally.keys.size() && keys_[first_missing] == tally.keys[first_missing]) ++first_missing;
    if (first_missing == keys_.size()) {
      witness_ = w;
      return true;
    }
    const ExtVec& u = l_.points()[first_missing].point.coords;
    Fe mu = t_.one();
    for (std::uint64_t c = 0; c < cosets_; ++c) {
      ExtVec v(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) v[i] = t_.mul(mu, u[i]);
      if (dfs(extend_fqs(t_, w, v, gamma_, s_))) return true;
      if (exhausted_) return false;
      mu = t_.mul(mu, t_.generator());
    }
    return false;
  }

  const FieldTower& t_;
  const LinearSet& l_;
  int s_;
  std::uint64_t budget_;
  std::vector<std::uint64_t> keys_;
  Fe gamma_;
  std::uint64_t cosets_ = 1;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
  std::set<std::vector<std::uint8_t>> seen_;
  FqSubspace witness_;
};

LinearityReport fields_impl(const FieldTower& t, const LinearSet& l, const FqSubspace* u, int algebraic,
                            std::uint64_t budget) {
  LinearityReport rep;
  rep.algebraic_max_s = algebraic;
  for (int s = 2; s <= t.h(); ++s) {
    if (t.h() % s != 0) continue;
    FieldSearch fs;
    if (u != nullptr && algebraic % s == 0) {
      fs.s = s;
      fs.status = SearchStatus::Witness;
      fs.witness = *u;
    } else {
      fs = find_fqs_witness(t, l, s, budget);
    }
    if (fs.status == SearchStatus::Witness) rep.geometric_max_s = std::max(rep.geometric_max_s, s);
    rep.fields.push_back(std::move(fs));
  }
  return rep;
}

}  // namespace

const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Witness: return "witness";
    case SearchStatus::None: return "none";
    case SearchStatus::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

FqSubspace fqs_span(const FieldTower& t, const FqSubspace& u, int s) {
  require_divisor(t, s);
  const Fe gamma = t.subfield_generator(s);
  FqSubspace w = FqSubspace::zero(u.ambient_dim());
  for (int i = 0; i < u.rank(); ++i) w = extend_fqs(t, w, unflatten(t, u.row(i)), gamma, s);
  return w;
}

bool is_fqs_linear(const FieldTower& t, const FqSubspace& u, int s) {
  require_divisor(t, s);
  if (s == 1) return true;
  const Fe gamma = t.subfield_generator(s);
  const auto& gf = t.ground();
  for (int i = 0; i < u.rank(); ++i) {
    ExtVec v = unflatten(t, u.row(i));
    for (auto& x : v) x = t.mul(x, gamma);
    if (!contains(gf, u, flatten(t, v))) return false;
  }
  return true;
}

int algebraic_max_field(const FieldTower& t, const FqSubspace& u) {
  int best = 1;
  for (int s = 2; s <= t.h(); ++s)
    if (t.h() % s == 0 && u.rank() % s == 0 && is_fqs_linear(t, u, s)) best = s;
  return best;
}

std::uint64_t default_search_budget() {
  if (const char* env = std::getenv("LINSET_BUDGET")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "LINSET_BUDGET is not an integer");
    }
  }
  return 100'000'000ull;
}

FieldSearch find_fqs_witness(const FieldTower& t, const LinearSet& l, int s, std::uint64_t budget) {
  require_divisor(t, s);
  if (l.size() == 0) throw Error(ErrorCode::ZeroSubspace, "empty linear set");
  WitnessSearch search(t, l, s, budget);
  return search.run();
}

FieldSearch naive_fqs_witness(const FieldTower& t, const LinearSet& l, int s, EnumerationLimits limits) {
  require_divisor(t, s);
  const int r = l.r();
  const int hs = t.h() / s;
  const int n = r * hs;
  const std::vector<Fe> sub = t.subfield_elements(s);
  const int qs = static_cast<int>(sub.size());
  if (qs > 255) throw Error(ErrorCode::TooLarge, "subfield too large for the reference search");
  const auto keys = set_keys(t, l);
  // basis[i * hs + j] = theta^j e_i
  std::vector<ExtVec> basis(n, ExtVec(r, t.zero()));
  for (int i = 0; i < r; ++i) {
    Fe th = t.one();
    for (int j = 0; j < hs; ++j) {
      basis[i * hs + j][i] = th;
      th = t.mul(th, t.theta());
    }
  }
  FieldSearch out;
  out.s = s;
  for (int d = 1; d <= n && !out.witness; ++d) {
    long double cap = 1;
    for (int i = 0; i < d; ++i) cap *= qs;
    if (static_cast<long double>(l.size()) > (cap - 1) / (qs - 1)) continue;
    std::vector<ExtVec> rows(d, ExtVec(r));
    enumerate_rref(
        qs, n, d,
        [&](std::span<const std::uint8_t> m) {
          if (out.witness) return;
          ++out.nodes;
          for (int a = 0; a < d; ++a) {
            std::fill(rows[a].begin(), rows[a].end(), t.zero());
            for (int c = 0; c < n; ++c) {
              const Fe x = sub[m[a * n + c]];
              if (x.code == 0) continue;
              for (int i = 0; i < r; ++i) rows[a][i] = t.add(rows[a][i], t.mul(x, basis[c][i]));
            }
          }
          // Points of the F_{q^s}-span: combinations whose first nonzero coefficient is 1.
          std::vector<std::uint64_t> pts;
          std::vector<int> coef(d, 0);
          ExtVec v(r);
          for (int lead = 0; lead < d; ++lead) {
            std::fill(coef.begin(), coef.end(), 0);
            coef[lead] = 1;
            while (true) {
              std::fill(v.begin(), v.end(), t.zero());
              for (int a = lead; a < d; ++a)
                if (coef[a] != 0)
                  for (int i = 0; i < r; ++i) v[i] = t.add(v[i], t.mul(sub[coef[a]], rows[a][i]));
              const std::uint64_t key = point_key(t, ext_normalize(t, v));
              if (!std::binary_search(keys.begin(), keys.end(), key)) return;
              pts.push_back(key);
              int b = d - 1;
              while (b > lead && coef[b] == qs - 1) coef[b--] = 0;
              if (b == lead) break;
              ++coef[b];
            }
          }
          std::sort(pts.begin(), pts.end());
          pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
          if (pts != keys) return;
          std::vector<std::vector<Fe>> vecs;
          for (const auto& row : rows) vecs.push_back(row);
          out.witness = fqs_span(t, canonicalize(t, vecs), s);
        },
        limits);
  }
  out.status = out.witness ? SearchStatus::Witness : SearchStatus::None;
  return out;
}

LinearityReport geometric_fields(const FieldTower& t, const FqSubspace& u, std::uint64_t budget) {
  const LinearSet l = build_linear_set(t, u);
  return fields_impl(t, l, &u, algebraic_max_field(t, u), budget);
}

LinearityReport geometric_fields(const FieldTower& t, const LinearSet& l, int algebraic_max_s, std::uint64_t budget) {
  return fields_impl(t, l, nullptr, algebraic_max_s, budget);
}

RankHLineCheck check_rank_h_line(const FieldTower& t, const FqSubspace& u, std::uint64_t budget) {
  if (u.ambient_dim() != 2 * t.h() || u.rank() != t.h())
    throw Error(ErrorCode::InvalidParams, "expected a rank-h subspace of F_{q^h}^2");
  const LinearSet l = build_linear_set(t, u);
  const LinearityReport rep = fields_impl(t, l, &u, algebraic_max_field(t, u), budget);
  RankHLineCheck c;
  c.algebraic = rep.algebraic_max_s;
  c.min_weight = l.min_weight();
  c.geometric = rep.geometric_max_s;
  for (const auto& f : rep.fields)
    if (f.status == SearchStatus::Inconclusive) c.inconclusive = true;
  return c;
}

}  // namespace linset
