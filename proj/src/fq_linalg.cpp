#include "linset/fq_linalg.hpp"

#include <algorithm>
#include <numeric>

#include "linset/error.hpp"

namespace linset {

namespace {

using u128 = unsigned __int128;

u128 checked_pow128(std::uint64_t q, int k) {
  u128 v = 1;
  for (int i = 0; i < k; ++i) {
    v *= q;
    if (v > (static_cast<u128>(1) << 100)) throw Error(ErrorCode::TooLarge, "power overflow");
  }
  return v;
}

// Generic RREF over the ground field; returns the rank, reduced rows first.
int reduce_rows(const GroundField& gf, std::vector<std::uint8_t>& m, int rows, int n) {
  int rank = 0;
  for (int col = 0; col < n && rank < rows; ++col) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (m[r * n + col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank)
      std::swap_ranges(m.begin() + piv * n, m.begin() + (piv + 1) * n, m.begin() + rank * n);
    const std::uint8_t s = gf.inv(m[rank * n + col]);
    if (s != 1)
      for (int c = col; c < n; ++c) m[rank * n + c] = gf.mul(m[rank * n + c], s);
    for (int r = 0; r < rows; ++r) {
      if (r == rank) continue;
      const std::uint8_t f = m[r * n + col];
      if (f == 0) continue;
      for (int c = col; c < n; ++c) m[r * n + c] = gf.sub(m[r * n + c], gf.mul(f, m[rank * n + c]));
    }
    ++rank;
  }
  return rank;
}

// Complement of `fixed` inside `line`, picked greedily from line's rows.
template <class Contains>
std::vector<int> complement_rows(int line_rank, Contains&& in_span) {
  std::vector<int> picked;
  for (int i = 0; i < line_rank; ++i)
    if (!in_span(i, picked)) picked.push_back(i);
  return picked;
}

}  // namespace

std::vector<int> FqSubspace::pivots() const {
  std::vector<int> out;
  out.reserve(rank_);
  for (int i = 0; i < rank_; ++i) {
    auto r = row(i);
    for (int c = 0; c < ambient_; ++c)
      if (r[c] != 0) {
        out.push_back(c);
        break;
      }
  }
  return out;
}

FqSubspace canonicalize(const GroundField& gf, int ambient, std::span<const std::uint8_t> rows) {
  const int count = ambient == 0 ? 0 : static_cast<int>(rows.size()) / ambient;
  if (gf.size() == 2 && ambient <= 64) {
    std::vector<std::uint64_t> packed(count, 0);
    for (int r = 0; r < count; ++r)
      for (int c = 0; c < ambient; ++c)
        if (rows[r * ambient + c]) packed[r] |= 1ull << c;
    gf2::rref(packed, ambient);
    return gf2::unpack(packed, ambient);
  }
  std::vector<std::uint8_t> m(rows.begin(), rows.end());
  const int rank = reduce_rows(gf, m, count, ambient);
  m.resize(static_cast<std::size_t>(rank) * ambient);
  return FqSubspace(ambient, rank, std::move(m));
}

FqSubspace span(const GroundField& gf, const FqSubspace& a, const FqSubspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw Error(ErrorCode::AmbientMismatch, "span of different ambients");
  std::vector<std::uint8_t> rows(a.data().begin(), a.data().end());
  rows.insert(rows.end(), b.data().begin(), b.data().end());
  return canonicalize(gf, a.ambient_dim(), rows);
}

FqSubspace intersect(const GroundField& gf, const FqSubspace& a, const FqSubspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw Error(ErrorCode::AmbientMismatch, "intersect of different ambients");
  const int n = a.ambient_dim();
  const int w = 2 * n;
  const int rows = a.rank() + b.rank();
  // Zassenhaus: rows [a | a] and [b | 0]; reduced rows with a zero left half
  // span the intersection in their right half.
  std::vector<std::uint8_t> m(static_cast<std::size_t>(rows) * w, 0);
  for (int i = 0; i < a.rank(); ++i) {
    auto r = a.row(i);
    std::copy(r.begin(), r.end(), m.begin() + i * w);
    std::copy(r.begin(), r.end(), m.begin() + i * w + n);
  }
  for (int i = 0; i < b.rank(); ++i) {
    auto r = b.row(i);
    std::copy(r.begin(), r.end(), m.begin() + (a.rank() + i) * w);
  }
  const int rank = reduce_rows(gf, m, rows, w);
  std::vector<std::uint8_t> out;
  for (int i = 0; i < rank; ++i) {
    const auto begin = m.begin() + i * w;
    if (std::all_of(begin, begin + n, [](std::uint8_t v) { return v == 0; }))
      out.insert(out.end(), begin + n, begin + w);
  }
  return canonicalize(gf, n, out);
}

bool contains(const GroundField& gf, const FqSubspace& s, std::span<const std::uint8_t> v) {
  const int n = s.ambient_dim();
  if (static_cast<int>(v.size()) != n) throw Error(ErrorCode::AmbientMismatch, "vector length");
  std::vector<std::uint8_t> w(v.begin(), v.end());
  const auto piv = s.pivots();
  for (int i = 0; i < s.rank(); ++i) {
    const std::uint8_t f = w[piv[i]];
    if (f == 0) continue;
    auto r = s.row(i);
    for (int c = piv[i]; c < n; ++c) w[c] = gf.sub(w[c], gf.mul(f, r[c]));
  }
  return std::all_of(w.begin(), w.end(), [](std::uint8_t x) { return x == 0; });
}

bool contains(const GroundField& gf, const FqSubspace& outer, const FqSubspace& inner) {
  for (int i = 0; i < inner.rank(); ++i)
    if (!contains(gf, outer, inner.row(i))) return false;
  return true;
}

std::vector<std::uint8_t> span_vectors(const GroundField& gf, const FqSubspace& s) {
  const int n = s.ambient_dim();
  const int q = gf.size();
  std::vector<std::uint8_t> out(static_cast<std::size_t>(n), 0);
  std::size_t count = 1;
  for (int i = 0; i < s.rank(); ++i) {
    auto r = s.row(i);
    out.resize(count * q * n);
    for (int c = 1; c < q; ++c) {
      for (std::size_t v = 0; v < count; ++v) {
        auto* dst = out.data() + (c * count + v) * n;
        const auto* src = out.data() + v * n;
        for (int j = 0; j < n; ++j) dst[j] = gf.add(src[j], gf.mul(static_cast<std::uint8_t>(c), r[j]));
      }
    }
    count *= q;
  }
  return out;
}

std::vector<std::uint8_t> flatten(const FieldTower& tower, std::span<const Fe> coords) {
  const int h = tower.h();
  std::vector<std::uint8_t> out(coords.size() * h);
  for (std::size_t i = 0; i < coords.size(); ++i)
    tower.to_fq_coords(coords[i], std::span<std::uint8_t>(out.data() + i * h, h));
  return out;
}

std::vector<Fe> unflatten(const FieldTower& tower, std::span<const std::uint8_t> flat) {
  const int h = tower.h();
  if (flat.size() % h != 0) throw Error(ErrorCode::AmbientMismatch, "flat length not a multiple of h");
  std::vector<Fe> out(flat.size() / h);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = tower.from_fq_coords(flat.subspan(i * h, h));
  return out;
}

FqSubspace canonicalize(const FieldTower& tower, const std::vector<std::vector<Fe>>& vectors) {
  if (vectors.empty()) throw Error(ErrorCode::AmbientMismatch, "no vectors; ambient unknown");
  const std::size_t r = vectors.front().size();
  std::vector<std::uint8_t> rows;
  for (const auto& v : vectors) {
    if (v.size() != r) throw Error(ErrorCode::AmbientMismatch, "vectors of different length");
    const auto f = flatten(tower, v);
    rows.insert(rows.end(), f.begin(), f.end());
  }
  return canonicalize(tower.ground(), static_cast<int>(r) * tower.h(), rows);
}

std::vector<std::vector<Fe>> ext_basis(const FieldTower& tower, const FqSubspace& s) {
  std::vector<std::vector<Fe>> out;
  for (int i = 0; i < s.rank(); ++i) out.push_back(unflatten(tower, s.row(i)));
  return out;
}

std::uint64_t gaussian_binomial(std::uint64_t q, int n, int k) {
  if (k < 0 || k > n) return 0;
  u128 g = 1;
  for (int i = 0; i < k; ++i) {
    const u128 num = checked_pow128(q, n - i) - 1;
    const u128 den = checked_pow128(q, i + 1) - 1;
    g = g * num / den;
    if (g > static_cast<u128>(~0ull)) throw Error(ErrorCode::TooLarge, "Gaussian binomial overflow");
  }
  return static_cast<std::uint64_t>(g);
}

std::uint64_t count_extensions(std::uint64_t q, int n, int line_dim, int fixed_dim, int k) {
  const std::uint64_t t = gaussian_binomial(q, n - line_dim, k - fixed_dim);
  const u128 maps = checked_pow128(q, (k - fixed_dim) * (line_dim - fixed_dim));
  const u128 total = static_cast<u128>(t) * maps;
  if (total > static_cast<u128>(~0ull)) throw Error(ErrorCode::TooLarge, "extension count overflow");
  return static_cast<std::uint64_t>(total);
}

std::uint64_t enumerate_rref(int alphabet, int n, int k, const RrefVisitor& visit, EnumerationLimits limits) {
  if (k < 0 || k > n) throw Error(ErrorCode::InvalidParams, "subspace dimension out of range");
  const std::uint64_t expected = gaussian_binomial(static_cast<std::uint64_t>(alphabet), n, k);
  if (expected > limits.max_count)
    throw Error(ErrorCode::TooLarge, "enumeration of " + std::to_string(expected) + " subspaces exceeds guard");
  std::vector<std::uint8_t> m(static_cast<std::size_t>(k) * n, 0);
  if (k == 0) {
    visit(m);
    return 1;
  }
  std::vector<int> piv(k);
  std::iota(piv.begin(), piv.end(), 0);
  std::uint64_t visited = 0;
  std::vector<int> free_pos;
  std::vector<int> digits;
  std::vector<char> is_pivot(n);
  while (true) {
    std::fill(m.begin(), m.end(), 0);
    std::fill(is_pivot.begin(), is_pivot.end(), 0);
    for (int i = 0; i < k; ++i) {
      m[i * n + piv[i]] = 1;
      is_pivot[piv[i]] = 1;
    }
    free_pos.clear();
    for (int i = 0; i < k; ++i)
      for (int c = piv[i] + 1; c < n; ++c)
        if (!is_pivot[c]) free_pos.push_back(i * n + c);
    digits.assign(free_pos.size(), 0);
    while (true) {
      visit(m);
      ++visited;
      int j = static_cast<int>(digits.size()) - 1;
      while (j >= 0 && digits[j] == alphabet - 1) {
        digits[j] = 0;
        m[free_pos[j]] = 0;
        --j;
      }
      if (j < 0) break;
      ++digits[j];
      m[free_pos[j]] = static_cast<std::uint8_t>(digits[j]);
    }
    int i = k - 1;
    while (i >= 0 && piv[i] == n - k + i) --i;
    if (i < 0) break;
    ++piv[i];
    for (int j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
  }
  return visited;
}

std::uint64_t enumerate_subspaces(const GroundField& gf, int n, int k, const SubspaceVisitor& visit,
                                  EnumerationLimits limits) {
  FqSubspace current;
  return enumerate_rref(
      gf.size(), n, k,
      [&](std::span<const std::uint8_t> m) {
        current = FqSubspace(n, k, std::vector<std::uint8_t>(m.begin(), m.end()));
        visit(current);
      },
      limits);
}

std::uint64_t enumerate_extensions(const GroundField& gf, const FqSubspace& fixed, int k, const FqSubspace& line,
                                   const SubspaceVisitor& visit, EnumerationLimits limits) {
  const int n = line.ambient_dim();
  if (fixed.ambient_dim() != n) throw Error(ErrorCode::AmbientMismatch, "fixed and line ambients differ");
  const int f = fixed.rank(), l = line.rank();
  if (!contains(gf, line, fixed)) throw Error(ErrorCode::ConstraintInfeasible, "fixed is not inside line");
  if (k < f || k - f > n - l) throw Error(ErrorCode::ConstraintInfeasible, "no subspace of that rank meets line in fixed");
  const std::uint64_t expected = count_extensions(static_cast<std::uint64_t>(gf.size()), n, l, f, k);
  if (expected > limits.max_count) throw Error(ErrorCode::TooLarge, "extension enumeration exceeds guard");

  // ambient = C (+) line with C spanned by unit vectors off line's pivots.
  std::vector<char> line_pivot(n, 0);
  for (int c : line.pivots()) line_pivot[c] = 1;
  std::vector<int> c_cols;
  for (int c = 0; c < n; ++c)
    if (!line_pivot[c]) c_cols.push_back(c);
  FqSubspace acc = fixed;
  std::vector<int> d_rows;
  for (int i = 0; i < l; ++i) {
    if (contains(gf, acc, line.row(i))) continue;
    d_rows.push_back(i);
    acc = canonicalize(gf, n, [&] {
      std::vector<std::uint8_t> rows(acc.data().begin(), acc.data().end());
      rows.insert(rows.end(), line.row(i).begin(), line.row(i).end());
      return rows;
    }());
  }
  const int t_dim = k - f;
  const int d_dim = static_cast<int>(d_rows.size());
  const int q = gf.size();
  const int cells = t_dim * d_dim;

  std::uint64_t visited = 0;
  std::vector<std::uint8_t> rows(static_cast<std::size_t>(k) * n, 0);
  std::copy(fixed.data().begin(), fixed.data().end(), rows.begin());
  std::vector<std::uint8_t> t_rows(static_cast<std::size_t>(t_dim) * n);
  enumerate_rref(q, static_cast<int>(c_cols.size()), t_dim, [&](std::span<const std::uint8_t> t) {
    std::fill(t_rows.begin(), t_rows.end(), 0);
    const int cn = static_cast<int>(c_cols.size());
    for (int i = 0; i < t_dim; ++i)
      for (int j = 0; j < cn; ++j) t_rows[i * n + c_cols[j]] = t[i * cn + j];
    std::vector<int> digits(cells, 0);
    while (true) {
      for (int i = 0; i < t_dim; ++i) {
        auto* dst = rows.data() + (f + i) * n;
        std::copy(t_rows.begin() + i * n, t_rows.begin() + (i + 1) * n, dst);
        for (int j = 0; j < d_dim; ++j) {
          const auto coef = static_cast<std::uint8_t>(digits[i * d_dim + j]);
          if (coef == 0) continue;
          auto d = line.row(d_rows[j]);
          for (int c = 0; c < n; ++c) dst[c] = gf.add(dst[c], gf.mul(coef, d[c]));
        }
      }
      visit(canonicalize(gf, n, rows));
      ++visited;
      int j = cells - 1;
      while (j >= 0 && digits[j] == q - 1) digits[j--] = 0;
      if (j < 0) break;
      ++digits[j];
    }
  });
  return visited;
}

namespace gf2 {

int rref(std::vector<std::uint64_t>& rows, int n) {
  int rank = 0;
  const int count = static_cast<int>(rows.size());
  for (int col = 0; col < n && rank < count; ++col) {
    const std::uint64_t bit = 1ull << col;
    int piv = -1;
    for (int r = rank; r < count; ++r)
      if (rows[r] & bit) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[piv], rows[rank]);
    for (int r = 0; r < count; ++r)
      if (r != rank && (rows[r] & bit)) rows[r] ^= rows[rank];
    ++rank;
  }
  rows.resize(rank);
  return rank;
}

std::vector<std::uint64_t> pack(const FqSubspace& s) {
  std::vector<std::uint64_t> out(s.rank(), 0);
  for (int i = 0; i < s.rank(); ++i) {
    auto r = s.row(i);
    for (int c = 0; c < s.ambient_dim(); ++c)
      if (r[c]) out[i] |= 1ull << c;
  }
  return out;
}

FqSubspace unpack(std::span<const std::uint64_t> rows, int n) {
  std::vector<std::uint8_t> m(rows.size() * n, 0);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int c = 0; c < n; ++c) m[i * n + c] = static_cast<std::uint8_t>((rows[i] >> c) & 1u);
  return FqSubspace(n, static_cast<int>(rows.size()), std::move(m));
}

std::uint64_t enumerate_subspaces(int n, int k, const PackedVisitor& visit, EnumerationLimits limits) {
  if (n > 64) throw Error(ErrorCode::TooLarge, "packed rows hold at most 64 columns");
  if (k < 0 || k > n) throw Error(ErrorCode::InvalidParams, "subspace dimension out of range");
  const std::uint64_t expected = gaussian_binomial(2, n, k);
  if (expected > limits.max_count)
    throw Error(ErrorCode::TooLarge, "enumeration of " + std::to_string(expected) + " subspaces exceeds guard");
  std::vector<std::uint64_t> rows(k, 0);
  if (k == 0) {
    visit(rows);
    return 1;
  }
  std::vector<int> piv(k);
  std::iota(piv.begin(), piv.end(), 0);
  std::uint64_t visited = 0;
  struct Slot {
    int row;
    std::uint64_t bit;
  };
  std::vector<Slot> free_pos;
  while (true) {
    std::uint64_t pivot_mask = 0;
    for (int i = 0; i < k; ++i) pivot_mask |= 1ull << piv[i];
    free_pos.clear();
    for (int i = 0; i < k; ++i)
      for (int c = piv[i] + 1; c < n; ++c)
        if (!(pivot_mask >> c & 1u)) free_pos.push_back({i, 1ull << c});
    for (int i = 0; i < k; ++i) rows[i] = 1ull << piv[i];
    const int nf = static_cast<int>(free_pos.size());
    // Counter over the free entries, first entry most significant.
    for (std::uint64_t m = 0;; ++m) {
      visit(rows);
      ++visited;
      // Increment: flip trailing ones to zero, next zero to one.
      int j = nf - 1;
      while (j >= 0 && (rows[free_pos[j].row] & free_pos[j].bit)) {
        rows[free_pos[j].row] &= ~free_pos[j].bit;
        --j;
      }
      if (j < 0) break;
      rows[free_pos[j].row] |= free_pos[j].bit;
    }
    int i = k - 1;
    while (i >= 0 && piv[i] == n - k + i) --i;
    if (i < 0) break;
    ++piv[i];
    for (int j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
  }
  return visited;
}

std::uint64_t enumerate_extensions(std::span<const std::uint64_t> fixed, int k, std::span<const std::uint64_t> line,
                                   int n, const PackedVisitor& visit, EnumerationLimits limits) {
  std::vector<std::uint64_t> l(line.begin(), line.end());
  const int l_rank = rref(l, n);
  std::vector<std::uint64_t> fx(fixed.begin(), fixed.end());
  const int f = rref(fx, n);
  {
    std::vector<std::uint64_t> both = l;
    both.insert(both.end(), fx.begin(), fx.end());
    if (rref(both, n) != l_rank) throw Error(ErrorCode::ConstraintInfeasible, "fixed is not inside line");
  }
  if (k < f || k - f > n - l_rank) throw Error(ErrorCode::ConstraintInfeasible, "no subspace of that rank meets line in fixed");
  const std::uint64_t expected = count_extensions(2, n, l_rank, f, k);
  if (expected > limits.max_count) throw Error(ErrorCode::TooLarge, "extension enumeration exceeds guard");

  std::uint64_t pivot_mask = 0;
  for (auto r : l) pivot_mask |= r & (~r + 1);
  std::vector<int> c_cols;
  for (int c = 0; c < n; ++c)
    if (!(pivot_mask >> c & 1u)) c_cols.push_back(c);
  std::vector<std::uint64_t> d;
  std::vector<std::uint64_t> acc = fx;
  for (auto r : l) {
    std::vector<std::uint64_t> trial = acc;
    trial.push_back(r);
    if (rref(trial, n) > static_cast<int>(acc.size())) {
      d.push_back(r);
      acc = trial;
    }
  }
  const int t_dim = k - f;
  const int d_dim = static_cast<int>(d.size());
  const int cells = t_dim * d_dim;
  std::vector<std::uint64_t> basis(fx.begin(), fx.end());
  basis.resize(k, 0);
  std::vector<std::uint64_t> t_rows(t_dim);
  std::uint64_t visited = 0;
  enumerate_subspaces(static_cast<int>(c_cols.size()), t_dim, [&](std::span<const std::uint64_t> t) {
    for (int i = 0; i < t_dim; ++i) {
      std::uint64_t v = 0;
      for (std::size_t j = 0; j < c_cols.size(); ++j)
        if (t[i] >> j & 1u) v |= 1ull << c_cols[j];
      t_rows[i] = v;
    }
    const std::uint64_t maps = 1ull << cells;
    for (std::uint64_t m = 0; m < maps; ++m) {
      for (int i = 0; i < t_dim; ++i) {
        std::uint64_t v = t_rows[i];
        for (int j = 0; j < d_dim; ++j)
          if (m >> (cells - 1 - (i * d_dim + j)) & 1u) v ^= d[j];
        basis[f + i] = v;
      }
      visit(basis);
      ++visited;
    }
  });
  return visited;
}

}  // namespace gf2

}  // namespace linset
