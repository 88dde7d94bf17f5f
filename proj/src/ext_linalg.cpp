#include "linset/ext_linalg.hpp"

#include <algorithm>

#include "linset/error.hpp"

namespace linset {

bool is_zero(std::span<const Fe> v) {
  return std::all_of(v.begin(), v.end(), [](Fe x) { return x.code == 0; });
}

int ext_rref(const FieldTower& t, ExtRows& rows) {
  const int m = static_cast<int>(rows.size());
  const int n = m == 0 ? 0 : static_cast<int>(rows.front().size());
  int rank = 0;
  for (int col = 0; col < n && rank < m; ++col) {
    int piv = -1;
    for (int r = rank; r < m; ++r)
      if (rows[r][col].code != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[piv], rows[rank]);
    const Fe s = t.inv(rows[rank][col]);
    for (int c = col; c < n; ++c) rows[rank][c] = t.mul(rows[rank][c], s);
    for (int r = 0; r < m; ++r) {
      if (r == rank || rows[r][col].code == 0) continue;
      const Fe f = rows[r][col];
      for (int c = col; c < n; ++c) rows[r][c] = t.sub(rows[r][c], t.mul(f, rows[rank][c]));
    }
    ++rank;
  }
  rows.resize(rank);
  return rank;
}

int ext_rank(const FieldTower& t, ExtRows rows) { return ext_rref(t, rows); }

std::optional<ExtRows> ext_inverse(const FieldTower& t, const ExtRows& m) {
  const int n = static_cast<int>(m.size());
  ExtRows aug(n, ExtVec(2 * n, t.zero()));
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(m[i].size()) != n) throw Error(ErrorCode::AmbientMismatch, "matrix is not square");
    std::copy(m[i].begin(), m[i].end(), aug[i].begin());
    aug[i][n + i] = t.one();
  }
  ExtRows reduced = aug;
  if (ext_rref(t, reduced) < n) return std::nullopt;
  for (int i = 0; i < n; ++i)
    if (reduced[i][i] != t.one()) return std::nullopt;
  ExtRows inv(n);
  for (int i = 0; i < n; ++i) inv[i].assign(reduced[i].begin() + n, reduced[i].end());
  return inv;
}

ExtVec ext_vec_mat(const FieldTower& t, std::span<const Fe> x, const ExtRows& m) {
  const std::size_t cols = m.empty() ? 0 : m.front().size();
  ExtVec out(cols, t.zero());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].code == 0) continue;
    for (std::size_t j = 0; j < cols; ++j) out[j] = t.add(out[j], t.mul(x[i], m[i][j]));
  }
  return out;
}

ExtVec ext_normalize(const FieldTower& t, std::span<const Fe> v) {
  auto it = std::find_if(v.begin(), v.end(), [](Fe x) { return x.code != 0; });
  if (it == v.end()) throw Error(ErrorCode::ZeroSubspace, "cannot normalize the zero vector");
  const Fe s = t.inv(*it);
  ExtVec out(v.size(), t.zero());
  for (std::size_t i = static_cast<std::size_t>(it - v.begin()); i < v.size(); ++i) out[i] = t.mul(v[i], s);
  return out;
}

bool ext_in_span(const FieldTower& t, const ExtRows& rows, std::span<const Fe> v) {
  ExtRows a = rows;
  const int base = ext_rref(t, a);
  a.emplace_back(v.begin(), v.end());
  return ext_rref(t, a) == base;
}

}  // namespace linset
