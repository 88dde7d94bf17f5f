#include "linset/field.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

#include "linset/error.hpp"

namespace linset {

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Dense polynomials over F_p, low degree first, no trailing zeros.
using Poly = std::vector<int>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int inv_mod(int a, int p) {
  int result = 1, base = a % p, k = p - 2;
  while (k > 0) {
    if (k & 1) result = result * base % p;
    base = base * base % p;
    k >>= 1;
  }
  return result;
}

Poly poly_mod(Poly a, const Poly& m, int p) {
  trim(a);
  const int dm = static_cast<int>(m.size()) - 1;
  const int lead_inv = inv_mod(m.back(), p);
  while (static_cast<int>(a.size()) - 1 >= dm) {
    const int shift = static_cast<int>(a.size()) - 1 - dm;
    const int c = a.back() * lead_inv % p;
    for (int i = 0; i <= dm; ++i) a[shift + i] = ((a[shift + i] - c * m[i]) % p + p) % p;
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, int p) {
  if (a.empty() || b.empty()) return {};
  Poly prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
  return poly_mod(std::move(prod), m, p);
}

Poly poly_pow_p(const Poly& a, const Poly& m, int p) {
  Poly result{1}, base = a;
  int k = p;
  while (k > 0) {
    if (k & 1) result = poly_mulmod(result, base, m, p);
    base = poly_mulmod(base, base, m, p);
    k >>= 1;
  }
  return result;
}

Poly poly_gcd(Poly a, Poly b, int p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Poly poly_sub(Poly a, const Poly& b, int p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = ((a[i] - b[i]) % p + p) % p;
  trim(a);
  return a;
}

// x^{p^k} mod f for k = 0..n.
std::vector<Poly> frobenius_chain(const Poly& f, int p, int n) {
  std::vector<Poly> chain;
  Poly x = poly_mod({0, 1}, f, p);
  chain.push_back(x);
  for (int k = 1; k <= n; ++k) chain.push_back(poly_pow_p(chain.back(), f, p));
  return chain;
}

// Rabin's test.
bool is_irreducible(const Poly& f, int p) {
  const int n = static_cast<int>(f.size()) - 1;
  if (n < 1) return false;
  if (n == 1) return true;
  const auto chain = frobenius_chain(f, p, n);
  const Poly x = poly_mod({0, 1}, f, p);
  if (!poly_sub(chain[n], x, p).empty()) return false;
  for (auto l : prime_factors(static_cast<std::uint64_t>(n))) {
    Poly g = poly_gcd(f, poly_sub(chain[n / static_cast<int>(l)], x, p), p);
    if (g.size() != 1) return false;
  }
  return true;
}

std::uint64_t checked_pow(std::uint64_t base, int k, std::uint64_t limit) {
  std::uint64_t v = 1;
  for (int i = 0; i < k; ++i) {
    v *= base;
    if (v > limit) throw Error(ErrorCode::TooLarge, "field order exceeds " + std::to_string(limit));
  }
  return v;
}

// Solve over F_p; returns the inverse of an n x n matrix (row-major).
std::vector<int> invert_mod_p(std::vector<int> m, int n, int p) {
  std::vector<int> inv(n * n, 0);
  for (int i = 0; i < n; ++i) inv[i * n + i] = 1;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (m[r * n + col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw Error(ErrorCode::DegenerateScene, "singular flattening basis");
    for (int c = 0; c < n; ++c) {
      std::swap(m[piv * n + c], m[col * n + c]);
      std::swap(inv[piv * n + c], inv[col * n + c]);
    }
    const int s = inv_mod(m[col * n + col], p);
    for (int c = 0; c < n; ++c) {
      m[col * n + c] = m[col * n + c] * s % p;
      inv[col * n + c] = inv[col * n + c] * s % p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || m[r * n + col] == 0) continue;
      const int f = m[r * n + col];
      for (int c = 0; c < n; ++c) {
        m[r * n + c] = ((m[r * n + c] - f * m[col * n + c]) % p + p) % p;
        inv[r * n + c] = ((inv[r * n + c] - f * inv[col * n + c]) % p + p) % p;
      }
    }
  }
  return inv;
}

}  // namespace

GroundField::GroundField(const FieldTower& tower) {
  elems_ = tower.subfield_elements(1);
  q_ = static_cast<int>(elems_.size());
  add_.resize(q_ * q_);
  mul_.resize(q_ * q_);
  neg_.resize(q_);
  inv_.resize(q_, 0);
  for (int a = 0; a < q_; ++a) {
    for (int b = 0; b < q_; ++b) {
      add_[a * q_ + b] = static_cast<std::uint8_t>(index_of(tower.add(elems_[a], elems_[b])));
      mul_[a * q_ + b] = static_cast<std::uint8_t>(index_of(tower.mul(elems_[a], elems_[b])));
    }
    neg_[a] = static_cast<std::uint8_t>(index_of(tower.neg(elems_[a])));
    if (a != 0) inv_[a] = static_cast<std::uint8_t>(index_of(tower.inv(elems_[a])));
  }
}

int GroundField::index_of(Fe x) const {
  auto it = std::lower_bound(elems_.begin(), elems_.end(), x);
  if (it == elems_.end() || *it != x) return -1;
  return static_cast<int>(it - elems_.begin());
}

FieldSpec parse_field_spec(std::string_view text) {
  auto fail = [&](const std::string& why) {
    return Error(ErrorCode::ParseError, "field spec '" + std::string(text) + "': " + why);
  };
  auto to_int = [&](std::string_view s, int base = 10) {
    long long v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v, base);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) throw fail("bad number");
    return v;
  };
  FieldSpec spec;
  const auto c1 = text.find(':');
  if (c1 == std::string_view::npos) throw fail("expected p^e:h");
  const auto q_part = text.substr(0, c1);
  auto rest = text.substr(c1 + 1);
  const auto caret = q_part.find('^');
  if (caret == std::string_view::npos) {
    spec.p = static_cast<int>(to_int(q_part));
    spec.e = 1;
  } else {
    spec.p = static_cast<int>(to_int(q_part.substr(0, caret)));
    spec.e = static_cast<int>(to_int(q_part.substr(caret + 1)));
  }
  const auto c2 = rest.find(':');
  spec.h = static_cast<int>(to_int(rest.substr(0, c2)));
  if (c2 != std::string_view::npos) {
    auto hex = rest.substr(c2 + 1);
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    auto code = static_cast<unsigned long long>(to_int(hex, 16));
    if (spec.p < 2) throw fail("bad prime");
    std::vector<int> poly;
    while (code > 0) {
      poly.push_back(static_cast<int>(code % static_cast<unsigned>(spec.p)));
      code /= static_cast<unsigned>(spec.p);
    }
    spec.poly = std::move(poly);
  }
  return spec;
}

FieldTower FieldTower::make(int p, int e, int h, std::optional<std::vector<int>> poly) {
  if (!is_prime(p)) throw Error(ErrorCode::NonPrime, std::to_string(p) + " is not prime");
  if (e < 1 || h < 1) throw Error(ErrorCode::InvalidParams, "e and h must be positive");
  FieldTower t;
  t.p_ = p;
  t.e_ = e;
  t.h_ = h;
  t.n_ = e * h;
  t.q_ = static_cast<std::uint32_t>(checked_pow(p, e, kMaxOrder));
  t.order_ = static_cast<std::uint32_t>(checked_pow(p, t.n_, kMaxOrder));
  t.ppow_.resize(t.n_ + 1);
  t.ppow_[0] = 1;
  for (int i = 1; i <= t.n_; ++i) t.ppow_[i] = t.ppow_[i - 1] * static_cast<std::uint32_t>(p);

  if (poly) {
    Poly f = *poly;
    trim(f);
    if (static_cast<int>(f.size()) - 1 != t.n_ || f.back() != 1)
      throw Error(ErrorCode::DegreeMismatch,
                  "defining polynomial must be monic of degree " + std::to_string(t.n_));
    for (int c : f)
      if (c < 0 || c >= p) throw Error(ErrorCode::DegreeMismatch, "coefficient out of range");
    if (!is_irreducible(f, p)) throw Error(ErrorCode::ReduciblePolynomial, "defining polynomial is reducible");
    t.poly_ = std::move(f);
  } else {
    // Least monic irreducible in the order of the integer encoding of its
    // lower coefficients.
    for (std::uint32_t lower = 0; lower < t.order_; ++lower) {
      Poly f(t.n_ + 1, 0);
      std::uint32_t v = lower;
      for (int i = 0; i < t.n_; ++i) {
        f[i] = static_cast<int>(v % static_cast<std::uint32_t>(p));
        v /= static_cast<std::uint32_t>(p);
      }
      f[t.n_] = 1;
      if (is_irreducible(f, p)) {
        t.poly_ = std::move(f);
        break;
      }
    }
  }

  t.find_generator();
  if (t.order_ <= kMaxTableOrder) t.build_tables();
  t.theta_ = t.n_ >= 2 ? Fe{static_cast<std::uint32_t>(p)} : t.one();
  t.q_embedding_ = t.subfield_generator(1);
  t.ground_ = GroundField(t);
  t.build_flattening();
  return t;
}

std::string FieldTower::spec_string() const {
  std::uint64_t code = 0;
  for (int i = n_; i >= 0; --i) code = code * static_cast<std::uint64_t>(p_) + static_cast<std::uint64_t>(poly_[i]);
  std::ostringstream os;
  os << p_ << '^' << e_ << ':' << h_ << ':' << std::hex << code;
  return os.str();
}

std::vector<int> FieldTower::coeffs(Fe a) const {
  std::vector<int> c(n_);
  std::uint32_t v = a.code;
  for (int i = 0; i < n_; ++i) {
    c[i] = static_cast<int>(v % static_cast<std::uint32_t>(p_));
    v /= static_cast<std::uint32_t>(p_);
  }
  return c;
}

Fe FieldTower::from_coeffs(std::span<const int> c) const {
  std::uint32_t v = 0;
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
    v = v * static_cast<std::uint32_t>(p_) + static_cast<std::uint32_t>(((c[i] % p_) + p_) % p_);
  return Fe{v};
}

Fe FieldTower::add_digits(Fe a, Fe b) const {
  std::uint32_t x = a.code, y = b.code, out = 0;
  const auto p = static_cast<std::uint32_t>(p_);
  for (int i = 0; i < n_ && (x | y); ++i) {
    out += ((x % p + y % p) % p) * ppow_[i];
    x /= p;
    y /= p;
  }
  return Fe{out};
}

Fe FieldTower::add(Fe a, Fe b) const {
  if (p_ == 2) return Fe{a.code ^ b.code};
  if (a.code == 0) return b;
  if (b.code == 0) return a;
  if (!zech_.empty()) {
    const std::uint32_t m = order_ - 1;
    const std::uint32_t la = log_[a.code];
    const std::uint32_t d = (log_[b.code] + m - la) % m;
    const std::int32_t z = zech_[d];
    if (z < 0) return Fe{0};
    return Fe{exp_[la + static_cast<std::uint32_t>(z)]};
  }
  return add_digits(a, b);
}

Fe FieldTower::neg(Fe a) const {
  if (p_ == 2 || a.code == 0) return a;
  if (!exp_.empty()) return Fe{exp_[log_[a.code] + (order_ - 1) / 2]};
  std::uint32_t x = a.code, out = 0;
  const auto p = static_cast<std::uint32_t>(p_);
  for (int i = 0; i < n_ && x; ++i) {
    out += ((p - x % p) % p) * ppow_[i];
    x /= p;
  }
  return Fe{out};
}

Fe FieldTower::mul_poly(Fe a, Fe b) const {
  if (a.code == 0 || b.code == 0) return Fe{0};
  const auto ca = coeffs(a), cb = coeffs(b);
  std::vector<long long> prod(2 * n_ - 1, 0);
  for (int i = 0; i < n_; ++i) {
    if (ca[i] == 0) continue;
    for (int j = 0; j < n_; ++j) prod[i + j] += static_cast<long long>(ca[i]) * cb[j];
  }
  for (auto& v : prod) v %= p_;
  for (int i = 2 * n_ - 2; i >= n_; --i) {
    const long long c = prod[i] % p_;
    if (c == 0) continue;
    for (int j = 0; j < n_; ++j) prod[i - n_ + j] = ((prod[i - n_ + j] - c * poly_[j]) % p_ + p_) % p_;
    prod[i] = 0;
  }
  std::vector<int> out(n_);
  for (int i = 0; i < n_; ++i) out[i] = static_cast<int>(prod[i]);
  return from_coeffs(out);
}

Fe FieldTower::mul(Fe a, Fe b) const {
  if (a.code == 0 || b.code == 0) return Fe{0};
  if (!exp_.empty()) return Fe{exp_[log_[a.code] + log_[b.code]]};
  return mul_poly(a, b);
}

Fe FieldTower::inv(Fe a) const {
  if (a.code == 0) throw Error(ErrorCode::InvalidParams, "inverse of zero");
  if (!exp_.empty()) {
    const std::uint32_t m = order_ - 1;
    return Fe{exp_[(m - log_[a.code]) % m]};
  }
  return pow(a, order_ - 2);
}

Fe FieldTower::pow(Fe a, std::uint64_t k) const {
  if (a.code == 0) return k == 0 ? one() : zero();
  if (!exp_.empty()) {
    const std::uint64_t m = order_ - 1;
    return Fe{exp_[static_cast<std::uint32_t>((static_cast<std::uint64_t>(log_[a.code]) * (k % m)) % m)]};
  }
  Fe result = one(), base = a;
  while (k > 0) {
    if (k & 1) result = mul(result, base);
    base = mul(base, base);
    k >>= 1;
  }
  return result;
}

void FieldTower::find_generator() {
  if (order_ == 2) {
    generator_ = one();
    return;
  }
  const auto factors = prime_factors(order_ - 1);
  for (std::uint32_t c = 1; c < order_; ++c) {
    const Fe g{c};
    bool ok = true;
    for (auto l : factors) {
      if (pow(g, (order_ - 1) / l) == one()) {
        ok = false;
        break;
      }
    }
    if (ok) {
      generator_ = g;
      return;
    }
  }
}

void FieldTower::build_tables() {
  const std::uint32_t m = order_ - 1;
  exp_.assign(2 * static_cast<std::size_t>(m) + 1, 0);
  log_.assign(order_, 0);
  Fe x = one();
  for (std::uint32_t i = 0; i < m; ++i) {
    exp_[i] = x.code;
    log_[x.code] = i;
    x = mul_poly(x, generator_);
  }
  for (std::uint32_t i = m; i < exp_.size(); ++i) exp_[i] = exp_[i - m];
  if (p_ != 2) {
    zech_.assign(m, -1);
    for (std::uint32_t i = 0; i < m; ++i) {
      const Fe s = add_digits(one(), Fe{exp_[i]});
      zech_[i] = s.code == 0 ? -1 : static_cast<std::int32_t>(log_[s.code]);
    }
  }
}

void FieldTower::build_flattening() {
  if (e_ == 1) return;
  // Column (j, a) of the basis matrix holds the F_p digits of gamma^a theta^j.
  std::vector<int> m(n_ * n_, 0);
  Fe theta_j = one();
  for (int j = 0; j < h_; ++j) {
    Fe g = theta_j;
    for (int a = 0; a < e_; ++a) {
      const auto d = coeffs(g);
      for (int row = 0; row < n_; ++row) m[row * n_ + (j * e_ + a)] = d[row];
      g = mul(g, q_embedding_);
    }
    theta_j = mul(theta_j, theta_);
  }
  flat_inverse_ = invert_mod_p(std::move(m), n_, p_);
  combo_to_index_.resize(q_);
  for (std::uint32_t t = 0; t < q_; ++t) {
    Fe x = zero(), g = one();
    std::uint32_t v = t;
    for (int a = 0; a < e_; ++a) {
      const auto d = v % static_cast<std::uint32_t>(p_);
      v /= static_cast<std::uint32_t>(p_);
      for (std::uint32_t i = 0; i < d; ++i) x = add(x, g);
      g = mul(g, q_embedding_);
    }
    combo_to_index_[t] = static_cast<std::uint8_t>(ground_.index_of(x));
  }
  basis_multiples_.resize(static_cast<std::size_t>(h_) * q_);
  theta_j = one();
  for (int j = 0; j < h_; ++j) {
    for (std::uint32_t idx = 0; idx < q_; ++idx)
      basis_multiples_[j * q_ + idx] = mul(ground_.element(static_cast<std::uint8_t>(idx)), theta_j);
    theta_j = mul(theta_j, theta_);
  }
}

void FieldTower::to_fq_coords(Fe a, std::span<std::uint8_t> out) const {
  if (e_ == 1) {
    std::uint32_t v = a.code;
    const auto p = static_cast<std::uint32_t>(p_);
    for (int j = 0; j < h_; ++j) {
      out[j] = static_cast<std::uint8_t>(v % p);
      v /= p;
    }
    return;
  }
  const auto d = coeffs(a);
  for (int j = 0; j < h_; ++j) {
    std::uint32_t combo = 0;
    for (int a_idx = e_ - 1; a_idx >= 0; --a_idx) {
      const int row = j * e_ + a_idx;
      long long c = 0;
      for (int k = 0; k < n_; ++k) c += static_cast<long long>(flat_inverse_[row * n_ + k]) * d[k];
      combo = combo * static_cast<std::uint32_t>(p_) + static_cast<std::uint32_t>(c % p_);
    }
    out[j] = combo_to_index_[combo];
  }
}

Fe FieldTower::from_fq_coords(std::span<const std::uint8_t> c) const {
  if (e_ == 1) {
    std::uint32_t v = 0;
    for (int j = h_ - 1; j >= 0; --j) v = v * static_cast<std::uint32_t>(p_) + c[j];
    return Fe{v};
  }
  Fe x = zero();
  for (int j = 0; j < h_; ++j) x = add(x, basis_multiples_[j * q_ + c[j]]);
  return x;
}

int FieldTower::degree_over_q(Fe a) const {
  Fe y = a;
  for (int s = 1; s <= h_; ++s) {
    y = frobenius_q(y);
    if (y == a) return s;
  }
  return h_;
}

std::vector<Fe> FieldTower::subfield_elements(int s) const {
  if (s < 1 || h_ % s != 0)
    throw Error(ErrorCode::NotADivisor, std::to_string(s) + " does not divide h=" + std::to_string(h_));
  const std::uint64_t sub_order = checked_pow(q_, s, kMaxOrder);
  const std::uint64_t step = (order_ - 1) / (sub_order - 1);
  std::vector<Fe> out;
  out.reserve(sub_order);
  out.push_back(zero());
  Fe g = pow(generator_, step), x = one();
  for (std::uint64_t j = 0; j + 1 < sub_order; ++j) {
    out.push_back(x);
    x = mul(x, g);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Fe FieldTower::subfield_generator(int s) const {
  if (s < 1 || h_ % s != 0)
    throw Error(ErrorCode::NotADivisor, std::to_string(s) + " does not divide h=" + std::to_string(h_));
  const std::uint64_t sub_order = checked_pow(q_, s, kMaxOrder);
  return pow(generator_, (order_ - 1) / (sub_order - 1));
}

}  // namespace linset
