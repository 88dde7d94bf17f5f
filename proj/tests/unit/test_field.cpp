#include <doctest.h>

#include <set>

#include "linset/error.hpp"
#include "linset/field.hpp"
#include "oracles.hpp"

using namespace linset;

namespace {

using Poly = std::vector<int>;  // low degree first

Poly digits(std::uint64_t code, int p, int n) {
  Poly c(n);
  for (int i = 0; i < n; ++i) {
    c[i] = static_cast<int>(code % p);
    code /= p;
  }
  return c;
}

// Schoolbook product reduced modulo the monic f.
Poly mul_mod(const Poly& a, const Poly& b, const Poly& f, int p) {
  const int n = static_cast<int>(f.size()) - 1;
  Poly prod(2 * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
  for (int d = 2 * n - 1; d >= n; --d) {
    const int c = prod[d];
    if (c == 0) continue;
    for (int i = 0; i <= n; ++i) prod[d - n + i] = ((prod[d - n + i] - c * f[i]) % p + p) % p;
  }
  prod.resize(n);
  return prod;
}

// Trial division by every monic polynomial of degree 1..n/2.
bool irreducible(const Poly& f, int p) {
  const int n = static_cast<int>(f.size()) - 1;
  for (int d = 1; 2 * d <= n; ++d) {
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (std::uint64_t c = 0; c < count; ++c) {
      Poly g = digits(c, p, d);
      g.push_back(1);
      Poly r = f;
      for (int deg = n; deg >= d; --deg) {
        const int lead = r[deg];
        if (lead == 0) continue;
        for (int i = 0; i <= d; ++i) r[deg - d + i] = ((r[deg - d + i] - lead * g[i]) % p + p) % p;
      }
      bool zero = true;
      for (int i = 0; i < d; ++i) zero = zero && r[i] == 0;
      if (zero) return false;
    }
  }
  return true;
}

std::uint64_t poly_code(const Poly& f, int p) {
  std::uint64_t c = 0;
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i) c = c * p + f[i];
  return c;
}

}  // namespace

TEST_CASE("small towers from explicit and default polynomials") {
  const FieldTower f4 = FieldTower::make(2, 1, 2, Poly{1, 1, 1});
  CHECK(f4.order() == 4);
  CHECK(f4.q() == 2);
  CHECK(f4.spec_string() == "2^1:2:7");

  const FieldTower f64 = FieldTower::make(2, 1, 6);
  CHECK(f64.order() == 64);
  CHECK(f64.subfield_elements(2).size() == 4);
  CHECK(f64.subfield_elements(3).size() == 8);
  CHECK_THROWS_AS(f64.subfield_elements(4), Error);

  const FieldTower f81 = FieldTower::make(3, 1, 4);
  CHECK(f81.order() == 81);
}

TEST_CASE("default polynomial is the least irreducible by encoding") {
  for (auto [p, n] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {2, 4}, {2, 6}, {3, 2}, {3, 4}, {5, 2}}) {
    const FieldTower t = FieldTower::make(p, 1, n);
    const Poly f = t.defining_poly();
    REQUIRE(static_cast<int>(f.size()) == n + 1);
    CHECK(irreducible(f, p));
    std::uint64_t lo = 1;
    for (int i = 0; i < n; ++i) lo *= p;  // x^n
    for (std::uint64_t c = lo; c < poly_code(f, p); ++c) CHECK_FALSE(irreducible(digits(c, p, n + 1), p));
  }
}

TEST_CASE("construction errors") {
  CHECK_THROWS_WITH_AS(FieldTower::make(4, 1, 2), doctest::Contains("NonPrime"), Error);
  CHECK_THROWS_WITH_AS(FieldTower::make(2, 1, 2, Poly{1, 0, 1}), doctest::Contains("ReduciblePolynomial"), Error);
  CHECK_THROWS_WITH_AS(FieldTower::make(2, 1, 3, Poly{1, 1, 1}), doctest::Contains("DegreeMismatch"), Error);
  CHECK_THROWS_AS(parse_field_spec("2^1"), Error);
  CHECK_THROWS_AS(parse_field_spec("2^x:3"), Error);
}

TEST_CASE("field spec strings round-trip") {
  for (const char* s : {"2^1:2:7", "2^1:6:43", "3^1:4:56", "2^2:3:43"}) {
    const FieldTower t = FieldTower::make(parse_field_spec(s));
    CHECK(t.spec_string() == s);
  }
  const FieldSpec spec = parse_field_spec("2^1:3");
  CHECK(spec.p == 2);
  CHECK(spec.h == 3);
  CHECK_FALSE(spec.poly.has_value());
}

TEST_CASE("multiplication agrees with schoolbook arithmetic") {
  for (const char* s : {"2^1:4", "3^1:3", "2^2:2", "5^1:2", "2^1:6"}) {
    const FieldTower t = FieldTower::make(parse_field_spec(s));
    const int n = t.degree();
    for (std::uint32_t a = 0; a < t.order(); ++a)
      for (std::uint32_t b = 0; b < t.order(); ++b) {
        const Poly want = mul_mod(digits(a, t.p(), n), digits(b, t.p(), n), t.defining_poly(), t.p());
        REQUIRE(t.mul(Fe{a}, Fe{b}).code == poly_code(want, t.p()));
      }
  }
}

TEST_CASE("addition, negation, inverses") {
  const FieldTower t = FieldTower::make(3, 1, 3);
  for (std::uint32_t a = 0; a < t.order(); ++a) {
    CHECK(t.add(Fe{a}, t.neg(Fe{a})) == t.zero());
    if (a) CHECK(t.mul(Fe{a}, t.inv(Fe{a})) == t.one());
    // Addition is digit-wise mod p.
    for (std::uint32_t b = 0; b < t.order(); ++b) {
      Poly da = digits(a, 3, 3), db = digits(b, 3, 3);
      for (int i = 0; i < 3; ++i) da[i] = (da[i] + db[i]) % 3;
      REQUIRE(t.add(Fe{a}, Fe{b}).code == poly_code(da, 3));
    }
  }
}

TEST_CASE("generator is primitive") {
  for (const char* s : {"2^1:4", "2^1:6", "3^1:4", "2^2:3"}) {
    const FieldTower t = FieldTower::make(parse_field_spec(s));
    std::set<std::uint32_t> powers;
    Fe x = t.one();
    for (std::uint32_t i = 0; i + 1 < t.order(); ++i) {
      powers.insert(x.code);
      x = t.mul(x, t.generator());
    }
    CHECK(powers.size() == t.order() - 1);
  }
}

TEST_CASE("degree over the ground field") {
  const FieldTower f4 = FieldTower::make(2, 1, 2);
  CHECK(f4.degree_over_q(Fe{2}) == 2);
  const FieldTower f8 = FieldTower::make(2, 1, 3);
  for (std::uint32_t c = 2; c < 8; ++c) CHECK(f8.degree_over_q(Fe{c}) == 3);
  const FieldTower f64 = FieldTower::make(2, 1, 6);
  // Elements with x^4 = x and x^2 != x, found by scanning.
  for (std::uint32_t c = 0; c < 64; ++c) {
    const Fe x{c};
    if (f64.pow(x, 4) == x && f64.pow(x, 2) != x) CHECK(f64.degree_over_q(x) == 2);
    CHECK(6 % f64.degree_over_q(x) == 0);
  }
  CHECK(f64.degree_over_q(f64.subfield_generator(2)) == 2);
  CHECK(f64.degree_over_q(f64.subfield_generator(3)) == 3);
}

TEST_CASE("subfields are the fixed points of Frobenius and are closed") {
  for (const char* s : {"2^1:6", "3^1:2", "2^2:2", "3^1:4"}) {
    const FieldTower t = FieldTower::make(parse_field_spec(s));
    for (int d = 1; d <= t.h(); ++d) {
      if (t.h() % d) continue;
      const auto sub = t.subfield_elements(d);
      const auto want = oracle::subfield(t, d);
      CHECK(sub == want);
      std::set<std::uint32_t> set;
      for (Fe x : sub) set.insert(x.code);
      for (Fe a : sub) {
        if (a.code) CHECK(set.count(t.inv(a).code));
        for (Fe b : sub) {
          CHECK(set.count(t.add(a, b).code));
          CHECK(set.count(t.mul(a, b).code));
        }
      }
    }
  }
  const FieldTower f9 = FieldTower::make(3, 1, 2);
  CHECK(f9.subfield_elements(1) == std::vector<Fe>{Fe{0}, Fe{1}, Fe{2}});
  const FieldTower f64 = FieldTower::make(2, 1, 6);
  CHECK(f64.subfield_elements(1) == std::vector<Fe>{Fe{0}, Fe{1}});
}

TEST_CASE("Frobenius is a field automorphism") {
  for (const char* s : {"2^1:6", "3^1:4", "2^2:3", "2^1:8"}) {
    const FieldTower t = FieldTower::make(parse_field_spec(s));
    for (std::uint32_t a = 0; a < t.order(); ++a)
      for (std::uint32_t b = 0; b < t.order(); ++b) {
        const Fe x{a}, y{b};
        REQUIRE(t.frobenius_q(t.add(x, y)) == t.add(t.frobenius_q(x), t.frobenius_q(y)));
        REQUIRE(t.frobenius_q(t.mul(x, y)) == t.mul(t.frobenius_q(x), t.frobenius_q(y)));
      }
  }
}

TEST_CASE("ground field embedding for q = p^e") {
  const FieldTower t = FieldTower::make(2, 2, 3);
  CHECK(t.q() == 4);
  CHECK(t.order() == 64);
  const auto& gf = t.ground();
  CHECK(gf.size() == 4);
  CHECK(gf.element(0) == t.zero());
  CHECK(gf.element(1) == t.one());
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      CHECK(gf.element(gf.add(a, b)) == t.add(gf.element(a), gf.element(b)));
      CHECK(gf.element(gf.mul(a, b)) == t.mul(gf.element(a), gf.element(b)));
    }
  CHECK(t.degree_over_q(t.q_embedding()) == 1);
  CHECK(t.q_embedding() != t.one());
}

TEST_CASE("F_q coordinates round-trip") {
  for (const char* s : {"2^1:6", "2^2:3", "3^1:4"}) {
    const FieldTower t = FieldTower::make(parse_field_spec(s));
    std::vector<std::uint8_t> c(t.h());
    for (std::uint32_t a = 0; a < t.order(); ++a) {
      t.to_fq_coords(Fe{a}, c);
      REQUIRE(t.from_fq_coords(c) == Fe{a});
    }
    CHECK(t.degree_over_q(t.theta()) == t.h());
  }
}

TEST_CASE("polynomial arithmetic above the table limit") {
  const FieldTower t = FieldTower::make(2, 1, 21);
  CHECK_FALSE(t.has_tables());
  const Fe x{0x12345}, y{0x0abcd};
  CHECK(t.mul(x, t.inv(x)) == t.one());
  CHECK(t.mul(t.mul(x, y), t.inv(y)) == x);
  CHECK(t.pow(x, t.order() - 1) == t.one());
}
