#pragma once

// Exact arithmetic in a tower F_p <= F_q <= F_{q^h}, q = p^e.
//
// There is a single arithmetic core: the top field F_{p^{eh}} = F_p[x]/(f).
// F_q lives inside it as the fixed field of x -> x^q. Elements are encoded as
// integers  sum_i c_i p^i  over the coefficients of the power basis of x.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace linset {

struct Fe {
  std::uint32_t code = 0;

  friend constexpr auto operator<=>(Fe, Fe) = default;
};

class FieldTower;

// Arithmetic on F_q through small index tables. Index i refers to the i-th
// element of the embedded copy of F_q in increasing code order, so index 0 is
// zero and index 1 is one.
class GroundField {
 public:
  GroundField() = default;
  explicit GroundField(const FieldTower& tower);

  int size() const noexcept { return q_; }
  std::uint8_t add(std::uint8_t a, std::uint8_t b) const { return add_[a * q_ + b]; }
  std::uint8_t sub(std::uint8_t a, std::uint8_t b) const { return add_[a * q_ + neg_[b]]; }
  std::uint8_t mul(std::uint8_t a, std::uint8_t b) const { return mul_[a * q_ + b]; }
  std::uint8_t neg(std::uint8_t a) const { return neg_[a]; }
  std::uint8_t inv(std::uint8_t a) const { return inv_[a]; }

  Fe element(std::uint8_t index) const { return elems_[index]; }
  const std::vector<Fe>& elements() const noexcept { return elems_; }
  // Index of an element of the embedded F_q; -1 when x is not in F_q.
  int index_of(Fe x) const;

 private:
  int q_ = 0;
  std::vector<Fe> elems_;
  std::vector<std::uint8_t> add_, mul_, neg_, inv_;
};

struct FieldSpec {
  int p = 0;
  int e = 1;
  int h = 1;
  std::optional<std::vector<int>> poly;  // monic, low degree first
};

// "p^e:h[:poly-hex]"; the polynomial is the hex form of its integer encoding
// sum_i c_i p^i, leading term included (x^2+x+1 over F_2 is "7").
FieldSpec parse_field_spec(std::string_view text);

class FieldTower {
 public:
  static constexpr std::uint32_t kMaxOrder = 1u << 24;
  static constexpr std::uint32_t kMaxTableOrder = 1u << 20;

  static FieldTower make(int p, int e, int h, std::optional<std::vector<int>> poly = std::nullopt);
  static FieldTower make(const FieldSpec& spec) { return make(spec.p, spec.e, spec.h, spec.poly); }

  int p() const noexcept { return p_; }
  int e() const noexcept { return e_; }
  int h() const noexcept { return h_; }
  int degree() const noexcept { return n_; }
  std::uint32_t q() const noexcept { return q_; }
  std::uint32_t order() const noexcept { return order_; }
  const std::vector<int>& defining_poly() const noexcept { return poly_; }
  std::string spec_string() const;

  Fe zero() const noexcept { return Fe{0}; }
  Fe one() const noexcept { return Fe{1}; }
  // Primitive element of the top field; the first in code order.
  Fe generator() const noexcept { return generator_; }
  // Generator of the embedded copy of F_q.
  Fe q_embedding() const noexcept { return q_embedding_; }
  // Degree-h element over F_q whose powers 1, theta, ..., theta^{h-1} form the
  // fixed F_q-basis used for flattening. It is the class of x.
  Fe theta() const noexcept { return theta_; }

  Fe add(Fe a, Fe b) const;
  Fe sub(Fe a, Fe b) const { return add(a, neg(b)); }
  Fe neg(Fe a) const;
  Fe mul(Fe a, Fe b) const;
  Fe inv(Fe a) const;
  Fe div(Fe a, Fe b) const { return mul(a, inv(b)); }
  Fe pow(Fe a, std::uint64_t k) const;
  Fe frobenius_q(Fe a) const { return pow(a, q_); }

  bool has_tables() const noexcept { return !exp_.empty(); }
  // Discrete log w.r.t. generator(); a must be nonzero. Table mode only.
  std::uint32_t log(Fe a) const { return log_[a.code]; }
  Fe exp(std::uint32_t k) const { return Fe{exp_[k]}; }

  std::vector<int> coeffs(Fe a) const;
  Fe from_coeffs(std::span<const int> c) const;

  // Least s >= 1 with a^{q^s} = a, i.e. [F_q(a):F_q].
  int degree_over_q(Fe a) const;
  bool in_ground_field(Fe a) const { return ground_.index_of(a) >= 0; }
  // The q^s solutions of x^{q^s} = x, in increasing code order.
  std::vector<Fe> subfield_elements(int s) const;
  // Primitive element of the subfield F_{q^s}.
  Fe subfield_generator(int s) const;

  const GroundField& ground() const noexcept { return ground_; }

  // Coordinates over F_q (as GroundField indices) w.r.t. 1, theta, ..., theta^{h-1}.
  void to_fq_coords(Fe a, std::span<std::uint8_t> out) const;
  Fe from_fq_coords(std::span<const std::uint8_t> c) const;

 private:
  FieldTower() = default;

  Fe mul_poly(Fe a, Fe b) const;
  Fe add_digits(Fe a, Fe b) const;
  void build_tables();
  void find_generator();
  void build_flattening();

  int p_ = 0, e_ = 1, h_ = 1, n_ = 1;
  std::uint32_t q_ = 0, order_ = 0;
  std::vector<int> poly_;
  std::vector<std::uint32_t> ppow_;
  Fe generator_{}, q_embedding_{}, theta_{};
  std::vector<std::uint32_t> exp_, log_;
  std::vector<std::int32_t> zech_;
  GroundField ground_;

  // e > 1: F_p coordinates -> F_q coordinates through an inverted basis matrix.
  std::vector<int> flat_inverse_;            // n x n over F_p
  std::vector<std::uint8_t> combo_to_index_;  // sum_a c_a p^a -> F_q index
  std::vector<Fe> basis_multiples_;          // [j * q + idx] = elem(idx) * theta^j
};

}  // namespace linset
