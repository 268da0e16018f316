#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "charsum/ffield.hpp"

namespace charsum {

/// Exact element of the cyclotomic integer ring Z[zeta_N], stored as an
/// integer coefficient vector on the exponent basis zeta^0..zeta^{N-1}
/// (i.e. in Z[x]/(x^N - 1)). The canonical form is the representative
/// reduced modulo the N-th cyclotomic polynomial; equality of values is
/// equality of canonical forms.
class CycValue {
 public:
  CycValue() : order_(1), c_(1, 0) {}
  explicit CycValue(uint32_t order) : order_(order), c_(order, 0) {}

  static CycValue zero(uint32_t order) { return CycValue(order); }
  static CycValue integer(uint32_t order, int64_t v);
  static CycValue root(uint32_t order, uint32_t exponent, int64_t mult = 1);

  uint32_t order() const { return order_; }
  const std::vector<int64_t>& raw_coeffs() const { return c_; }

  /// Accumulates mult * zeta^exponent (hot path of the sum kernels).
  void add_root(uint32_t exponent, int64_t mult = 1) { c_[exponent % order_] += mult; }

  CycValue operator+(const CycValue& o) const;
  CycValue operator-(const CycValue& o) const;
  CycValue operator*(const CycValue& o) const;
  CycValue operator-() const;
  CycValue& operator+=(const CycValue& o);
  bool operator==(const CycValue& o) const;
  bool operator!=(const CycValue& o) const { return !(*this == o); }

  /// zeta -> zeta^{-1} (complex conjugation).
  CycValue conj() const;

  /// Representative reduced modulo Phi_N; idempotent.
  CycValue canonical() const;
  bool is_zero() const;
  /// If the canonical form is a rational integer, returns it.
  std::optional<int64_t> as_integer() const;

  /// Exact division of the canonical form by a nonzero integer; throws if
  /// any coefficient is not divisible.
  CycValue divide_exact(int64_t k) const;

  std::complex<long double> eval() const;
  /// |eval()| together with the certified absolute error of the evaluation,
  /// bounded by (sum |c_r|) * eps * N.
  long double abs() const;
  long double abs_error() const;

  /// Sorted `exponent:coefficient` pairs of the canonical form.
  std::string str() const;

 private:
  uint32_t order_;
  std::vector<int64_t> c_;
};

/// Coefficients of the N-th cyclotomic polynomial, computed by dividing
/// x^N - 1 by all Phi_d for proper divisors d; cached per N.
const std::vector<int64_t>& cyclotomic_polynomial(uint32_t n);

/// Cyclotomic order used for all character values on F_{q^d}:
/// N = p * (q^d - 1), with the degenerate q^d = 2 case mapping to N = 2.
uint32_t cyc_order_for(const FieldPtr& field);

/// Multiplicative character of F_{q^d}^*: chi(gen^j) = zeta_{q^d-1}^{k_idx*j}
/// on the field's canonical multiplicative generator, extended by chi(0) = 0.
class MultChar {
 public:
  MultChar(FieldPtr field, uint32_t k_idx);

  const FieldPtr& field() const { return field_; }
  uint32_t k_idx() const { return k_idx_; }
  bool is_trivial() const { return k_idx_ == 0; }
  /// Smallest m >= 1 with chi^m = 1.
  uint32_t order() const;
  /// chi^e as a character (exponent composed into k_idx).
  MultChar power(uint64_t e) const;
  MultChar conjugate() const;

  CycValue eval(const Element& x) const;
  /// Exponent of zeta_N at a nonzero index; nullopt encodes the value 0.
  std::optional<uint32_t> value_exponent_idx(uint32_t idx) const;

 private:
  FieldPtr field_;
  uint32_t k_idx_;
  uint32_t cyc_n_;
};

/// Additive character psi_b(x) = zeta_p^{lift(Tr_{F_{q^d}/F_p}(b*x))}.
class AddChar {
 public:
  AddChar(FieldPtr field, Element b);

  const FieldPtr& field() const { return field_; }
  const Element& twist() const { return b_; }
  bool is_trivial() const { return b_.is_zero(); }

  CycValue eval(const Element& x) const;
  std::optional<uint32_t> value_exponent_idx(uint32_t idx) const;
  /// Composition with sigma^i: psi(x^{q^i}) as another AddChar (the twist
  /// becomes sigma^{-i}(b) for sigma the q-power Frobenius).
  AddChar compose_frobenius(uint32_t q_exp_times_i) const;

 private:
  FieldPtr field_;
  Element b_;
  uint32_t cyc_n_;
  std::vector<uint32_t> trace_lift_;  // index -> lift(Tr_abs(b*x)) in [0, p)
};

}  // namespace charsum
