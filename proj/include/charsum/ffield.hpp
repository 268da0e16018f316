#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace charsum {

/// Library-wide error type; the CLI maps it to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// Element of a finite field, stored as an index into the field's
/// enumeration order. Index digits in base p are the coefficients of the
/// residue class of t (written `g`): idx = sum c_i p^i with c_i the
/// coefficient of g^i. Increasing index is lexicographic order on the
/// tuple (c_{k-1}, ..., c_0).
class Element {
 public:
  Element() : field_(nullptr), idx_(0) {}
  Element(const Field* f, uint32_t idx) : field_(f), idx_(idx) {}

  uint32_t index() const { return idx_; }
  const Field& field() const;
  const Field* field_ptr() const { return field_; }
  bool is_zero() const { return idx_ == 0; }

  Element operator+(const Element& o) const;
  Element operator-(const Element& o) const;
  Element operator*(const Element& o) const;
  Element operator/(const Element& o) const;
  Element operator-() const;
  bool operator==(const Element& o) const { return field_ == o.field_ && idx_ == o.idx_; }
  bool operator!=(const Element& o) const { return !(*this == o); }

  Element pow(uint64_t e) const;
  Element inverse() const;
  /// x -> x^{p^e}: absolute Frobenius iterated e times.
  Element frobenius(uint32_t e = 1) const;
  /// Unique p-th root, computed as x^{p^{k-1}}.
  Element pth_root() const;

  std::vector<uint32_t> coeffs() const;
  std::string str() const;

 private:
  const Field* field_;
  uint32_t idx_;
};

/// A finite field F_{p^k} with the deterministic modulus: the
/// lexicographically smallest monic irreducible polynomial of degree k
/// over F_p, ordered by the coefficient tuple (a_{k-1}, ..., a_0).
/// Instances are unique per (p, k) and owned by a process-wide registry,
/// so pointer equality is field equality.
class Field : public std::enable_shared_from_this<Field> {
 public:
  /// Registry-backed factory. Throws on non-prime p or cardinality above
  /// the configured cap.
  static FieldPtr get(uint32_t p, uint32_t k);

  uint32_t characteristic() const { return p_; }
  uint32_t degree() const { return k_; }
  uint32_t size() const { return q_; }

  /// Modulus coefficients a_0..a_k (monic, a_k = 1). Empty for k = 1.
  const std::vector<uint32_t>& modulus() const { return modulus_; }

  Element zero() const { return Element(this, 0); }
  Element one() const { return Element(this, 1); }
  Element from_index(uint32_t idx) const;
  Element from_coeffs(const std::vector<uint32_t>& c) const;
  /// Residue class of t, i.e. the symbol `g` (requires k > 1).
  Element gen() const;
  /// Deterministic multiplicative generator: first element in enumeration
  /// order whose order is q - 1 (verified via the factorization of q - 1).
  Element mult_generator() const { return Element(this, mult_gen_); }

  // Index-level arithmetic (hot path for the sum kernels).
  uint32_t add_idx(uint32_t a, uint32_t b) const;
  uint32_t sub_idx(uint32_t a, uint32_t b) const;
  uint32_t neg_idx(uint32_t a) const;
  uint32_t mul_idx(uint32_t a, uint32_t b) const;
  uint32_t inv_idx(uint32_t a) const;
  uint32_t pow_idx(uint32_t a, uint64_t e) const;
  uint32_t frobenius_idx(uint32_t a, uint32_t e) const;
  uint32_t pth_root_idx(uint32_t a) const;
  /// Discrete log with respect to mult_generator(); a must be nonzero.
  uint32_t dlog_idx(uint32_t a) const;

  /// Scalar (prime subfield) multiple c*x with c in [0, p).
  uint32_t scalar_mul_idx(uint32_t c, uint32_t a) const;

  std::string element_str(uint32_t idx) const;

 private:
  Field(uint32_t p, uint32_t k);

  uint32_t p_, k_, q_;
  std::vector<uint32_t> modulus_;  // a_0..a_k when k > 1
  uint32_t mult_gen_ = 1;
  std::vector<uint32_t> exp_;  // exp_[j] = mult_gen^j, j in [0, q-1)
  std::vector<uint32_t> log_;  // inverse of exp_; log_[0] is a sentinel

  uint32_t mul_idx_slow(uint32_t a, uint32_t b) const;
};

/// Configurable cardinality cap for field construction (default 2^20).
uint64_t field_cap();
void set_field_cap(uint64_t cap);

/// Deterministic embedding of one field into another: the generator of the
/// subfield maps to the first root of its modulus in the enumeration order
/// of the target. Cached per (sub, sup).
class Embedding {
 public:
  static const Embedding& get(const FieldPtr& sub, const FieldPtr& sup);

  const FieldPtr& sub() const { return sub_; }
  const FieldPtr& sup() const { return sup_; }
  Element generator_image() const;

  Element apply(const Element& x) const;
  uint32_t apply_idx(uint32_t idx) const { return fwd_[idx]; }
  /// Partial inverse: defined exactly on the image.
  std::optional<Element> section(const Element& y) const;
  std::optional<uint32_t> section_idx(uint32_t idx) const;

 private:
  Embedding(FieldPtr sub, FieldPtr sup);
  FieldPtr sub_, sup_;
  uint32_t gen_image_;
  std::vector<uint32_t> fwd_;
  std::vector<uint32_t> rev_;  // sup index -> sub index + 1, 0 if not in image
};

/// Relative trace and norm of x over the subfield `sub` of x's field:
/// trace = sum x^{q^i}, norm = prod x^{q^i} for i < [sup:sub], both pulled
/// back to `sub` through the fixed embedding.
std::pair<Element, Element> rel_trace_norm(const Element& x, const FieldPtr& sub);

/// Baby-step giant-step discrete logarithm: returns j with base^j = x.
/// `base` must be a verified generator of the multiplicative group.
uint64_t dlog_bsgs(const Element& x, const Element& base);

bool is_prime_u64(uint64_t n);
std::vector<uint64_t> prime_factors_u64(uint64_t n);

/// Parses `p^k` (or plain `p`) into a field.
FieldPtr parse_field_descriptor(const std::string& s);
/// Parses element text: integer polynomials in `g`, e.g. `g^2+g+1`.
Element parse_element(const FieldPtr& f, const std::string& s);

}  // namespace charsum
