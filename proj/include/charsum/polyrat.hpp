#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "charsum/ffield.hpp"

namespace charsum {

/// Sparse polynomial in n >= 1 variables over a finite field. Terms map
/// exponent tuples to nonzero coefficients; iteration order (lexicographic
/// on the tuple) is deterministic and part of the output contract.
class Poly {
 public:
  using Exponents = std::vector<uint32_t>;

  Poly() : field_(nullptr), nvars_(1) {}
  Poly(FieldPtr field, uint32_t nvars);

  static Poly constant(const FieldPtr& field, uint32_t nvars, const Element& c);
  static Poly variable(const FieldPtr& field, uint32_t nvars, uint32_t var, uint32_t exp = 1);

  const FieldPtr& field() const { return field_; }
  uint32_t nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  size_t term_count() const { return terms_.size(); }
  const std::map<Exponents, uint32_t>& terms() const { return terms_; }

  void set_term(const Exponents& e, uint32_t coeff_idx);
  void add_term(const Exponents& e, uint32_t coeff_idx);

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator-() const;
  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }

  Poly scaled(const Element& c) const;
  Poly pow(uint32_t e) const;

  /// Max total degree (-1 for the zero polynomial).
  int64_t total_degree() const;
  /// Univariate degree (-1 for zero). Requires nvars == 1.
  int64_t degree() const;

  Element eval(std::span<const Element> point) const;
  Element eval1(const Element& x) const;

  /// Leading coefficient / monic normalization (univariate).
  Element leading_coeff() const;
  Poly monic() const;
  Poly derivative() const;  // univariate, d/dt
  uint32_t coeff_idx1(uint32_t power) const;
  /// Dense univariate coefficient indexes, low to high.
  std::vector<uint32_t> dense1() const;
  static Poly from_dense1(const FieldPtr& field, const std::vector<uint32_t>& coeffs);

  /// Substitutes t_i -> t_i^m in every variable.
  Poly subst_power(uint32_t m) const;
  /// Applies c -> c^{p^e} to every coefficient.
  Poly coeff_frobenius(uint32_t e) const;

  std::string str() const;

 private:
  FieldPtr field_;
  uint32_t nvars_;
  std::map<Exponents, uint32_t> terms_;
};

/// Univariate division with remainder; divisor must be nonzero.
std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b);
/// Monic univariate gcd.
Poly poly_gcd(Poly a, Poly b);
/// Deterministic order on univariate polynomials: by degree, then by the
/// coefficient tuple from the top power down (element enumeration order).
bool poly_order_less(const Poly& a, const Poly& b);

/// Rational function; the univariate canonical form has coprime numerator
/// and denominator with monic denominator, enforced at construction.
class RatFunc {
 public:
  RatFunc() = default;
  RatFunc(Poly num, Poly den);
  static RatFunc from_poly(Poly p);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  const FieldPtr& field() const { return num_.field(); }
  uint32_t nvars() const { return num_.nvars(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_poly() const;

  RatFunc operator+(const RatFunc& o) const;
  RatFunc scaled(const Element& c) const;
  bool operator==(const RatFunc& o) const;

  /// deg num - deg den (univariate).
  int64_t degree() const;

  /// nullopt at poles of the reduced form.
  std::optional<Element> eval1(const Element& x) const;

  std::string str() const;

 private:
  Poly num_, den_;
};

/// Squarefree decomposition f = unit * prod parts[i]^mult[i] with monic,
/// squarefree, pairwise coprime parts (p-th powers peeled recursively).
struct SqfDecomp {
  Element unit;
  std::vector<std::pair<Poly, uint32_t>> parts;

  Poly radical() const;
  int64_t radical_degree() const;
};

struct Factorization {
  Element unit;
  std::vector<std::pair<Poly, uint32_t>> factors;  // monic irreducible, sorted
};

/// Per-pole data of a univariate rational function after Artin-Schreier
/// reduction: terms a*u^{-mp} are replaced by a^{1/p}*u^{-m} until every
/// surviving pole order is prime to p. Reduced orders are the exact Swan
/// conductors of the associated sheaf data.
struct ASOrbitData {
  Poly locus;             // monic irreducible factor of the denominator
  uint32_t orbit_degree;  // degree of the locus
  uint32_t pole_order;    // -v_x of the canonical form
  uint32_t reduced_order;
};

struct ASLocalData {
  std::vector<ASOrbitData> finite;
  uint32_t infty_pole_order = 0;    // max(deg f, 0)
  uint32_t infty_reduced_order = 0;
  bool trivial = false;

  /// (locus text, reduced order) rows with reduced order > 0, plus the
  /// infinity row; invariant under adding r^p - r.
  std::vector<std::pair<std::string, uint32_t>> reduced_signature() const;
};

/// sigma^i acting coefficient-wise, sigma the q-power Frobenius of F_{q^d};
/// negative i is taken mod d. Variables are untouched.
Poly sigma_act(const Poly& f, int64_t i, uint32_t q, uint32_t d);
RatFunc sigma_act(const RatFunc& f, int64_t i, uint32_t q, uint32_t d);

/// prod_{i=0}^{d-1} f(t_1^{q^i}, ..., t_n^{q^i}).
Poly norm_product(const Poly& f, uint32_t q, uint32_t d);

/// sum_{i=0}^{d-1} sigma^i(f) as a single rational function with
/// coefficients in F_q (asserted).
RatFunc trace_rational(const RatFunc& f, uint32_t q, uint32_t d);

SqfDecomp squarefree_decomp(const Poly& f);

/// Cantor-Zassenhaus factorization with a fixed seeded pseudorandom
/// stream; output sorted by (degree, enumeration order).
Factorization factorize(const Poly& f, uint64_t seed = 0);

/// True iff f = h^e over the algebraic closure, i.e. every multiplicity in
/// the squarefree decomposition is divisible by e.
bool perfect_power_test(const Poly& f, uint32_t e);

ASLocalData as_reduce(const RatFunc& f, uint64_t seed = 0);

/// Polynomial text: terms `coef*t^e` (or t1..tn) joined by `+`/`-`,
/// coefficients in the `g` notation of the field, parentheses allowed.
Poly parse_poly(const FieldPtr& field, uint32_t nvars, const std::string& text);

}  // namespace charsum
