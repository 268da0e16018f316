#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "charsum/chars.hpp"
#include "charsum/ffield.hpp"
#include "charsum/polyrat.hpp"

namespace charsum {

struct KummerFactor {
  MultChar chi;
  Poly f;  // nonzero, over F_{q^d}
};

struct ASFactor {
  AddChar psi;  // twist b
  RatFunc f;    // over F_{q^d}
};

/// Rank-1 character data on an open subset of affine n-space over F_{q^d}:
/// Kummer factors (chi_j, f_j) plus at most one Artin-Schreier factor
/// (psi, f_{k+1}). The excluded locus E = 0 cuts out the base scheme; the
/// default E multiplies all sigma-conjugates of the f_j and of the
/// denominator of f_{k+1}, which makes it sigma-stable (defined over F_q).
class SheafSpec {
 public:
  SheafSpec(uint32_t p, uint32_t q_exp, uint32_t d, uint32_t n);

  uint32_t p() const { return p_; }
  uint32_t q() const { return q_; }
  uint32_t q_exp() const { return q_exp_; }
  uint32_t d() const { return d_; }
  uint32_t n() const { return n_; }
  const FieldPtr& base_field() const { return base_; }  // F_q
  const FieldPtr& ext_field() const { return ext_; }    // F_{q^d}
  uint32_t cyc_order() const { return cyc_order_for(ext_); }

  void add_kummer(uint32_t k_idx, Poly f);
  void set_as(const Element& b, RatFunc f);
  void set_exclusion(Poly e);

  const std::vector<KummerFactor>& kummer() const { return kummer_; }
  const std::optional<ASFactor>& as_factor() const { return as_; }
  bool has_as() const { return as_.has_value(); }

  /// Excluded locus: the explicit override, or the default conjugate
  /// closure of all factor divisors.
  Poly exclusion() const;
  bool exclusion_is_default() const { return !exclude_.has_value(); }
  bool exclusion_sigma_stable() const;

  static SheafSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  /// Stable text form used for hashing and report rows.
  std::string canonical_text() const;

 private:
  uint32_t p_, q_exp_, q_, d_, n_;
  FieldPtr base_, ext_;
  std::vector<KummerFactor> kummer_;
  std::optional<ASFactor> as_;
  std::optional<Poly> exclude_;
};

/// The pullback of the transferred data back to X_1, factor by factor:
/// each Kummer factor carries both the conjugate list (chi^{q^i},
/// sigma^{-i} f) and the norm-product form; the AS factor carries its
/// conjugate list and the trace-rational form (with the twist folded in,
/// evaluated with the plain character psi_1).
struct PullbackSpec {
  struct KummerPull {
    std::vector<std::pair<MultChar, Poly>> conjugates;
    MultChar norm_chi;
    Poly norm_form;
  };
  struct ASPull {
    std::vector<std::pair<AddChar, RatFunc>> conjugates;
    AddChar trace_psi;   // psi_1 on F_{q^d}
    RatFunc trace_form;  // Tr_{F_{q^d}/F_q}(b * f)
  };

  uint32_t p = 0, q = 0, d = 0, n = 0;
  std::vector<KummerPull> kummer;
  std::optional<ASPull> as_part;
  Poly exclusion;

  /// The norm/trace forms as sheaf data in their own right on X_1
  /// (base field F_{q^d}, trivial extension), same excluded locus.
  SheafSpec as_sheaf_spec() const;
};

PullbackSpec transfer_pullback(const SheafSpec& s);

struct Hyp44 {
  bool applicable = false;     // the f_j are pairwise coprime
  bool holds = false;          // combined divisor test: genuinely sufficient
  bool holds_literal = false;  // some norm product is not an ord(chi_j)-th power
  std::optional<size_t> witness;
};

struct Hyp45 {
  bool holds = false;  // AS reduction of the trace form is nontrivial
};

/// Kummer-bound hypothesis: univariate, no AS factor.
Hyp44 check_hypothesis_44(const SheafSpec& s);
/// Mixed-bound hypothesis: univariate, AS factor required.
Hyp45 check_hypothesis_45(const SheafSpec& s);

struct SwanRow {
  bool at_infinity = false;
  Poly locus;              // monic irreducible over F_{q^d} (finite rows)
  uint32_t orbit_degree = 1;
  bool sigma_fixed = false;
  uint32_t swan_exact = 0;  // of the spec's own data
  uint32_t swan_tran = 0;   // of the transferred data
  uint32_t pole_bound = 0; // -v_x(f_{k+1}), 0 when not a pole
  bool tame = true;
};

struct SwanTable {
  std::vector<SwanRow> rows;
  int64_t missing_points = 0;   // geometric count: 1 + deg rad(E)
  int64_t total_exact = 0;      // sum over geometric points of swan_exact
  int64_t total_tran = 0;
  int64_t total_bound = 0;
  int64_t total_exact_fixed = 0;     // sigma-fixed part of total_exact
  int64_t total_exact_nonfixed = 0;
};

SwanTable swan_table(const SheafSpec& s, uint64_t seed = 0);

/// dim H^1_c = (2g - 2 + missing) + swan_sum; throws when negative.
int64_t gos_betti(int64_t genus, int64_t missing, int64_t swan_sum);

struct BoundValue {
  bool applicable = false;
  int64_t coeff = 0;
  uint64_t sqrt_arg = 0;
  double value() const;
};

struct BoundReport {
  uint32_t genus = 0;
  int64_t missing_points = 0;
  std::vector<int64_t> radical_degrees;
  int64_t D1 = 0, D2 = 0, D3 = 0, D4 = 0;
  bool as_present = false;
  Hyp44 hyp_kummer;
  Hyp45 hyp_as;
  bool exclusion_sigma_stable = false;
  SwanTable swan;
  BoundValue complete_bound;  // coeff * sqrt(q^d): complete sums on X_1
  BoundValue transfer_bound;  // coeff * sqrt(q): generic transfer estimate
  BoundValue refined_bound;   // sigma-fixed points counted once
  BoundValue kummer_bound;    // (d * sum d_j - 1) sqrt(q)
  BoundValue mixed_bound;     // (d(D1+D3+D4) + D2 - 1) sqrt(q)
  int64_t gos_betti_self = 0;
  int64_t gos_betti_tran = 0;

  /// Tightest bound asserted by the hypothesis that holds, if any.
  std::optional<BoundValue> headline() const;
  nlohmann::json to_json() const;
};

BoundReport bound_report(const SheafSpec& s, uint64_t seed = 0);

}  // namespace charsum
