#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "charsum/sheaf.hpp"

namespace charsum {

/// Budget for a single exhaustive enumeration (number of points times
/// variables); operations throw when an enumeration would exceed it.
uint64_t eval_budget();
void set_eval_budget(uint64_t budget);

struct SumResult {
  CycValue exact;                    // canonical form
  std::complex<double> value{0, 0};  // complex evaluation of `exact`
  double abs_value = 0;
  double abs_error = 0;  // certified evaluation error
  uint64_t points = 0;   // size of the summation domain
  // first few summands for debugging: (point code, zeta exponent), -1 = 0
  std::vector<std::pair<uint64_t, int64_t>> summand_log;
};

/// S' = sum over a in F_q^n with E(a) != 0 (and f_{k+1} defined) of
/// prod_j chi_j(f_j(a)) * psi(f_{k+1}(a)), through the fixed embedding
/// F_q into F_{q^d}.
SumResult incomplete_sum(const SheafSpec& s);

/// S_m over X_1(F_{q^{dm}}): the summand at y is
/// prod_j chi_j(N(f_j(y))) * psi(Tr(f_{k+1}(y))) with norm and trace taken
/// from F_{q^{dm}} down to F_{q^d}.
SumResult complete_sum(const SheafSpec& s, uint32_t m);

struct IdentityReport {
  uint64_t points_checked = 0;
  uint64_t violations = 0;
  std::vector<std::string> details;  // first few violations
  bool ok() const { return violations == 0; }
};

/// At every valid a in F_q^n checks, with exact equality of roots of unity:
/// conjugate-list summand == norm/trace-form summand == (incomplete
/// summand)^d. This is the trace compatibility that makes the incomplete
/// sum equal the complete sum of the transferred data.
IdentityReport verify_transfer_identity(const SheafSpec& s);

/// At every point of X_1(F_{q^{dm}}) checks that the conjugate-list
/// summand of the pullback equals the norm-product / trace-form summand.
IdentityReport verify_pullback_forms(const SheafSpec& s, uint32_t m = 1);

enum class Triviality { NONTRIVIAL, TRIVIAL_EVIDENCE };

/// Numeric one-directional witness: NONTRIVIAL when some complete sum at
/// level m <= m_max shows genuine cancellation (|S_m| < #domain - 1/2).
Triviality triviality_oracle(const SheafSpec& s, uint32_t m_max);
Triviality triviality_oracle(const PullbackSpec& s, uint32_t m_max);

struct LPolyFit {
  int64_t betti = 0;
  std::vector<CycValue> coeffs;  // P(t) coefficients c_0..c_B, c_0 = 1
  std::vector<CycValue> power_sums;
  std::vector<std::complex<double>> inverse_roots;
  std::vector<double> root_errors;
  bool bounded = false;  // all |alpha| <= sqrt(q^d) + tol
  bool pure = false;     // all |alpha| within tol of sqrt(q^d)
  double max_root_abs = 0;
  double tol = 1e-6;
};

/// Recovers P(t) = det(1 - F t) of degree B from the complete sums
/// S_1..S_B via Newton's identities (power sums p_m = -S_m), then verifies
/// the predictions at m = B+1, B+2 exactly; throws if they fail (wrong B).
LPolyFit lpoly_fit(const SheafSpec& s, int64_t B);

/// Roots of a monic polynomial with complex coefficients (ascending,
/// coeffs.back() == 1), with a-posteriori error estimates.
std::vector<std::complex<double>> complex_roots(const std::vector<std::complex<long double>>& coeffs,
                                                std::vector<double>* errors);

}  // namespace charsum
