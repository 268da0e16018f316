#include "charsum/sheaf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace charsum {

// --- SheafSpec ---

SheafSpec::SheafSpec(uint32_t p, uint32_t q_exp, uint32_t d, uint32_t n)
    : p_(p), q_exp_(q_exp), d_(d), n_(n) {
  if (q_exp_ < 1 || d_ < 1 || n_ < 1) throw Error("spec needs q_exp, d, n >= 1");
  base_ = Field::get(p_, q_exp_);
  ext_ = Field::get(p_, q_exp_ * d_);
  uint64_t q = 1;
  for (uint32_t i = 0; i < q_exp_; ++i) q *= p_;
  q_ = uint32_t(q);
}

void SheafSpec::add_kummer(uint32_t k_idx, Poly f) {
  if (f.field().get() != ext_.get()) throw Error("kummer polynomial must live over F_{q^d}");
  if (f.nvars() != n_) throw Error("kummer polynomial arity mismatch");
  if (f.is_zero()) throw Error("kummer polynomial must be nonzero");
  kummer_.push_back(KummerFactor{MultChar(ext_, k_idx), std::move(f)});
}

void SheafSpec::set_as(const Element& b, RatFunc f) {
  if (f.field().get() != ext_.get()) throw Error("AS function must live over F_{q^d}");
  if (f.nvars() != n_) throw Error("AS function arity mismatch");
  as_ = ASFactor{AddChar(ext_, b), std::move(f)};
}

void SheafSpec::set_exclusion(Poly e) {
  if (e.field().get() != ext_.get()) throw Error("exclusion polynomial must live over F_{q^d}");
  if (e.nvars() != n_) throw Error("exclusion polynomial arity mismatch");
  if (e.is_zero()) throw Error("exclusion polynomial must be nonzero");
  exclude_ = std::move(e);
}

Poly SheafSpec::exclusion() const {
  if (exclude_) return *exclude_;
  Poly prod = Poly::constant(ext_, n_, ext_->one());
  for (const auto& kf : kummer_) prod = prod * kf.f;
  if (as_) prod = prod * as_->f.den();
  Poly e = Poly::constant(ext_, n_, ext_->one());
  for (uint32_t i = 0; i < d_; ++i) e = e * sigma_act(prod, -int64_t(i), q_, d_);
  return e;
}

bool SheafSpec::exclusion_sigma_stable() const {
  Poly e = exclusion();
  for (const auto& [ex, c] : e.terms()) {
    (void)ex;
    if (ext_->frobenius_idx(c, q_exp_) != c) return false;
  }
  return true;
}

SheafSpec SheafSpec::from_json(const nlohmann::json& j) {
  if (!j.contains("p") || !j.contains("q_exp") || !j.contains("d"))
    throw Error("spec JSON needs p, q_exp, d");
  uint32_t p = j.at("p").get<uint32_t>();
  uint32_t q_exp = j.at("q_exp").get<uint32_t>();
  uint32_t d = j.at("d").get<uint32_t>();
  uint32_t n = j.value("n", 1u);
  SheafSpec s(p, q_exp, d, n);
  if (j.contains("kummer"))
    for (const auto& kj : j.at("kummer")) {
      // both {"k_idx": 1, ...} and the descriptor form {"mult": {"k_idx": 1}, ...}
      uint32_t k_idx = kj.contains("mult") ? kj.at("mult").at("k_idx").get<uint32_t>()
                                           : kj.at("k_idx").get<uint32_t>();
      s.add_kummer(k_idx, parse_poly(s.ext_field(), n, kj.at("poly").get<std::string>()));
    }
  if (j.contains("as") && !j.at("as").is_null()) {
    const auto& aj = j.at("as");
    std::string b_text =
        aj.contains("add") ? aj.at("add").at("b").get<std::string>() : aj.at("b").get<std::string>();
    Element b = parse_element(s.ext_field(), b_text);
    Poly num = parse_poly(s.ext_field(), n, aj.at("num").get<std::string>());
    Poly den = parse_poly(s.ext_field(), n, aj.value("den", std::string("1")));
    s.set_as(b, RatFunc(std::move(num), std::move(den)));
  }
  if (j.contains("exclude") && !j.at("exclude").is_null())
    s.set_exclusion(parse_poly(s.ext_field(), n, j.at("exclude").get<std::string>()));
  return s;
}

nlohmann::json SheafSpec::to_json() const {
  nlohmann::json j;
  j["p"] = p_;
  j["q_exp"] = q_exp_;
  j["d"] = d_;
  j["n"] = n_;
  nlohmann::json ks = nlohmann::json::array();
  for (const auto& kf : kummer_) ks.push_back({{"k_idx", kf.chi.k_idx()}, {"poly", kf.f.str()}});
  j["kummer"] = ks;
  if (as_)
    j["as"] = {{"b", as_->psi.twist().str()}, {"num", as_->f.num().str()}, {"den", as_->f.den().str()}};
  else
    j["as"] = nullptr;
  if (exclude_)
    j["exclude"] = exclude_->str();
  else
    j["exclude"] = nullptr;
  return j;
}

std::string SheafSpec::canonical_text() const { return to_json().dump(); }

// --- pullback ---

PullbackSpec transfer_pullback(const SheafSpec& s) {
  PullbackSpec out;
  out.p = s.p();
  out.q = s.q();
  out.d = s.d();
  out.n = s.n();
  out.exclusion = s.exclusion();
  const uint32_t d = s.d();
  const uint32_t q = s.q();

  for (const auto& kf : s.kummer()) {
    PullbackSpec::KummerPull kp{{}, kf.chi, norm_product(kf.f, q, d)};
    uint64_t qi = 1;
    for (uint32_t i = 0; i < d; ++i) {
      kp.conjugates.emplace_back(kf.chi.power(qi), sigma_act(kf.f, -int64_t(i), q, d));
      qi *= q;
    }
    out.kummer.push_back(std::move(kp));
  }

  if (s.has_as()) {
    const auto& af = *s.as_factor();
    const FieldPtr& ext = s.ext_field();
    RatFunc twisted = af.f.scaled(af.psi.twist());
    PullbackSpec::ASPull ap{{}, AddChar(ext, ext->one()), trace_rational(twisted, q, d)};
    for (uint32_t i = 0; i < d; ++i) {
      // psi o sigma^i has twist sigma^{-i}(b) = b^{q^{d-i}}.
      Element bi = af.psi.twist().frobenius(s.q_exp() * (d - i));
      ap.conjugates.emplace_back(AddChar(ext, bi), sigma_act(af.f, -int64_t(i), q, d));
    }
    out.as_part = std::move(ap);
  }
  return out;
}

SheafSpec PullbackSpec::as_sheaf_spec() const {
  SheafSpec t(p, [&] {
    uint32_t e = 0;
    uint64_t v = 1;
    while (v < q) {
      v *= p;
      ++e;
    }
    return e * d;
  }(), 1, n);
  for (const auto& kp : kummer) t.add_kummer(kp.norm_chi.k_idx(), kp.norm_form);
  if (as_part) t.set_as(as_part->trace_psi.twist(), as_part->trace_form);
  t.set_exclusion(exclusion);
  return t;
}

// --- hypothesis checkers ---

Hyp44 check_hypothesis_44(const SheafSpec& s) {
  if (s.n() != 1) throw Error("kummer hypothesis: univariate only");
  if (s.has_as()) throw Error("kummer hypothesis does not apply to AS factors");
  Hyp44 h;
  const auto& ks = s.kummer();
  if (ks.empty()) return h;
  h.applicable = true;
  for (size_t i = 0; i < ks.size() && h.applicable; ++i)
    for (size_t j = i + 1; j < ks.size() && h.applicable; ++j)
      if (poly_gcd(ks[i].f, ks[j].f).degree() > 0) h.applicable = false;

  // Per-factor condition: some norm product escapes being an
  // ord(chi_j)-th power over the closure.
  for (size_t j = 0; j < ks.size(); ++j) {
    Poly np = norm_product(ks[j].f, s.q(), s.d());
    if (!perfect_power_test(np, ks[j].chi.order())) {
      h.holds_literal = true;
      h.witness = j;
      break;
    }
  }

  // Sufficient condition for the tensor: writing every chi_j on the fixed
  // generator, the pullback of the transferred data is K on the divisor
  //   sum_j k_idx_j * div(prod_i f_j(t^{q^i})),
  // and the order-i conjugate piece weights each sigma^{-i}-translated
  // locus by q^i. Nontrivial iff some geometric root has total weight
  // not divisible by q^d - 1. For a single factor this is the per-factor
  // condition; with several factors the conjugate loci may overlap and
  // cancel even when the factors themselves are coprime.
  const uint32_t d = s.d();
  const uint64_t group = s.ext_field()->size() - 1;
  std::map<std::vector<uint32_t>, uint64_t> weight;  // dense coeffs of the locus
  for (const auto& kf : ks) {
    Factorization fac = factorize(kf.f);
    for (const auto& [u, mult] : fac.factors) {
      uint64_t qi = 1;
      for (uint32_t i = 0; i < d; ++i) {
        Poly locus = sigma_act(u, -int64_t(i), s.q(), d);
        weight[locus.dense1()] += (qi % group) * kf.chi.k_idx() % group * mult % group;
        qi = qi * s.q() % group;
      }
    }
  }
  for (const auto& [locus, w] : weight) {
    (void)locus;
    if (w % group != 0) {
      h.holds = true;
      break;
    }
  }
  return h;
}

Hyp45 check_hypothesis_45(const SheafSpec& s) {
  if (s.n() != 1) throw Error("AS hypothesis: univariate only");
  if (!s.has_as()) throw Error("AS hypothesis needs an AS factor");
  const auto& af = *s.as_factor();
  RatFunc twisted = af.f.scaled(af.psi.twist());
  ASLocalData red = as_reduce(trace_rational(twisted, s.q(), s.d()));
  Hyp45 h;
  h.holds = !red.trivial;
  return h;
}

// --- Swan table ---

namespace {

const ASOrbitData* find_orbit(const ASLocalData& data, const Poly& locus) {
  for (const auto& row : data.finite)
    if (row.locus == locus) return &row;
  return nullptr;
}

}  // namespace

SwanTable swan_table(const SheafSpec& s, uint64_t seed) {
  if (s.n() != 1) throw Error("swan_table: univariate only");
  const FieldPtr& ext = s.ext_field();
  Poly e = s.exclusion();

  // The data must be lisse on the domain: every factor divisor lies in E.
  auto check_divides = [&](const Poly& f, const char* what) {
    SqfDecomp d = squarefree_decomp(f);
    for (const auto& [part, mult] : d.parts) {
      (void)mult;
      if (!poly_divmod(e, part).second.is_zero())
        throw Error(std::string("excluded locus must contain the divisor of ") + what);
    }
  };
  for (const auto& kf : s.kummer()) check_divides(kf.f, "every kummer polynomial");
  if (s.has_as() && s.as_factor()->f.den().degree() > 0)
    check_divides(s.as_factor()->f.den(), "the AS denominator");

  ASLocalData self_data, tran_data;
  if (s.has_as()) {
    const auto& af = *s.as_factor();
    RatFunc twisted = af.f.scaled(af.psi.twist());
    self_data = as_reduce(twisted, seed);
    tran_data = as_reduce(trace_rational(twisted, s.q(), s.d()), seed);
  }

  SwanTable table;
  SwanRow inf;
  inf.at_infinity = true;
  inf.sigma_fixed = true;
  inf.swan_exact = self_data.infty_reduced_order;
  inf.swan_tran = tran_data.infty_reduced_order;
  inf.pole_bound = self_data.infty_pole_order;
  inf.tame = inf.swan_exact == 0;
  table.rows.push_back(inf);

  int64_t missing = 1;
  if (e.degree() > 0) {
    Factorization fac = factorize(e, seed);
    for (const auto& [u, mult] : fac.factors) {
      (void)mult;
      SwanRow row;
      row.locus = u;
      row.orbit_degree = uint32_t(u.degree());
      if (row.orbit_degree == 1) {
        uint32_t c = u.coeff_idx1(0);
        row.sigma_fixed = ext->frobenius_idx(c, s.q_exp()) == c;
      }
      if (const ASOrbitData* o = find_orbit(self_data, u)) {
        row.swan_exact = o->reduced_order;
        row.pole_bound = o->pole_order;
      }
      if (const ASOrbitData* o = find_orbit(tran_data, u)) row.swan_tran = o->reduced_order;
      row.tame = row.swan_exact == 0;
      missing += row.orbit_degree;
      table.rows.push_back(row);
    }
  }

  table.missing_points = missing;
  for (const auto& row : table.rows) {
    int64_t w = row.orbit_degree;
    table.total_exact += w * row.swan_exact;
    table.total_tran += w * row.swan_tran;
    table.total_bound += w * row.pole_bound;
    if (row.sigma_fixed)
      table.total_exact_fixed += w * row.swan_exact;
    else
      table.total_exact_nonfixed += w * row.swan_exact;
  }
  return table;
}

int64_t gos_betti(int64_t genus, int64_t missing, int64_t swan_sum) {
  int64_t v = (2 * genus - 2 + missing) + swan_sum;
  if (v < 0)
    throw Error("negative Euler characteristic: data is trivial or inconsistent");
  return v;
}

// --- bounds ---

double BoundValue::value() const { return double(coeff) * std::sqrt(double(sqrt_arg)); }

std::optional<BoundValue> BoundReport::headline() const {
  if (kummer_bound.applicable) return kummer_bound;
  if (mixed_bound.applicable) return mixed_bound;
  return std::nullopt;
}

BoundReport bound_report(const SheafSpec& s, uint64_t seed) {
  if (s.n() != 1) throw Error("bound_report: univariate only");
  BoundReport r;
  r.as_present = s.has_as();
  r.exclusion_sigma_stable = s.exclusion_sigma_stable();
  r.swan = swan_table(s, seed);
  r.missing_points = r.swan.missing_points;

  const uint32_t d = s.d();
  const uint64_t qd = s.ext_field()->size();

  Poly prod_f = Poly::constant(s.ext_field(), 1, s.ext_field()->one());
  for (const auto& kf : s.kummer()) {
    r.radical_degrees.push_back(squarefree_decomp(kf.f).radical_degree());
    prod_f = prod_f * kf.f;
  }
  r.D1 = prod_f.degree() > 0 ? squarefree_decomp(prod_f).radical_degree() : 0;

  if (s.has_as()) {
    const RatFunc& f = s.as_factor()->f;
    r.D2 = std::max<int64_t>(f.degree(), 0);
    r.D3 = f.den().degree();
    if (f.den().degree() > 0) {
      Factorization fac = factorize(f.den(), seed);
      for (const auto& [u, mult] : fac.factors) {
        (void)mult;
        if (poly_gcd(u, prod_f).degree() == 0) r.D4 += u.degree();
      }
    }
    r.hyp_as = check_hypothesis_45(s);
  } else if (!s.kummer().empty()) {
    r.hyp_kummer = check_hypothesis_44(s);
  }

  int64_t base = -2 + r.missing_points;
  r.gos_betti_self = base + r.swan.total_exact;
  r.gos_betti_tran = base + r.swan.total_tran;

  r.complete_bound = {true, std::max<int64_t>(r.gos_betti_self, 0), qd};
  r.transfer_bound = {true, std::max<int64_t>(base + d * r.swan.total_exact, 0), s.q()};
  r.refined_bound = {true,
                     std::max<int64_t>(base + r.swan.total_exact_fixed + d * r.swan.total_exact_nonfixed, 0),
                     s.q()};

  int64_t sum_dj = 0;
  for (auto v : r.radical_degrees) sum_dj += v;
  r.kummer_bound = {!r.as_present && r.hyp_kummer.applicable && r.hyp_kummer.holds,
                    std::max<int64_t>(int64_t(d) * sum_dj - 1, 0), s.q()};
  r.mixed_bound = {r.as_present && r.hyp_as.holds,
                   std::max<int64_t>(int64_t(d) * (r.D1 + r.D3 + r.D4) + r.D2 - 1, 0), s.q()};
  return r;
}

namespace {
nlohmann::json bound_json(const BoundValue& b) {
  return {{"applicable", b.applicable}, {"coeff", b.coeff}, {"sqrt_arg", b.sqrt_arg}, {"value", b.value()}};
}
}  // namespace

nlohmann::json BoundReport::to_json() const {
  nlohmann::json j;
  j["genus"] = genus;
  j["missing_points"] = missing_points;
  j["radical_degrees"] = radical_degrees;
  j["D1"] = D1;
  j["D2"] = D2;
  j["D3"] = D3;
  j["D4"] = D4;
  j["as_present"] = as_present;
  j["hyp_kummer"] = {{"applicable", hyp_kummer.applicable},
                     {"holds", hyp_kummer.holds},
                     {"holds_literal", hyp_kummer.holds_literal},
                     {"witness", hyp_kummer.witness ? nlohmann::json(*hyp_kummer.witness) : nlohmann::json(nullptr)}};
  j["hyp_as"] = {{"holds", hyp_as.holds}};
  j["exclusion_sigma_stable"] = exclusion_sigma_stable;
  j["complete_bound"] = bound_json(complete_bound);
  j["transfer_bound"] = bound_json(transfer_bound);
  j["refined_bound"] = bound_json(refined_bound);
  j["kummer_bound"] = bound_json(kummer_bound);
  j["mixed_bound"] = bound_json(mixed_bound);
  j["gos_betti_self"] = gos_betti_self;
  j["gos_betti_tran"] = gos_betti_tran;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : swan.rows)
    rows.push_back({{"at_infinity", row.at_infinity},
                    {"locus", row.at_infinity ? std::string("infty") : row.locus.str()},
                    {"orbit_degree", row.orbit_degree},
                    {"sigma_fixed", row.sigma_fixed},
                    {"swan_exact", row.swan_exact},
                    {"swan_tran", row.swan_tran},
                    {"pole_bound", row.pole_bound},
                    {"tame", row.tame}});
  j["swan_rows"] = rows;
  j["swan_totals"] = {{"exact", swan.total_exact},
                      {"tran", swan.total_tran},
                      {"bound", swan.total_bound},
                      {"exact_fixed", swan.total_exact_fixed},
                      {"exact_nonfixed", swan.total_exact_nonfixed}};
  return j;
}

}  // namespace charsum
