#include "charsum/polyrat.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <sstream>

namespace charsum {

// --- Poly ---

Poly::Poly(FieldPtr field, uint32_t nvars) : field_(std::move(field)), nvars_(nvars) {
  if (nvars_ < 1) throw Error("polynomial needs at least one variable");
}

Poly Poly::constant(const FieldPtr& field, uint32_t nvars, const Element& c) {
  Poly r(field, nvars);
  if (!c.is_zero()) r.terms_.emplace(Exponents(nvars, 0), c.index());
  return r;
}

Poly Poly::variable(const FieldPtr& field, uint32_t nvars, uint32_t var, uint32_t exp) {
  if (var >= nvars) throw Error("variable index out of range");
  Poly r(field, nvars);
  Exponents e(nvars, 0);
  e[var] = exp;
  if (exp == 0) e[var] = 0;
  r.terms_.emplace(e, 1u);
  return r;
}

bool Poly::is_constant() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && terms_.begin()->first == Exponents(nvars_, 0);
}

void Poly::set_term(const Exponents& e, uint32_t coeff_idx) {
  if (e.size() != nvars_) throw Error("exponent tuple arity mismatch");
  if (coeff_idx == 0)
    terms_.erase(e);
  else
    terms_[e] = coeff_idx;
}

void Poly::add_term(const Exponents& e, uint32_t coeff_idx) {
  if (e.size() != nvars_) throw Error("exponent tuple arity mismatch");
  if (coeff_idx == 0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, coeff_idx);
    return;
  }
  uint32_t s = field_->add_idx(it->second, coeff_idx);
  if (s == 0)
    terms_.erase(it);
  else
    it->second = s;
}

static void check_compatible(const Poly& a, const Poly& b) {
  if (a.field().get() != b.field().get() || a.nvars() != b.nvars())
    throw Error("polynomial field/arity mismatch");
}

Poly Poly::operator+(const Poly& o) const {
  check_compatible(*this, o);
  Poly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

Poly Poly::operator-() const {
  Poly r(field_, nvars_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, field_->neg_idx(c));
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
  check_compatible(*this, o);
  Poly r(field_, nvars_);
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : o.terms_) {
      Exponents e(nvars_);
      for (uint32_t i = 0; i < nvars_; ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, field_->mul_idx(ca, cb));
    }
  return r;
}

bool Poly::operator==(const Poly& o) const {
  return field_.get() == o.field_.get() && nvars_ == o.nvars_ && terms_ == o.terms_;
}

Poly Poly::scaled(const Element& c) const {
  if (c.field_ptr() != field_.get()) throw Error("scalar from wrong field");
  Poly r(field_, nvars_);
  if (c.is_zero()) return r;
  for (const auto& [e, v] : terms_) r.terms_.emplace(e, field_->mul_idx(v, c.index()));
  return r;
}

Poly Poly::pow(uint32_t e) const {
  Poly r = Poly::constant(field_, nvars_, Element(field_.get(), 1));
  Poly b = *this;
  while (e) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

int64_t Poly::total_degree() const {
  int64_t d = -1;
  for (const auto& [e, c] : terms_) {
    (void)c;
    int64_t t = 0;
    for (auto x : e) t += x;
    d = std::max(d, t);
  }
  return d;
}

int64_t Poly::degree() const {
  if (nvars_ != 1) throw Error("degree: univariate only");
  if (terms_.empty()) return -1;
  return terms_.rbegin()->first[0];
}

Element Poly::eval(std::span<const Element> point) const {
  if (point.size() != nvars_) throw Error("evaluation arity mismatch");
  for (const auto& x : point)
    if (x.field_ptr() != field_.get()) throw Error("evaluation point in wrong field");
  uint32_t acc = 0;
  for (const auto& [e, c] : terms_) {
    uint32_t t = c;
    for (uint32_t i = 0; i < nvars_; ++i)
      if (e[i] > 0) t = field_->mul_idx(t, field_->pow_idx(point[i].index(), e[i]));
    acc = field_->add_idx(acc, t);
  }
  return Element(field_.get(), acc);
}

Element Poly::eval1(const Element& x) const {
  if (nvars_ != 1) throw Error("eval1: univariate only");
  if (x.field_ptr() != field_.get()) throw Error("evaluation point in wrong field");
  auto d = dense1();
  uint32_t acc = 0;
  for (size_t i = d.size(); i-- > 0;) {
    acc = field_->mul_idx(acc, x.index());
    acc = field_->add_idx(acc, d[i]);
  }
  return Element(field_.get(), acc);
}

Element Poly::leading_coeff() const {
  if (nvars_ != 1) throw Error("leading_coeff: univariate only");
  if (terms_.empty()) return Element(field_.get(), 0);
  return Element(field_.get(), terms_.rbegin()->second);
}

Poly Poly::monic() const {
  Element lc = leading_coeff();
  if (lc.is_zero()) return *this;
  return scaled(lc.inverse());
}

Poly Poly::derivative() const {
  if (nvars_ != 1) throw Error("derivative: univariate only");
  Poly r(field_, 1);
  for (const auto& [e, c] : terms_) {
    if (e[0] == 0) continue;
    uint32_t m = e[0] % field_->characteristic();
    uint32_t nc = field_->scalar_mul_idx(m, c);
    if (nc != 0) r.terms_.emplace(Exponents{e[0] - 1}, nc);
  }
  return r;
}

uint32_t Poly::coeff_idx1(uint32_t power) const {
  if (nvars_ != 1) throw Error("coeff_idx1: univariate only");
  auto it = terms_.find(Exponents{power});
  return it == terms_.end() ? 0 : it->second;
}

std::vector<uint32_t> Poly::dense1() const {
  if (nvars_ != 1) throw Error("dense1: univariate only");
  std::vector<uint32_t> d(size_t(degree() + 1), 0);
  for (const auto& [e, c] : terms_) d[e[0]] = c;
  return d;
}

Poly Poly::from_dense1(const FieldPtr& field, const std::vector<uint32_t>& coeffs) {
  Poly r(field, 1);
  for (size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != 0) r.terms_.emplace(Exponents{uint32_t(i)}, coeffs[i]);
  return r;
}

Poly Poly::subst_power(uint32_t m) const {
  Poly r(field_, nvars_);
  for (const auto& [e, c] : terms_) {
    Exponents ne(nvars_);
    for (uint32_t i = 0; i < nvars_; ++i) ne[i] = e[i] * m;
    r.terms_.emplace(ne, c);
  }
  return r;
}

Poly Poly::coeff_frobenius(uint32_t e) const {
  Poly r(field_, nvars_);
  for (const auto& [ex, c] : terms_) r.terms_.emplace(ex, field_->frobenius_idx(c, e));
  return r;
}

std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    if (!first) os << "+";
    first = false;
    std::string cs = field_->element_str(c);
    bool has_vars = false;
    for (auto x : e) has_vars |= (x > 0);
    if (!has_vars) {
      os << (cs.find('+') != std::string::npos ? "(" + cs + ")" : cs);
      continue;
    }
    bool need_coeff = !(c == 1);
    if (need_coeff) {
      os << (cs.find('+') != std::string::npos ? "(" + cs + ")" : cs) << "*";
    }
    bool firstv = true;
    for (uint32_t i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      if (!firstv) os << "*";
      firstv = false;
      if (nvars_ == 1)
        os << "t";
      else
        os << "t" << (i + 1);
      if (e[i] > 1) os << "^" << e[i];
    }
  }
  return os.str();
}

// --- univariate division / gcd ---

std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b) {
  if (a.nvars() != 1 || b.nvars() != 1) throw Error("divmod: univariate only");
  if (b.is_zero()) throw Error("division by zero polynomial");
  const FieldPtr& f = a.field();
  auto da = a.dense1();
  auto db = b.dense1();
  if (a.is_zero()) return {Poly(f, 1), Poly(f, 1)};
  int64_t degb = b.degree();
  uint32_t lead_inv = f->inv_idx(db.back());
  std::vector<uint32_t> q(da.size() > db.size() - 1 ? da.size() - db.size() + 1 : 0, 0);
  for (int64_t i = int64_t(da.size()) - 1; i >= degb; --i) {
    uint32_t c = f->mul_idx(da[i], lead_inv);
    if (c == 0) continue;
    q[i - degb] = c;
    for (int64_t j = 0; j <= degb; ++j)
      da[i - degb + j] = f->sub_idx(da[i - degb + j], f->mul_idx(c, db[j]));
  }
  da.resize(degb > 0 ? degb : 0);
  return {Poly::from_dense1(f, q), Poly::from_dense1(f, da)};
}

Poly poly_gcd(Poly a, Poly b) {
  if (a.nvars() != 1 || b.nvars() != 1) throw Error("gcd: univariate only");
  while (!b.is_zero()) {
    Poly r = poly_divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.is_zero() ? a : a.monic();
}

bool poly_order_less(const Poly& a, const Poly& b) {
  int64_t da = a.degree(), db = b.degree();
  if (da != db) return da < db;
  auto ca = a.dense1(), cb = b.dense1();
  for (size_t i = ca.size(); i-- > 0;) {
    if (ca[i] != cb[i]) return ca[i] < cb[i];
  }
  return false;
}

// --- RatFunc ---

RatFunc::RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  check_compatible(num_, den_);
  if (den_.is_zero()) throw Error("rational function with zero denominator");
  if (num_.nvars() == 1) {
    if (num_.is_zero()) {
      den_ = Poly::constant(den_.field(), 1, Element(den_.field().get(), 1));
      return;
    }
    Poly g = poly_gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = poly_divmod(num_, g).first;
      den_ = poly_divmod(den_, g).first;
    }
    Element lc = den_.leading_coeff();
    den_ = den_.scaled(lc.inverse());
    num_ = num_.scaled(lc.inverse());
  }
}

RatFunc RatFunc::from_poly(Poly p) {
  FieldPtr f = p.field();
  uint32_t n = p.nvars();
  return RatFunc(std::move(p), Poly::constant(f, n, Element(f.get(), 1)));
}

bool RatFunc::is_poly() const { return den_.is_constant(); }

RatFunc RatFunc::operator+(const RatFunc& o) const {
  return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::scaled(const Element& c) const { return RatFunc(num_.scaled(c), den_); }

bool RatFunc::operator==(const RatFunc& o) const {
  return num_ * o.den_ == o.num_ * den_;
}

int64_t RatFunc::degree() const {
  if (num_.is_zero()) return -1;
  return num_.degree() - den_.degree();
}

std::optional<Element> RatFunc::eval1(const Element& x) const {
  Element d = den_.eval1(x);
  if (d.is_zero()) return std::nullopt;
  return num_.eval1(x) / d;
}

std::string RatFunc::str() const {
  if (is_poly()) {
    Element c = Element(den_.field().get(), den_.coeff_idx1(0));
    if (c == den_.field()->one()) return num_.str();
  }
  return "(" + num_.str() + ")/(" + den_.str() + ")";
}

// --- sigma action / norm / trace ---

namespace {

uint32_t log_p(uint32_t q, uint32_t p) {
  uint32_t e = 0;
  uint64_t v = 1;
  while (v < q) {
    v *= p;
    ++e;
  }
  if (v != q) throw Error("q is not a power of the characteristic");
  return e;
}

uint32_t sigma_frob_exp(const FieldPtr& field, int64_t i, uint32_t q, uint32_t d) {
  uint32_t e = log_p(q, field->characteristic());
  if (uint64_t(e) * d != field->degree())
    throw Error("field is not F_{q^d} for the given (q, d)");
  int64_t im = ((i % d) + d) % d;
  return uint32_t((uint64_t(e) * im) % field->degree());
}

}  // namespace

Poly sigma_act(const Poly& f, int64_t i, uint32_t q, uint32_t d) {
  return f.coeff_frobenius(sigma_frob_exp(f.field(), i, q, d));
}

RatFunc sigma_act(const RatFunc& f, int64_t i, uint32_t q, uint32_t d) {
  uint32_t e = sigma_frob_exp(f.field(), i, q, d);
  return RatFunc(f.num().coeff_frobenius(e), f.den().coeff_frobenius(e));
}

Poly norm_product(const Poly& f, uint32_t q, uint32_t d) {
  sigma_frob_exp(f.field(), 0, q, d);  // validates (q, d) against the field
  Poly r = Poly::constant(f.field(), f.nvars(), Element(f.field().get(), 1));
  uint64_t qi = 1;
  for (uint32_t i = 0; i < d; ++i) {
    r = r * f.subst_power(uint32_t(qi));
    qi *= q;
  }
  return r;
}

RatFunc trace_rational(const RatFunc& f, uint32_t q, uint32_t d) {
  const FieldPtr& F = f.field();
  uint32_t e = log_p(q, F->characteristic());
  if (uint64_t(e) * d != F->degree()) throw Error("field is not F_{q^d} for the given (q, d)");
  std::vector<Poly> nums, dens;
  for (uint32_t i = 0; i < d; ++i) {
    nums.push_back(f.num().coeff_frobenius(uint32_t((uint64_t(e) * i) % F->degree())));
    dens.push_back(f.den().coeff_frobenius(uint32_t((uint64_t(e) * i) % F->degree())));
  }
  Poly den = Poly::constant(F, f.nvars(), Element(F.get(), 1));
  for (const auto& dpoly : dens) den = den * dpoly;
  Poly num(F, f.nvars());
  for (uint32_t i = 0; i < d; ++i) {
    Poly t = nums[i];
    for (uint32_t j = 0; j < d; ++j)
      if (j != i) t = t * dens[j];
    num = num + t;
  }
  RatFunc r(num, den);
  // The result must be fixed by sigma.
  for (const auto& [ex, c] : r.num().terms()) {
    (void)ex;
    if (F->frobenius_idx(c, e) != c) throw Error("trace_rational: coefficient not sigma-fixed (internal)");
  }
  for (const auto& [ex, c] : r.den().terms()) {
    (void)ex;
    if (F->frobenius_idx(c, e) != c) throw Error("trace_rational: coefficient not sigma-fixed (internal)");
  }
  return r;
}

// --- squarefree decomposition ---

namespace {

Poly pth_root_poly(const Poly& f) {
  const FieldPtr& F = f.field();
  uint32_t p = F->characteristic();
  Poly r(F, 1);
  for (const auto& [e, c] : f.terms()) {
    if (e[0] % p != 0) throw Error("pth_root_poly: exponent not divisible by p (internal)");
    r.set_term({e[0] / p}, F->pth_root_idx(c));
  }
  return r;
}

void sqf_rec(const Poly& f_monic, uint32_t outer_mult, std::vector<std::pair<Poly, uint32_t>>& out) {
  const FieldPtr& F = f_monic.field();
  uint32_t p = F->characteristic();
  if (f_monic.degree() <= 0) return;
  Poly fp = f_monic.derivative();
  if (fp.is_zero()) {
    sqf_rec(pth_root_poly(f_monic), outer_mult * p, out);
    return;
  }
  Poly c = poly_gcd(f_monic, fp);
  Poly w = poly_divmod(f_monic, c).first;
  uint32_t i = 1;
  while (w.degree() > 0) {
    Poly y = poly_gcd(w, c);
    Poly z = poly_divmod(w, y).first;
    if (z.degree() > 0) out.emplace_back(z.monic(), i * outer_mult);
    w = std::move(y);
    c = poly_divmod(c, w).first;
    ++i;
  }
  if (c.degree() > 0) sqf_rec(pth_root_poly(c), outer_mult * p, out);
}

}  // namespace

SqfDecomp squarefree_decomp(const Poly& f) {
  if (f.nvars() != 1) throw Error("squarefree_decomp: univariate only");
  if (f.is_zero()) throw Error("squarefree_decomp of zero polynomial");
  SqfDecomp d;
  d.unit = f.leading_coeff();
  sqf_rec(f.monic(), 1, d.parts);
  std::sort(d.parts.begin(), d.parts.end(),
            [](const auto& a, const auto& b) { return poly_order_less(a.first, b.first); });
  return d;
}

Poly SqfDecomp::radical() const {
  if (parts.empty()) throw Error("radical of a constant");
  Poly r = Poly::constant(parts[0].first.field(), 1, parts[0].first.field()->one());
  for (const auto& [part, mult] : parts) {
    (void)mult;
    r = r * part;
  }
  return r;
}

int64_t SqfDecomp::radical_degree() const {
  int64_t d = 0;
  for (const auto& [part, mult] : parts) {
    (void)mult;
    d += part.degree();
  }
  return d;
}

// --- factorization (distinct degree + Cantor-Zassenhaus) ---

namespace {

Poly poly_powmod(const Poly& base, uint64_t e, const Poly& m) {
  const FieldPtr& F = base.field();
  Poly r = Poly::constant(F, 1, F->one());
  Poly b = poly_divmod(base, m).second;
  while (e) {
    if (e & 1) r = poly_divmod(r * b, m).second;
    b = poly_divmod(b * b, m).second;
    e >>= 1;
  }
  return r;
}

Poly random_poly_below(const FieldPtr& F, int64_t deg_bound, std::mt19937_64& rng) {
  Poly r(F, 1);
  for (int64_t i = 0; i < deg_bound; ++i) {
    uint32_t c = uint32_t(rng() % F->size());
    if (c != 0) r.set_term({uint32_t(i)}, c);
  }
  return r;
}

// Splits a monic squarefree product of irreducibles all of degree e.
void edf(const Poly& h, uint32_t e, std::mt19937_64& rng, std::vector<Poly>& out) {
  const FieldPtr& F = h.field();
  if (h.degree() == int64_t(e)) {
    out.push_back(h.monic());
    return;
  }
  uint64_t Q = F->size();
  Poly one = Poly::constant(F, 1, F->one());
  while (true) {
    Poly a = random_poly_below(F, h.degree(), rng);
    if (a.degree() < 1) continue;
    Poly d;
    if (F->characteristic() == 2) {
      // Trace map over F_2: sum of 2^j-th powers hits each root in F_2.
      uint32_t s = log_p(uint32_t(Q), 2);
      Poly acc = poly_divmod(a, h).second;
      Poly tr = acc;
      for (uint32_t j = 1; j < s * e; ++j) {
        acc = poly_divmod(acc * acc, h).second;
        tr = tr + acc;
      }
      d = poly_gcd(tr, h);
    } else {
      // a^{(Q^e-1)/2} = (N(a))^{(Q-1)/2} with N the degree-e norm map.
      Poly n = poly_divmod(a, h).second;
      Poly frob = n;
      for (uint32_t j = 1; j < e; ++j) {
        frob = poly_powmod(frob, Q, h);
        n = poly_divmod(n * frob, h).second;
      }
      Poly b = poly_powmod(n, (Q - 1) / 2, h);
      d = poly_gcd(b - one, h);
    }
    if (d.degree() > 0 && d.degree() < h.degree()) {
      edf(d, e, rng, out);
      edf(poly_divmod(h, d).first, e, rng, out);
      return;
    }
  }
}

}  // namespace

Factorization factorize(const Poly& f, uint64_t seed) {
  if (f.nvars() != 1) throw Error("factorize: univariate only");
  if (f.is_zero()) throw Error("factorize of zero polynomial");
  Factorization out;
  out.unit = f.leading_coeff();
  SqfDecomp sqf = squarefree_decomp(f);
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 1);
  const FieldPtr& F = f.field();
  uint64_t Q = F->size();
  for (const auto& [part, mult] : sqf.parts) {
    // distinct-degree split of the squarefree part
    Poly cur = part;
    Poly t = Poly::variable(F, 1, 0);
    Poly h = poly_divmod(t, cur).second;  // t^{Q^i} mod cur, starting at i=0
    uint32_t i = 1;
    std::vector<std::pair<Poly, uint32_t>> by_degree;
    while (cur.degree() >= 2 * int64_t(i)) {
      h = poly_powmod(h, Q, cur);
      Poly g = poly_gcd(h - t, cur);
      if (g.degree() > 0) {
        by_degree.emplace_back(g, i);
        cur = poly_divmod(cur, g).first;
        h = poly_divmod(h, cur).second;
      }
      ++i;
    }
    if (cur.degree() > 0) by_degree.emplace_back(cur, uint32_t(cur.degree()));
    for (const auto& [prod, e] : by_degree) {
      std::vector<Poly> irreds;
      edf(prod, e, rng, irreds);
      for (auto& p : irreds) out.factors.emplace_back(std::move(p), mult);
    }
  }
  std::sort(out.factors.begin(), out.factors.end(),
            [](const auto& a, const auto& b) { return poly_order_less(a.first, b.first); });
  return out;
}

bool perfect_power_test(const Poly& f, uint32_t e) {
  if (e == 0) throw Error("perfect_power_test with e = 0");
  if (f.is_zero()) throw Error("perfect_power_test of zero polynomial");
  if (e == 1) return true;
  if (f.nvars() != 1) throw Error("perfect_power_test: univariate only");
  if (f.degree() == 0) return true;  // units are e-th powers in the closure
  SqfDecomp d = squarefree_decomp(f);
  for (const auto& [part, mult] : d.parts) {
    (void)part;
    if (mult % e != 0) return false;
  }
  return true;
}

// --- Artin-Schreier reduction ---

namespace {

// g(r + s) over the field of r; coefficients of g must already live there.
std::vector<uint32_t> taylor_shift(const std::vector<uint32_t>& g, uint32_t r, const Field& F) {
  // result = (((g_n)(s+r) + g_{n-1})(s+r) + ...), maintained as dense coeffs in s.
  std::vector<uint32_t> acc;
  for (size_t i = g.size(); i-- > 0;) {
    // acc = acc * (s + r) + g_i
    std::vector<uint32_t> next(acc.size() + 1, 0);
    for (size_t j = 0; j < acc.size(); ++j) {
      next[j + 1] = F.add_idx(next[j + 1], acc[j]);
      next[j] = F.add_idx(next[j], F.mul_idx(acc[j], r));
    }
    if (next.empty()) next.resize(1, 0);
    next[0] = F.add_idx(next[0], g[i]);
    acc = std::move(next);
  }
  return acc;
}

// In-place Artin-Schreier reduction of principal-part coefficients indexed
// by pole order 1..m (pc[0] unused): a at order lp becomes a^{1/p} at order l.
uint32_t reduce_orders(std::vector<uint32_t>& pc, const Field& F) {
  uint32_t p = F.characteristic();
  for (size_t l = pc.size(); l-- > 2;) {
    if (pc[l] != 0 && l % p == 0) {
      pc[l / p] = F.add_idx(pc[l / p], F.pth_root_idx(pc[l]));
      pc[l] = 0;
    }
  }
  for (size_t l = pc.size(); l-- > 1;)
    if (pc[l] != 0) return uint32_t(l);
  return 0;
}

}  // namespace

ASLocalData as_reduce(const RatFunc& f, uint64_t seed) {
  if (f.nvars() != 1) throw Error("as_reduce: univariate only");
  const FieldPtr& F = f.field();
  ASLocalData out;

  // Part at infinity: the polynomial part, reduced on exponents >= 1.
  auto [quo, rem] = poly_divmod(f.num(), f.den());
  (void)rem;
  if (quo.degree() >= 1) {
    out.infty_pole_order = uint32_t(quo.degree());
    std::vector<uint32_t> pc = quo.dense1();
    out.infty_reduced_order = reduce_orders(pc, *F);
  }

  // Finite poles, one representative per Galois orbit over the coefficient
  // field (the conjugate points carry conjugate data).
  if (f.den().degree() > 0) {
    Factorization fac = factorize(f.den(), seed);
    for (const auto& [u, mult] : fac.factors) {
      uint32_t e = uint32_t(u.degree());
      FieldPtr K = Field::get(F->characteristic(), F->degree() * e);
      const Embedding& emb = Embedding::get(F, K);
      // First root of u in K, in enumeration order.
      auto ud = u.dense1();
      std::vector<uint32_t> uK(ud.size());
      for (size_t i = 0; i < ud.size(); ++i) uK[i] = emb.apply_idx(ud[i]);
      uint32_t root = UINT32_MAX;
      for (uint32_t x = 0; x < K->size(); ++x) {
        uint32_t acc = 0;
        for (size_t i = uK.size(); i-- > 0;) acc = K->add_idx(K->mul_idx(acc, x), uK[i]);
        if (acc == 0) {
          root = x;
          break;
        }
      }
      if (root == UINT32_MAX) throw Error("as_reduce: no root in splitting field (internal)");

      // Principal part of f at the root: shift to s = t - root, then divide
      // the series num(root+s) by den(root+s)/s^mult up to order mult.
      auto numd = f.num().dense1();
      auto dend = f.den().dense1();
      std::vector<uint32_t> numK(numd.size()), denK(dend.size());
      for (size_t i = 0; i < numd.size(); ++i) numK[i] = emb.apply_idx(numd[i]);
      for (size_t i = 0; i < dend.size(); ++i) denK[i] = emb.apply_idx(dend[i]);
      auto num_sh = taylor_shift(numK, root, *K);
      auto den_sh = taylor_shift(denK, root, *K);
      for (uint32_t i = 0; i < mult; ++i)
        if (i < den_sh.size() && den_sh[i] != 0)
          throw Error("as_reduce: wrong pole multiplicity (internal)");
      std::vector<uint32_t> D(den_sh.begin() + mult, den_sh.end());
      // Series inverse of D modulo s^mult.
      std::vector<uint32_t> dinv(mult, 0);
      uint32_t d0inv = K->inv_idx(D[0]);
      dinv[0] = d0inv;
      for (uint32_t j = 1; j < mult; ++j) {
        uint32_t s = 0;
        for (uint32_t i = 1; i <= j; ++i)
          if (i < D.size()) s = K->add_idx(s, K->mul_idx(D[i], dinv[j - i]));
        dinv[j] = K->neg_idx(K->mul_idx(d0inv, s));
      }
      // C = num_sh * dinv mod s^mult; pole-order-l coefficient is C[mult-l].
      std::vector<uint32_t> pc(mult + 1, 0);
      for (uint32_t j = 0; j < mult; ++j) {
        uint32_t s = 0;
        for (uint32_t i = 0; i <= j; ++i)
          if (i < num_sh.size()) s = K->add_idx(s, K->mul_idx(num_sh[i], dinv[j - i]));
        pc[mult - j] = s;
      }
      uint32_t reduced = reduce_orders(pc, *K);
      out.finite.push_back(ASOrbitData{u, e, mult, reduced});
    }
  }

  bool triv = out.infty_reduced_order == 0;
  for (const auto& row : out.finite) triv = triv && row.reduced_order == 0;
  out.trivial = triv;
  return out;
}

std::vector<std::pair<std::string, uint32_t>> ASLocalData::reduced_signature() const {
  std::vector<std::pair<std::string, uint32_t>> sig;
  for (const auto& row : finite)
    if (row.reduced_order > 0) sig.emplace_back(row.locus.str(), row.reduced_order);
  std::sort(sig.begin(), sig.end());
  sig.emplace_back("infty", infty_reduced_order);
  return sig;
}

// --- parsing ---

namespace {

struct PolyParser {
  const std::string& s;
  size_t pos = 0;
  const FieldPtr& field;
  uint32_t nvars;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  uint64_t parse_uint() {
    skip_ws();
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      throw Error("expected integer in polynomial text: " + s);
    uint64_t v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      v = v * 10 + (s[pos] - '0');
      ++pos;
    }
    return v;
  }

  Poly parse_factor() {
    skip_ws();
    if (pos >= s.size()) throw Error("unexpected end of polynomial text: " + s);
    char c = s[pos];
    if (c == '(') {
      ++pos;
      Poly e = parse_expr();
      if (!eat(')')) throw Error("missing ')' in polynomial text: " + s);
      return e;
    }
    if (c == 'g') {
      ++pos;
      uint64_t e = 1;
      if (eat('^')) e = parse_uint();
      return Poly::constant(field, nvars, field->gen().pow(e));
    }
    if (c == 't') {
      ++pos;
      uint32_t var = 0;
      if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        var = uint32_t(parse_uint());
        if (var < 1 || var > nvars) throw Error("variable index out of range in: " + s);
        var -= 1;
      } else if (nvars != 1) {
        throw Error("bare variable t needs an index for multivariate polynomials: " + s);
      }
      uint32_t e = 1;
      if (eat('^')) e = uint32_t(parse_uint());
      return Poly::variable(field, nvars, var, e);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      uint64_t v = parse_uint() % field->characteristic();
      return Poly::constant(field, nvars,
                            Element(field.get(), field->scalar_mul_idx(uint32_t(v), 1)));
    }
    throw Error(std::string("unexpected character '") + c + "' in polynomial text: " + s);
  }

  Poly parse_term() {
    Poly acc = parse_factor();
    while (true) {
      skip_ws();
      if (eat('*')) {
        acc = acc * parse_factor();
      } else if (pos < s.size() && (s[pos] == 'g' || s[pos] == 't' || s[pos] == '(')) {
        acc = acc * parse_factor();
      } else {
        break;
      }
    }
    return acc;
  }

  Poly parse_expr() {
    skip_ws();
    bool neg = eat('-');
    Poly acc = parse_term();
    if (neg) acc = -acc;
    while (true) {
      skip_ws();
      if (eat('+')) {
        acc = acc + parse_term();
      } else if (eat('-')) {
        acc = acc - parse_term();
      } else {
        break;
      }
    }
    return acc;
  }
};

}  // namespace

Poly parse_poly(const FieldPtr& field, uint32_t nvars, const std::string& text) {
  PolyParser p{text, 0, field, nvars};
  Poly r = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) throw Error("trailing characters in polynomial text: " + text);
  return r;
}

}  // namespace charsum
