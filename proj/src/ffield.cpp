#include "charsum/ffield.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <map>
#include <tuple>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace charsum {

namespace {

std::atomic<uint64_t> g_field_cap{uint64_t(1) << 20};

// --- arithmetic in Z_p[t] on raw coefficient vectors (little-endian) ---
// Used for modulus search and embedding bootstrap, before a Field exists.

using ZpPoly = std::vector<uint32_t>;

void zp_trim(ZpPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

ZpPoly zp_mul(const ZpPoly& a, const ZpPoly& b, uint32_t p) {
  if (a.empty() || b.empty()) return {};
  ZpPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + uint64_t(a[i]) * b[j]) % p;
  }
  zp_trim(r);
  return r;
}

uint32_t zp_inv_scalar(uint32_t a, uint32_t p) {
  // Fermat; p is prime and small.
  uint32_t r = 1, b = a % p;
  uint32_t e = p - 2;
  while (e) {
    if (e & 1) r = uint32_t(uint64_t(r) * b % p);
    b = uint32_t(uint64_t(b) * b % p);
    e >>= 1;
  }
  return r;
}

ZpPoly zp_rem(ZpPoly a, const ZpPoly& m, uint32_t p) {
  zp_trim(a);
  if (m.empty()) throw Error("zp_rem: division by zero polynomial");
  uint32_t lead_inv = zp_inv_scalar(m.back(), p);
  while (a.size() >= m.size()) {
    uint32_t c = uint32_t(uint64_t(a.back()) * lead_inv % p);
    size_t shift = a.size() - m.size();
    if (c != 0)
      for (size_t i = 0; i < m.size(); ++i) {
        uint64_t sub = uint64_t(c) * m[i] % p;
        a[shift + i] = uint32_t((a[shift + i] + p - sub) % p);
      }
    a.pop_back();
    zp_trim(a);
    if (a.empty()) break;
  }
  return a;
}

ZpPoly zp_gcd(ZpPoly a, ZpPoly b, uint32_t p) {
  zp_trim(a);
  zp_trim(b);
  while (!b.empty()) {
    ZpPoly r = zp_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty() && a.back() != 1) {
    uint32_t inv = zp_inv_scalar(a.back(), p);
    for (auto& c : a) c = uint32_t(uint64_t(c) * inv % p);
  }
  return a;
}

// t^{p} mod m, starting from an arbitrary base polynomial.
ZpPoly zp_pow_p(const ZpPoly& base, uint32_t p, const ZpPoly& m) {
  ZpPoly r{1};
  ZpPoly b = zp_rem(base, m, p);
  uint32_t e = p;
  while (e) {
    if (e & 1) r = zp_rem(zp_mul(r, b, p), m, p);
    b = zp_rem(zp_mul(b, b, p), m, p);
    e >>= 1;
  }
  return r;
}

// Monic f of degree k >= 2 is irreducible over F_p iff it has no
// irreducible factor of degree <= k/2: gcd(t^{p^i} - t, f) = 1 for all
// 1 <= i <= k/2.
bool zp_irreducible(const ZpPoly& f, uint32_t p) {
  size_t k = f.size() - 1;
  if (k == 1) return true;
  ZpPoly t{0, 1};
  ZpPoly h = t;  // t^{p^i} mod f
  for (size_t i = 1; i <= k / 2; ++i) {
    h = zp_pow_p(h, p, f);
    ZpPoly diff = h;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    zp_trim(diff);
    ZpPoly g = zp_gcd(f, diff, p);
    if (g.size() != 1) return false;
  }
  return true;
}

struct FieldKey {
  uint32_t p, k;
  bool operator<(const FieldKey& o) const { return std::tie(p, k) < std::tie(o.p, o.k); }
};

std::map<FieldKey, FieldPtr>& field_registry() {
  static std::map<FieldKey, FieldPtr> reg;
  return reg;
}
std::mutex& field_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

uint64_t field_cap() { return g_field_cap.load(); }
void set_field_cap(uint64_t cap) { g_field_cap.store(cap); }

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<uint64_t> prime_factors_u64(uint64_t n) {
  std::vector<uint64_t> ps;
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      ps.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) ps.push_back(n);
  return ps;
}

// --- Element ---

const Field& Element::field() const {
  if (!field_) throw Error("element has no field");
  return *field_;
}

static void check_same_field(const Element& a, const Element& b) {
  if (a.field_ptr() != b.field_ptr()) throw Error("field mismatch");
}

Element Element::operator+(const Element& o) const {
  check_same_field(*this, o);
  return Element(field_, field_->add_idx(idx_, o.idx_));
}
Element Element::operator-(const Element& o) const {
  check_same_field(*this, o);
  return Element(field_, field_->sub_idx(idx_, o.idx_));
}
Element Element::operator*(const Element& o) const {
  check_same_field(*this, o);
  return Element(field_, field_->mul_idx(idx_, o.idx_));
}
Element Element::operator/(const Element& o) const {
  check_same_field(*this, o);
  return Element(field_, field_->mul_idx(idx_, field_->inv_idx(o.idx_)));
}
Element Element::operator-() const { return Element(field_, field_->neg_idx(idx_)); }
Element Element::pow(uint64_t e) const { return Element(field_, field_->pow_idx(idx_, e)); }
Element Element::inverse() const { return Element(field_, field_->inv_idx(idx_)); }
Element Element::frobenius(uint32_t e) const { return Element(field_, field_->frobenius_idx(idx_, e)); }
Element Element::pth_root() const { return Element(field_, field_->pth_root_idx(idx_)); }

std::vector<uint32_t> Element::coeffs() const {
  const Field& f = field();
  std::vector<uint32_t> c(f.degree());
  uint32_t v = idx_;
  for (uint32_t i = 0; i < f.degree(); ++i) {
    c[i] = v % f.characteristic();
    v /= f.characteristic();
  }
  return c;
}

std::string Element::str() const { return field().element_str(idx_); }

// --- Field ---

FieldPtr Field::get(uint32_t p, uint32_t k) {
  if (!is_prime_u64(p)) throw Error("field characteristic must be prime, got " + std::to_string(p));
  if (k < 1) throw Error("field degree must be >= 1");
  uint64_t q = 1;
  for (uint32_t i = 0; i < k; ++i) {
    q *= p;
    if (q > field_cap()) throw Error("field cardinality exceeds cap");
  }
  FieldKey key{p, k};
  std::lock_guard<std::mutex> lock(field_mutex());
  auto& reg = field_registry();
  auto it = reg.find(key);
  if (it != reg.end()) return it->second;
  FieldPtr f(new Field(p, k));
  reg.emplace(key, f);
  return f;
}

Field::Field(uint32_t p, uint32_t k) : p_(p), k_(k) {
  uint64_t q = 1;
  for (uint32_t i = 0; i < k; ++i) q *= p;
  q_ = uint32_t(q);

  if (k_ > 1) {
    // Lexicographically smallest monic irreducible of degree k, ordered by
    // the coefficient tuple (a_{k-1}, ..., a_0).
    uint64_t qk = q;
    ZpPoly f(k_ + 1, 0);
    f[k_] = 1;
    bool found = false;
    for (uint64_t code = 0; code < qk; ++code) {
      uint64_t v = code;
      for (uint32_t i = 0; i < k_; ++i) {
        f[i] = uint32_t(v % p_);
        v /= p_;
      }
      if (zp_irreducible(f, p_)) {
        modulus_.assign(f.begin(), f.end());
        found = true;
        break;
      }
    }
    if (!found) throw Error("no irreducible modulus found (internal)");
  }

  // Multiplicative generator: first element (enumeration order) of order q-1.
  if (q_ == 2) {
    mult_gen_ = 1;
  } else {
    auto primes = prime_factors_u64(q_ - 1);
    for (uint32_t cand = 2; cand < q_; ++cand) {
      bool ok = true;
      for (uint64_t r : primes) {
        // cand^((q-1)/r) == 1 disqualifies.
        uint64_t e = (q_ - 1) / r;
        uint32_t acc = 1, b = cand;
        while (e) {
          if (e & 1) acc = mul_idx_slow(acc, b);
          b = mul_idx_slow(b, b);
          e >>= 1;
        }
        if (acc == 1) {
          ok = false;
          break;
        }
      }
      if (ok) {
        mult_gen_ = cand;
        break;
      }
    }
  }

  exp_.resize(q_ - 1);
  log_.assign(q_, UINT32_MAX);
  uint32_t cur = 1;
  for (uint32_t j = 0; j + 1 < q_; ++j) {
    exp_[j] = cur;
    log_[cur] = j;
    cur = mul_idx_slow(cur, mult_gen_);
  }
  if (cur != 1) throw Error("generator order check failed (internal)");
}

Element Field::from_index(uint32_t idx) const {
  if (idx >= q_) throw Error("element index out of range");
  return Element(this, idx);
}

Element Field::from_coeffs(const std::vector<uint32_t>& c) const {
  if (c.size() > k_) throw Error("coefficient vector longer than field degree");
  uint32_t idx = 0;
  for (size_t i = c.size(); i-- > 0;) {
    if (c[i] >= p_) throw Error("coefficient out of range");
    idx = idx * p_ + c[i];
  }
  return Element(this, idx);
}

Element Field::gen() const {
  if (k_ == 1) throw Error("prime field has no extension generator g");
  return Element(this, p_);
}

uint32_t Field::add_idx(uint32_t a, uint32_t b) const {
  if (p_ == 2) return a ^ b;
  uint32_t r = 0, mult = 1;
  for (uint32_t i = 0; i < k_; ++i) {
    uint32_t da = a % p_, db = b % p_;
    a /= p_;
    b /= p_;
    uint32_t s = da + db;
    if (s >= p_) s -= p_;
    r += s * mult;
    mult *= p_;
  }
  return r;
}

uint32_t Field::neg_idx(uint32_t a) const {
  if (p_ == 2) return a;
  uint32_t r = 0, mult = 1;
  for (uint32_t i = 0; i < k_; ++i) {
    uint32_t da = a % p_;
    a /= p_;
    r += (da == 0 ? 0 : p_ - da) * mult;
    mult *= p_;
  }
  return r;
}

uint32_t Field::sub_idx(uint32_t a, uint32_t b) const { return add_idx(a, neg_idx(b)); }

uint32_t Field::mul_idx_slow(uint32_t a, uint32_t b) const {
  if (a == 0 || b == 0) return 0;
  if (k_ == 1) return uint32_t(uint64_t(a) * b % p_);
  // Schoolbook product of coefficient vectors, reduced by the modulus.
  std::vector<uint32_t> ca(k_), cb(k_), prod(2 * k_ - 1, 0);
  uint32_t v = a;
  for (uint32_t i = 0; i < k_; ++i) {
    ca[i] = v % p_;
    v /= p_;
  }
  v = b;
  for (uint32_t i = 0; i < k_; ++i) {
    cb[i] = v % p_;
    v /= p_;
  }
  for (uint32_t i = 0; i < k_; ++i) {
    if (ca[i] == 0) continue;
    for (uint32_t j = 0; j < k_; ++j)
      prod[i + j] = uint32_t((prod[i + j] + uint64_t(ca[i]) * cb[j]) % p_);
  }
  // reduce by modulus (monic)
  for (size_t deg = prod.size(); deg-- > k_;) {
    uint32_t c = prod[deg];
    if (c == 0) continue;
    prod[deg] = 0;
    for (uint32_t i = 0; i < k_; ++i) {
      uint64_t sub = uint64_t(c) * modulus_[i] % p_;
      prod[deg - k_ + i] = uint32_t((prod[deg - k_ + i] + p_ - sub) % p_);
    }
  }
  uint32_t idx = 0;
  for (size_t i = k_; i-- > 0;) idx = idx * p_ + prod[i];
  return idx;
}

uint32_t Field::mul_idx(uint32_t a, uint32_t b) const {
  if (a == 0 || b == 0) return 0;
  uint64_t s = uint64_t(log_[a]) + log_[b];
  if (s >= q_ - 1) s -= q_ - 1;
  return exp_[s];
}

uint32_t Field::inv_idx(uint32_t a) const {
  if (a == 0) throw Error("division by zero");
  uint32_t l = log_[a];
  return exp_[l == 0 ? 0 : q_ - 1 - l];
}

uint32_t Field::pow_idx(uint32_t a, uint64_t e) const {
  if (a == 0) return e == 0 ? 1 : 0;
  uint64_t l = uint64_t(log_[a]) * (e % (q_ - 1)) % (q_ - 1);
  return exp_[l];
}

uint32_t Field::frobenius_idx(uint32_t a, uint32_t e) const {
  if (a == 0) return 0;
  uint64_t pe = 1;
  for (uint32_t i = 0; i < e % k_; ++i) pe = pe * p_ % (q_ - 1);
  uint64_t l = uint64_t(log_[a]) * pe % (q_ - 1);
  return exp_[l];
}

uint32_t Field::pth_root_idx(uint32_t a) const { return frobenius_idx(a, k_ - 1); }

uint32_t Field::dlog_idx(uint32_t a) const {
  if (a == 0) throw Error("dlog of zero");
  return log_[a];
}

uint32_t Field::scalar_mul_idx(uint32_t c, uint32_t a) const {
  c %= p_;
  if (c == 0 || a == 0) return 0;
  if (c == 1) return a;
  uint32_t r = 0, mult = 1;
  for (uint32_t i = 0; i < k_; ++i) {
    uint32_t da = a % p_;
    a /= p_;
    r += uint32_t(uint64_t(c) * da % p_) * mult;
    mult *= p_;
  }
  return r;
}

std::string Field::element_str(uint32_t idx) const {
  if (idx == 0) return "0";
  std::vector<uint32_t> c(k_);
  uint32_t v = idx;
  for (uint32_t i = 0; i < k_; ++i) {
    c[i] = v % p_;
    v /= p_;
  }
  std::ostringstream os;
  bool first = true;
  for (size_t i = k_; i-- > 0;) {
    if (c[i] == 0) continue;
    if (!first) os << "+";
    first = false;
    if (i == 0) {
      os << c[i];
    } else {
      if (c[i] != 1) os << c[i] << "*";
      os << "g";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

// --- Embedding ---

namespace {
std::map<std::pair<const Field*, const Field*>, std::unique_ptr<Embedding>>& embedding_registry() {
  static std::map<std::pair<const Field*, const Field*>, std::unique_ptr<Embedding>> reg;
  return reg;
}
}  // namespace

const Embedding& Embedding::get(const FieldPtr& sub, const FieldPtr& sup) {
  if (sub->characteristic() != sup->characteristic()) throw Error("embedding: characteristic mismatch");
  if (sup->degree() % sub->degree() != 0)
    throw Error("embedding: degree " + std::to_string(sub->degree()) + " does not divide " +
                std::to_string(sup->degree()));
  std::lock_guard<std::mutex> lock(field_mutex());
  auto& reg = embedding_registry();
  auto key = std::make_pair(sub.get(), sup.get());
  auto it = reg.find(key);
  if (it == reg.end()) it = reg.emplace(key, std::unique_ptr<Embedding>(new Embedding(sub, sup))).first;
  return *it->second;
}

Embedding::Embedding(FieldPtr sub, FieldPtr sup) : sub_(std::move(sub)), sup_(std::move(sup)) {
  const uint32_t p = sub_->characteristic();
  if (sub_->degree() == 1) {
    gen_image_ = 1;
  } else {
    // First root (enumeration order) of the subfield modulus in sup.
    const auto& m = sub_->modulus();
    gen_image_ = UINT32_MAX;
    for (uint32_t x = 0; x < sup_->size(); ++x) {
      uint32_t acc = 0;
      for (size_t i = m.size(); i-- > 0;) {
        acc = sup_->mul_idx(acc, x);
        acc = sup_->add_idx(acc, sup_->scalar_mul_idx(m[i], 1));
      }
      if (acc == 0) {
        gen_image_ = x;
        break;
      }
    }
    if (gen_image_ == UINT32_MAX) throw Error("embedding: no root of modulus found (internal)");
  }

  fwd_.resize(sub_->size());
  rev_.assign(sup_->size(), 0);
  for (uint32_t x = 0; x < sub_->size(); ++x) {
    uint32_t v = x, acc = 0;
    // Horner on base-p digits of x, from the top coefficient down.
    std::vector<uint32_t> c(sub_->degree());
    for (uint32_t i = 0; i < sub_->degree(); ++i) {
      c[i] = v % p;
      v /= p;
    }
    for (size_t i = c.size(); i-- > 0;) {
      acc = sup_->mul_idx(acc, gen_image_);
      acc = sup_->add_idx(acc, sup_->scalar_mul_idx(c[i], 1));
    }
    fwd_[x] = acc;
    rev_[acc] = x + 1;
  }
}

Element Embedding::generator_image() const { return Element(sup_.get(), gen_image_); }

Element Embedding::apply(const Element& x) const {
  if (x.field_ptr() != sub_.get()) throw Error("embedding: element not in source field");
  return Element(sup_.get(), fwd_[x.index()]);
}

std::optional<uint32_t> Embedding::section_idx(uint32_t idx) const {
  if (idx >= rev_.size() || rev_[idx] == 0) return std::nullopt;
  return rev_[idx] - 1;
}

std::optional<Element> Embedding::section(const Element& y) const {
  if (y.field_ptr() != sup_.get()) throw Error("embedding: element not in target field");
  auto s = section_idx(y.index());
  if (!s) return std::nullopt;
  return Element(sub_.get(), *s);
}

std::pair<Element, Element> rel_trace_norm(const Element& x, const FieldPtr& sub) {
  const Field* supf = x.field_ptr();
  if (!supf) throw Error("rel_trace_norm: element has no field");
  FieldPtr sup = Field::get(supf->characteristic(), supf->degree());
  const Embedding& emb = Embedding::get(sub, sup);
  uint32_t dd = sup->degree() / sub->degree();
  uint64_t qs = sub->size();
  uint32_t tr = 0, nm = 1, cur = x.index();
  for (uint32_t i = 0; i < dd; ++i) {
    tr = sup->add_idx(tr, cur);
    nm = sup->mul_idx(nm, cur);
    // cur -> cur^{q_sub}
    uint32_t e = 0;
    uint64_t t = qs;
    while (t > 1) {
      t /= sub->characteristic();
      ++e;
    }
    cur = sup->frobenius_idx(cur, e);
  }
  auto trs = emb.section_idx(tr);
  auto nms = emb.section_idx(nm);
  if (!trs || !nms) throw Error("rel_trace_norm: value not in subfield (internal)");
  return {Element(sub.get(), *trs), Element(sub.get(), *nms)};
}

uint64_t dlog_bsgs(const Element& x, const Element& base) {
  if (x.field_ptr() != base.field_ptr()) throw Error("dlog: field mismatch");
  const Field& f = x.field();
  if (x.is_zero()) throw Error("dlog of zero");
  if (base.is_zero()) throw Error("dlog base is zero");
  uint64_t ord = f.size() - 1;
  // Verify the base generates the full multiplicative group.
  for (uint64_t r : prime_factors_u64(ord))
    if (f.pow_idx(base.index(), ord / r) == 1) throw Error("dlog base is not a generator");

  uint64_t m = uint64_t(std::ceil(std::sqrt(double(ord))));
  if (m == 0) m = 1;
  std::unordered_map<uint32_t, uint64_t> baby;
  baby.reserve(size_t(m) * 2);
  uint32_t cur = 1;
  for (uint64_t j = 0; j < m; ++j) {
    baby.emplace(cur, j);
    cur = f.mul_idx(cur, base.index());
  }
  // giant step: base^{-m}
  uint32_t giant = f.inv_idx(f.pow_idx(base.index(), m));
  uint32_t y = x.index();
  for (uint64_t i = 0; i <= ord / m + 1; ++i) {
    auto it = baby.find(y);
    if (it != baby.end()) return (i * m + it->second) % ord;
    y = f.mul_idx(y, giant);
  }
  throw Error("dlog: not found (internal)");
}

// --- parsing ---

FieldPtr parse_field_descriptor(const std::string& s) {
  size_t caret = s.find('^');
  try {
    if (caret == std::string::npos) return Field::get(uint32_t(std::stoul(s)), 1);
    uint32_t p = uint32_t(std::stoul(s.substr(0, caret)));
    uint32_t k = uint32_t(std::stoul(s.substr(caret + 1)));
    return Field::get(p, k);
  } catch (const std::invalid_argument&) {
    throw Error("bad field descriptor: " + s);
  } catch (const std::out_of_range&) {
    throw Error("bad field descriptor: " + s);
  }
}

namespace {

struct ElemParser {
  const std::string& s;
  size_t pos = 0;
  const FieldPtr& f;

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
      throw Error("expected integer in element text: " + s);
    uint64_t v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      v = v * 10 + (s[pos] - '0');
      ++pos;
    }
    return v;
  }

  Element parse_factor() {
    skip_ws();
    if (pos >= s.size()) throw Error("unexpected end of element text: " + s);
    if (s[pos] == 'g') {
      ++pos;
      uint64_t e = 1;
      if (eat('^')) e = parse_uint();
      return f->gen().pow(e);
    }
    if (std::isdigit(static_cast<unsigned char>(s[pos]))) {
      uint64_t v = parse_uint() % f->characteristic();
      return Element(f.get(), f->scalar_mul_idx(uint32_t(v), 1));
    }
    if (s[pos] == '(') {
      ++pos;
      Element e = parse_expr();
      if (!eat(')')) throw Error("missing ')' in element text: " + s);
      return e;
    }
    throw Error(std::string("unexpected character '") + s[pos] + "' in element text: " + s);
  }

  Element parse_term() {
    Element acc = parse_factor();
    while (true) {
      skip_ws();
      if (eat('*')) {
        acc = acc * parse_factor();
      } else if (pos < s.size() && (s[pos] == 'g' || s[pos] == '(')) {
        acc = acc * parse_factor();  // implicit product like "2g"
      } else {
        break;
      }
    }
    return acc;
  }

  Element parse_expr() {
    skip_ws();
    bool neg = false;
    if (eat('-')) neg = true;
    Element acc = parse_term();
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

Element parse_element(const FieldPtr& f, const std::string& s) {
  ElemParser p{s, 0, f};
  Element e = p.parse_expr();
  p.skip_ws();
  if (p.pos != s.size()) throw Error("trailing characters in element text: " + s);
  return e;
}

}  // namespace charsum
