#include "charsum/chars.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace charsum {

namespace {

std::mutex& cyc_mutex() {
  static std::mutex m;
  return m;
}

// Exact division of integer polynomials (divisor monic); returns quotient.
std::vector<int64_t> zdiv_exact(std::vector<int64_t> num, const std::vector<int64_t>& den) {
  while (!num.empty() && num.back() == 0) num.pop_back();
  if (num.empty()) return {};
  if (num.size() < den.size()) throw Error("cyclotomic division underflow (internal)");
  std::vector<int64_t> q(num.size() - den.size() + 1, 0);
  for (size_t shift = q.size(); shift-- > 0;) {
    int64_t c = num[shift + den.size() - 1];
    q[shift] = c;
    if (c != 0)
      for (size_t j = 0; j < den.size(); ++j) num[shift + j] -= c * den[j];
  }
  for (auto v : num)
    if (v != 0) throw Error("cyclotomic division not exact (internal)");
  return q;
}

}  // namespace

const std::vector<int64_t>& cyclotomic_polynomial(uint32_t n) {
  static std::map<uint32_t, std::vector<int64_t>> cache;
  std::lock_guard<std::mutex> lock(cyc_mutex());
  auto compute = [](auto&& self, uint32_t m) -> const std::vector<int64_t>& {
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    std::vector<int64_t> poly;
    if (m == 1) {
      poly = {-1, 1};
    } else {
      // x^m - 1 divided by all Phi_d, d | m, d < m.
      std::vector<int64_t> num(m + 1, 0);
      num[0] = -1;
      num[m] = 1;
      for (uint32_t d = 1; d < m; ++d)
        if (m % d == 0) num = zdiv_exact(std::move(num), self(self, d));
      poly = std::move(num);
    }
    return cache.emplace(m, std::move(poly)).first->second;
  };
  return compute(compute, n);
}

// --- CycValue ---

CycValue CycValue::integer(uint32_t order, int64_t v) {
  CycValue r(order);
  r.c_[0] = v;
  return r;
}

CycValue CycValue::root(uint32_t order, uint32_t exponent, int64_t mult) {
  CycValue r(order);
  r.c_[exponent % order] = mult;
  return r;
}

static void check_same_order(const CycValue& a, const CycValue& b) {
  if (a.order() != b.order()) throw Error("cyclotomic order mismatch");
}

CycValue CycValue::operator+(const CycValue& o) const {
  check_same_order(*this, o);
  CycValue r(order_);
  for (uint32_t i = 0; i < order_; ++i) r.c_[i] = c_[i] + o.c_[i];
  return r;
}

CycValue& CycValue::operator+=(const CycValue& o) {
  check_same_order(*this, o);
  for (uint32_t i = 0; i < order_; ++i) c_[i] += o.c_[i];
  return *this;
}

CycValue CycValue::operator-(const CycValue& o) const {
  check_same_order(*this, o);
  CycValue r(order_);
  for (uint32_t i = 0; i < order_; ++i) r.c_[i] = c_[i] - o.c_[i];
  return r;
}

CycValue CycValue::operator-() const {
  CycValue r(order_);
  for (uint32_t i = 0; i < order_; ++i) r.c_[i] = -c_[i];
  return r;
}

CycValue CycValue::operator*(const CycValue& o) const {
  check_same_order(*this, o);
  CycValue r(order_);
  for (uint32_t i = 0; i < order_; ++i) {
    if (c_[i] == 0) continue;
    for (uint32_t j = 0; j < order_; ++j) {
      if (o.c_[j] == 0) continue;
      uint32_t k = i + j;
      if (k >= order_) k -= order_;
      r.c_[k] += c_[i] * o.c_[j];
    }
  }
  return r;
}

CycValue CycValue::canonical() const {
  const auto& phi = cyclotomic_polynomial(order_);
  std::vector<int64_t> rem = c_;
  size_t deg_phi = phi.size() - 1;
  for (size_t i = rem.size(); i-- > deg_phi && deg_phi > 0;) {
    int64_t c = rem[i];
    if (c == 0) continue;
    rem[i] = 0;
    size_t shift = i - deg_phi;
    for (size_t j = 0; j < deg_phi; ++j) rem[shift + j] -= c * phi[j];
  }
  if (deg_phi == 0) std::fill(rem.begin(), rem.end(), 0);
  CycValue r(order_);
  r.c_ = std::move(rem);
  return r;
}

bool CycValue::operator==(const CycValue& o) const {
  if (order_ != o.order_) return false;
  if (c_ == o.c_) return true;
  return canonical().c_ == o.canonical().c_;
}

bool CycValue::is_zero() const {
  CycValue c = canonical();
  return std::all_of(c.c_.begin(), c.c_.end(), [](int64_t v) { return v == 0; });
}

std::optional<int64_t> CycValue::as_integer() const {
  CycValue c = canonical();
  for (uint32_t i = 1; i < order_; ++i)
    if (c.c_[i] != 0) return std::nullopt;
  return c.c_[0];
}

CycValue CycValue::conj() const {
  CycValue r(order_);
  for (uint32_t i = 0; i < order_; ++i) r.c_[(order_ - i) % order_] = c_[i];
  return r;
}

CycValue CycValue::divide_exact(int64_t k) const {
  if (k == 0) throw Error("division by zero");
  CycValue c = canonical();
  for (auto& v : c.c_) {
    if (v % k != 0) throw Error("cyclotomic value not divisible by " + std::to_string(k));
    v /= k;
  }
  return c;
}

namespace {
const std::vector<std::complex<long double>>& root_table(uint32_t n) {
  static std::map<uint32_t, std::vector<std::complex<long double>>> cache;
  std::lock_guard<std::mutex> lock(cyc_mutex());
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::vector<std::complex<long double>> t(n);
    const long double two_pi = 2.0L * 3.14159265358979323846264338327950288L;
    for (uint32_t r = 0; r < n; ++r)
      t[r] = {std::cos(two_pi * r / n), std::sin(two_pi * r / n)};
    it = cache.emplace(n, std::move(t)).first;
  }
  return it->second;
}
}  // namespace

std::complex<long double> CycValue::eval() const {
  const auto& roots = root_table(order_);
  std::complex<long double> s{0.0L, 0.0L};
  for (uint32_t r = 0; r < order_; ++r)
    if (c_[r] != 0) s += static_cast<long double>(c_[r]) * roots[r];
  return s;
}

long double CycValue::abs() const { return std::abs(eval()); }

long double CycValue::abs_error() const {
  long double sum = 0;
  for (auto v : c_) sum += v < 0 ? -static_cast<long double>(v) : static_cast<long double>(v);
  return sum * LDBL_EPSILON * order_;
}

std::string CycValue::str() const {
  CycValue c = canonical();
  std::ostringstream os;
  os << c.order_ << "|";
  bool first = true;
  for (uint32_t r = 0; r < c.order_; ++r) {
    if (c.c_[r] == 0) continue;
    if (!first) os << ",";
    first = false;
    os << r << ":" << c.c_[r];
  }
  if (first) os << "0:0";
  return os.str();
}

// --- character contexts ---

uint32_t cyc_order_for(const FieldPtr& field) {
  return field->characteristic() * (field->size() - 1);
}

// --- MultChar ---

MultChar::MultChar(FieldPtr field, uint32_t k_idx) : field_(std::move(field)), k_idx_(k_idx) {
  if (k_idx_ >= field_->size() - 1 && k_idx_ != 0) throw Error("character index out of range");
  cyc_n_ = cyc_order_for(field_);
}

uint32_t MultChar::order() const {
  uint32_t m = field_->size() - 1;
  return m / std::gcd(k_idx_, m);
}

MultChar MultChar::power(uint64_t e) const {
  uint32_t m = field_->size() - 1;
  return MultChar(field_, uint32_t((uint64_t(k_idx_) * (e % m)) % m));
}

MultChar MultChar::conjugate() const {
  uint32_t m = field_->size() - 1;
  return MultChar(field_, k_idx_ == 0 ? 0 : m - k_idx_);
}

std::optional<uint32_t> MultChar::value_exponent_idx(uint32_t idx) const {
  if (idx == 0) return std::nullopt;
  uint32_t m = field_->size() - 1;
  uint64_t j = field_->dlog_idx(idx);
  uint64_t e = uint64_t(k_idx_) * j % m;
  return uint32_t(e * field_->characteristic() % cyc_n_);
}

CycValue MultChar::eval(const Element& x) const {
  if (x.field_ptr() != field_.get()) throw Error("character/element field mismatch");
  auto e = value_exponent_idx(x.index());
  if (!e) return CycValue::zero(cyc_n_);
  return CycValue::root(cyc_n_, *e);
}

// --- AddChar ---

AddChar::AddChar(FieldPtr field, Element b) : field_(std::move(field)), b_(b) {
  if (b_.field_ptr() != field_.get()) throw Error("additive character twist must lie in the field");
  cyc_n_ = cyc_order_for(field_);
  const uint32_t p = field_->characteristic();
  const uint32_t k = field_->degree();
  trace_lift_.resize(field_->size());
  for (uint32_t x = 0; x < field_->size(); ++x) {
    uint32_t t = field_->mul_idx(b_.index(), x);
    uint32_t tr = 0, cur = t;
    for (uint32_t i = 0; i < k; ++i) {
      tr = field_->add_idx(tr, cur);
      cur = field_->frobenius_idx(cur, 1);
    }
    if (tr >= p) throw Error("absolute trace escaped the prime field (internal)");
    trace_lift_[x] = tr;
  }
}

std::optional<uint32_t> AddChar::value_exponent_idx(uint32_t idx) const {
  uint32_t lift = trace_lift_[idx];
  uint64_t e = uint64_t(field_->size() - 1) * lift % cyc_n_;
  return uint32_t(e);
}

CycValue AddChar::eval(const Element& x) const {
  if (x.field_ptr() != field_.get()) throw Error("character/element field mismatch");
  return CycValue::root(cyc_n_, *value_exponent_idx(x.index()));
}

}  // namespace charsum
