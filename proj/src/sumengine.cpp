#include "charsum/sumengine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace charsum {

namespace {

std::atomic<uint64_t> g_eval_budget{10'000'000};

// Compiled polynomial over an enumeration field, with coefficients already
// embedded; hot-path evaluation on raw indexes.
struct CompiledPoly {
  uint32_t nvars = 1;
  std::vector<uint32_t> dense;  // univariate
  std::vector<std::pair<std::vector<uint32_t>, uint32_t>> sparse;

  static CompiledPoly make(const Poly& f, const Embedding* up) {
    CompiledPoly c;
    c.nvars = f.nvars();
    if (c.nvars == 1) {
      c.dense = f.dense1();
      if (up)
        for (auto& v : c.dense) v = up->apply_idx(v);
    } else {
      for (const auto& [e, v] : f.terms()) c.sparse.emplace_back(e, up ? up->apply_idx(v) : v);
    }
    return c;
  }

  uint32_t eval(const Field& F, const uint32_t* pt) const {
    if (nvars == 1) {
      uint32_t acc = 0;
      for (size_t i = dense.size(); i-- > 0;) acc = F.add_idx(F.mul_idx(acc, pt[0]), dense[i]);
      return acc;
    }
    uint32_t acc = 0;
    for (const auto& [e, v] : sparse) {
      uint32_t t = v;
      for (uint32_t i = 0; i < nvars; ++i)
        if (e[i]) t = F.mul_idx(t, F.pow_idx(pt[i], e[i]));
      acc = F.add_idx(acc, t);
    }
    return acc;
  }
};

// Relative norm/trace maps from a big field down to a subfield, as tables.
struct DownMaps {
  std::vector<uint32_t> norm;   // big index -> sub index
  std::vector<uint32_t> trace;  // big index -> sub index
};

const DownMaps& down_maps(const FieldPtr& sub, const FieldPtr& big) {
  static std::map<std::pair<const Field*, const Field*>, DownMaps> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(sub.get(), big.get());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  DownMaps maps;
  uint32_t m = big->degree() / sub->degree();
  maps.norm.resize(big->size());
  maps.trace.resize(big->size());
  if (sub.get() == big.get()) {
    for (uint32_t x = 0; x < big->size(); ++x) maps.norm[x] = maps.trace[x] = x;
  } else {
    const Embedding& emb = Embedding::get(sub, big);
    for (uint32_t x = 0; x < big->size(); ++x) {
      uint32_t nrm = 1, tr = 0, cur = x;
      for (uint32_t i = 0; i < m; ++i) {
        nrm = big->mul_idx(nrm, cur);
        tr = big->add_idx(tr, cur);
        cur = big->frobenius_idx(cur, sub->degree());
      }
      auto ns = emb.section_idx(nrm);
      auto ts = emb.section_idx(tr);
      if (!ns || !ts) throw Error("norm/trace escaped the subfield (internal)");
      maps.norm[x] = *ns;
      maps.trace[x] = *ts;
    }
  }
  return cache.emplace(key, std::move(maps)).first->second;
}

uint64_t pow_u64(uint64_t b, uint32_t e) {
  uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

void check_budget(uint64_t points) {
  if (points > g_eval_budget.load())
    throw Error("enumeration of " + std::to_string(points) + " points exceeds the evaluation budget");
}

// Odometer over [0, radix)^n; fn(pt) per tuple. Chunked over the leading
// digit and merged in order, so the accumulation is deterministic.
template <typename Partial, typename Fn>
Partial enumerate_points(uint32_t radix, uint32_t n, Partial init, Fn&& fn) {
  uint64_t total = pow_u64(radix, n);
  check_budget(total);
  Partial acc = std::move(init);
  std::vector<uint32_t> pt(n, 0);
  for (uint64_t code = 0; code < total; ++code) {
    uint64_t v = code;
    for (uint32_t i = 0; i < n; ++i) {
      pt[i] = uint32_t(v % radix);
      v /= radix;
    }
    fn(acc, pt.data());
  }
  return acc;
}

// One multiplicative or additive factor prepared for the enumeration field.
struct KummerEval {
  CompiledPoly f;
  const MultChar* chi;
};
struct ASEval {
  CompiledPoly num, den;
  const AddChar* psi;
};

struct SummandKernel {
  const Field* enum_field = nullptr;
  uint32_t n = 1;
  uint32_t N = 1;
  CompiledPoly exclusion;
  std::vector<KummerEval> kummer;
  std::optional<ASEval> as;
  const std::vector<uint32_t>* norm_down = nullptr;   // null = identity
  const std::vector<uint32_t>* trace_down = nullptr;

  // Returns false when the point is outside the domain; `zero` marks a
  // zero summand (chi at 0), `expo` the zeta_N exponent otherwise.
  bool summand(const uint32_t* pt, bool& zero, uint32_t& expo) const {
    const Field& F = *enum_field;
    if (exclusion.eval(F, pt) == 0) return false;
    uint64_t e = 0;
    zero = false;
    uint32_t den_v = 1;
    if (as) {
      den_v = as->den.eval(F, pt);
      if (den_v == 0) return false;
    }
    for (const auto& kf : kummer) {
      uint32_t v = kf.f.eval(F, pt);
      if (norm_down) v = (*norm_down)[v];
      auto ve = kf.chi->value_exponent_idx(v);
      if (!ve) {
        zero = true;
        continue;
      }
      e += *ve;
    }
    if (as && !zero) {
      uint32_t v = F.mul_idx(as->num.eval(F, pt), F.inv_idx(den_v));
      if (trace_down) v = (*trace_down)[v];
      e += *as->psi->value_exponent_idx(v);
    }
    expo = uint32_t(e % N);
    return true;
  }
};

SummandKernel make_incomplete_kernel(const SheafSpec& s, std::vector<AddChar>& psi_store) {
  SummandKernel k;
  k.enum_field = s.ext_field().get();
  k.n = s.n();
  k.N = s.cyc_order();
  k.exclusion = CompiledPoly::make(s.exclusion(), nullptr);
  for (const auto& kf : s.kummer()) k.kummer.push_back({CompiledPoly::make(kf.f, nullptr), &kf.chi});
  if (s.has_as()) {
    psi_store.push_back(s.as_factor()->psi);
    k.as = ASEval{CompiledPoly::make(s.as_factor()->f.num(), nullptr),
                  CompiledPoly::make(s.as_factor()->f.den(), nullptr), &psi_store.back()};
  }
  return k;
}

SumResult finish(CycValue acc, uint64_t pts) {
  SumResult r;
  r.exact = acc.canonical();
  auto c = r.exact.eval();
  r.value = {double(c.real()), double(c.imag())};
  r.abs_value = double(r.exact.abs());
  r.abs_error = double(r.exact.abs_error());
  r.points = pts;
  return r;
}

}  // namespace

uint64_t eval_budget() { return g_eval_budget.load(); }
void set_eval_budget(uint64_t budget) { g_eval_budget.store(budget); }

SumResult incomplete_sum(const SheafSpec& s) {
  std::vector<AddChar> psi_store;
  SummandKernel k = make_incomplete_kernel(s, psi_store);
  const Embedding& emb = Embedding::get(s.base_field(), s.ext_field());

  struct Acc {
    CycValue sum;
    uint64_t pts = 0;
    uint64_t code = 0;
    std::vector<std::pair<uint64_t, int64_t>> log;
  };
  Acc out = enumerate_points(s.q(), s.n(), Acc{CycValue::zero(k.N), 0, 0, {}},
                             [&](Acc& a, const uint32_t* pt) {
                               uint64_t code = a.code++;
                               std::vector<uint32_t> mapped(k.n);
                               for (uint32_t i = 0; i < k.n; ++i) mapped[i] = emb.apply_idx(pt[i]);
                               bool zero;
                               uint32_t e;
                               if (!k.summand(mapped.data(), zero, e)) return;
                               ++a.pts;
                               if (a.log.size() < 32) a.log.emplace_back(code, zero ? -1 : int64_t(e));
                               if (!zero) a.sum.add_root(e);
                             });
  SumResult r = finish(std::move(out.sum), out.pts);
  r.summand_log = std::move(out.log);
  return r;
}

SumResult complete_sum(const SheafSpec& s, uint32_t m) {
  if (m < 1) throw Error("complete_sum needs m >= 1");
  FieldPtr big = Field::get(s.p(), s.q_exp() * s.d() * m);
  const Embedding* up = nullptr;
  if (big.get() != s.ext_field().get()) up = &Embedding::get(s.ext_field(), big);

  std::vector<AddChar> psi_store;
  SummandKernel k;
  k.enum_field = big.get();
  k.n = s.n();
  k.N = s.cyc_order();
  k.exclusion = CompiledPoly::make(s.exclusion(), up);
  for (const auto& kf : s.kummer()) k.kummer.push_back({CompiledPoly::make(kf.f, up), &kf.chi});
  if (s.has_as()) {
    psi_store.push_back(s.as_factor()->psi);
    k.as = ASEval{CompiledPoly::make(s.as_factor()->f.num(), up),
                  CompiledPoly::make(s.as_factor()->f.den(), up), &psi_store.back()};
  }
  const DownMaps& down = down_maps(s.ext_field(), big);
  if (m > 1 || big.get() != s.ext_field().get()) {
    k.norm_down = &down.norm;
    k.trace_down = &down.trace;
  }

  struct Acc {
    CycValue sum;
    uint64_t pts = 0;
    uint64_t code = 0;
    std::vector<std::pair<uint64_t, int64_t>> log;
  };
  Acc out = enumerate_points(big->size(), s.n(), Acc{CycValue::zero(k.N), 0, 0, {}},
                             [&](Acc& a, const uint32_t* pt) {
                               uint64_t code = a.code++;
                               bool zero;
                               uint32_t e;
                               if (!k.summand(pt, zero, e)) return;
                               ++a.pts;
                               if (a.log.size() < 32) a.log.emplace_back(code, zero ? -1 : int64_t(e));
                               if (!zero) a.sum.add_root(e);
                             });
  SumResult r = finish(std::move(out.sum), out.pts);
  r.summand_log = std::move(out.log);
  return r;
}

IdentityReport verify_transfer_identity(const SheafSpec& s) {
  if (s.n() > 2) throw Error("verify_transfer_identity: n <= 2 only");
  PullbackSpec pb = transfer_pullback(s);
  const Embedding& emb = Embedding::get(s.base_field(), s.ext_field());
  const Field& F = *s.ext_field();
  const uint32_t N = s.cyc_order();
  const uint32_t d = s.d();

  CompiledPoly excl = CompiledPoly::make(pb.exclusion, nullptr);

  struct ConjK {
    CompiledPoly f;
    MultChar chi;
  };
  struct ConjAS {
    CompiledPoly num, den;
    AddChar psi;
  };
  std::vector<std::vector<ConjK>> conj_kummer;
  std::vector<CompiledPoly> norm_forms;
  for (const auto& kp : pb.kummer) {
    std::vector<ConjK> cs;
    for (const auto& [chi, f] : kp.conjugates) cs.push_back({CompiledPoly::make(f, nullptr), chi});
    conj_kummer.push_back(std::move(cs));
    norm_forms.push_back(CompiledPoly::make(kp.norm_form, nullptr));
  }
  std::vector<ConjAS> conj_as;
  std::optional<CompiledPoly> trace_num, trace_den;
  if (pb.as_part) {
    for (const auto& [psi, f] : pb.as_part->conjugates)
      conj_as.push_back({CompiledPoly::make(f.num(), nullptr), CompiledPoly::make(f.den(), nullptr), psi});
    trace_num = CompiledPoly::make(pb.as_part->trace_form.num(), nullptr);
    trace_den = CompiledPoly::make(pb.as_part->trace_form.den(), nullptr);
  }
  std::vector<CompiledPoly> base_kummer;
  for (const auto& kf : s.kummer()) base_kummer.push_back(CompiledPoly::make(kf.f, nullptr));
  std::optional<CompiledPoly> base_num, base_den;
  if (s.has_as()) {
    base_num = CompiledPoly::make(s.as_factor()->f.num(), nullptr);
    base_den = CompiledPoly::make(s.as_factor()->f.den(), nullptr);
  }

  IdentityReport rep;
  enumerate_points(s.q(), s.n(), 0, [&](int&, const uint32_t* pt) {
    std::vector<uint32_t> y(s.n());
    for (uint32_t i = 0; i < s.n(); ++i) y[i] = emb.apply_idx(pt[i]);
    if (excl.eval(F, y.data()) == 0) return;

    // direct (incomplete) summand
    bool zero_inc = false;
    uint64_t e_inc = 0;
    for (uint32_t j = 0; j < base_kummer.size(); ++j) {
      auto ve = s.kummer()[j].chi.value_exponent_idx(base_kummer[j].eval(F, y.data()));
      if (!ve)
        zero_inc = true;
      else
        e_inc += *ve;
    }
    if (base_num) {
      uint32_t dv = base_den->eval(F, y.data());
      if (dv == 0) return;  // outside the domain of f_{k+1}
      uint32_t v = F.mul_idx(base_num->eval(F, y.data()), F.inv_idx(dv));
      e_inc += *s.as_factor()->psi.value_exponent_idx(v);
    }

    // conjugate-list summand
    bool zero_cj = false;
    uint64_t e_cj = 0;
    for (const auto& cs : conj_kummer)
      for (const auto& c : cs) {
        auto ve = c.chi.value_exponent_idx(c.f.eval(F, y.data()));
        if (!ve)
          zero_cj = true;
        else
          e_cj += *ve;
      }
    for (const auto& c : conj_as) {
      uint32_t dv = c.den.eval(F, y.data());
      if (dv == 0) return;
      uint32_t v = F.mul_idx(c.num.eval(F, y.data()), F.inv_idx(dv));
      e_cj += *c.psi.value_exponent_idx(v);
    }

    // norm/trace-form summand
    bool zero_nf = false;
    uint64_t e_nf = 0;
    for (uint32_t j = 0; j < norm_forms.size(); ++j) {
      auto ve = pb.kummer[j].norm_chi.value_exponent_idx(norm_forms[j].eval(F, y.data()));
      if (!ve)
        zero_nf = true;
      else
        e_nf += *ve;
    }
    if (trace_num) {
      uint32_t dv = trace_den->eval(F, y.data());
      if (dv == 0) return;
      uint32_t v = F.mul_idx(trace_num->eval(F, y.data()), F.inv_idx(dv));
      e_nf += *pb.as_part->trace_psi.value_exponent_idx(v);
    }

    ++rep.points_checked;
    bool ok;
    if (zero_inc || zero_cj || zero_nf) {
      ok = zero_inc && zero_cj && zero_nf;
    } else {
      uint32_t want = uint32_t((e_inc % N) * uint64_t(d) % N);
      ok = (e_cj % N) == want && (e_nf % N) == want;
    }
    if (!ok) {
      ++rep.violations;
      if (rep.details.size() < 8) {
        std::ostringstream os;
        os << "point (";
        for (uint32_t i = 0; i < s.n(); ++i) os << (i ? "," : "") << F.element_str(y[i]);
        os << "): conj=" << (zero_cj ? -1 : int64_t(e_cj % N))
           << " normform=" << (zero_nf ? -1 : int64_t(e_nf % N)) << " direct^d="
           << (zero_inc ? -1 : int64_t((e_inc % N) * uint64_t(d) % N));
        rep.details.push_back(os.str());
      }
    }
  });
  return rep;
}

IdentityReport verify_pullback_forms(const SheafSpec& s, uint32_t m) {
  PullbackSpec pb = transfer_pullback(s);
  FieldPtr big = Field::get(s.p(), s.q_exp() * s.d() * m);
  const Embedding* up = nullptr;
  if (big.get() != s.ext_field().get()) up = &Embedding::get(s.ext_field(), big);
  const Field& F = *big;
  const uint32_t N = s.cyc_order();
  const DownMaps& down = down_maps(s.ext_field(), big);

  CompiledPoly excl = CompiledPoly::make(pb.exclusion, up);

  struct ConjK {
    CompiledPoly f;
    MultChar chi;
  };
  struct ConjAS {
    CompiledPoly num, den;
    AddChar psi;
  };
  std::vector<std::vector<ConjK>> conj_kummer;
  std::vector<CompiledPoly> norm_forms;
  for (const auto& kp : pb.kummer) {
    std::vector<ConjK> cs;
    for (const auto& [chi, f] : kp.conjugates) cs.push_back({CompiledPoly::make(f, up), chi});
    conj_kummer.push_back(std::move(cs));
    norm_forms.push_back(CompiledPoly::make(kp.norm_form, up));
  }
  std::vector<ConjAS> conj_as;
  std::optional<CompiledPoly> trace_num, trace_den;
  if (pb.as_part) {
    for (const auto& [psi, f] : pb.as_part->conjugates)
      conj_as.push_back({CompiledPoly::make(f.num(), up), CompiledPoly::make(f.den(), up), psi});
    trace_num = CompiledPoly::make(pb.as_part->trace_form.num(), up);
    trace_den = CompiledPoly::make(pb.as_part->trace_form.den(), up);
  }

  IdentityReport rep;
  enumerate_points(big->size(), s.n(), 0, [&](int&, const uint32_t* pt) {
    if (excl.eval(F, pt) == 0) return;

    bool zero_cj = false;
    uint64_t e_cj = 0;
    for (uint32_t j = 0; j < conj_kummer.size(); ++j)
      for (const auto& c : conj_kummer[j]) {
        uint32_t v = down.norm[c.f.eval(F, pt)];
        auto ve = c.chi.value_exponent_idx(v);
        if (!ve)
          zero_cj = true;
        else
          e_cj += *ve;
      }
    for (const auto& c : conj_as) {
      uint32_t dv = c.den.eval(F, pt);
      if (dv == 0) return;
      uint32_t v = down.trace[F.mul_idx(c.num.eval(F, pt), F.inv_idx(dv))];
      e_cj += *c.psi.value_exponent_idx(v);
    }

    bool zero_nf = false;
    uint64_t e_nf = 0;
    for (uint32_t j = 0; j < norm_forms.size(); ++j) {
      uint32_t v = down.norm[norm_forms[j].eval(F, pt)];
      auto ve = pb.kummer[j].norm_chi.value_exponent_idx(v);
      if (!ve)
        zero_nf = true;
      else
        e_nf += *ve;
    }
    if (trace_num) {
      uint32_t dv = trace_den->eval(F, pt);
      if (dv == 0) return;
      uint32_t v = down.trace[F.mul_idx(trace_num->eval(F, pt), F.inv_idx(dv))];
      e_nf += *pb.as_part->trace_psi.value_exponent_idx(v);
    }

    ++rep.points_checked;
    bool ok = (zero_cj || zero_nf) ? (zero_cj && zero_nf) : (e_cj % N) == (e_nf % N);
    if (!ok) {
      ++rep.violations;
      if (rep.details.size() < 8) {
        std::ostringstream os;
        os << "level " << m << " point idx " << pt[0] << ": conj=" << (zero_cj ? -1 : int64_t(e_cj % N))
           << " normform=" << (zero_nf ? -1 : int64_t(e_nf % N));
        rep.details.push_back(os.str());
      }
    }
  });
  return rep;
}

Triviality triviality_oracle(const SheafSpec& s, uint32_t m_max) {
  for (uint32_t m = 1; m <= m_max; ++m) {
    SumResult r = complete_sum(s, m);
    if (double(r.abs_value) < double(r.points) - 0.5) return Triviality::NONTRIVIAL;
  }
  return Triviality::TRIVIAL_EVIDENCE;
}

Triviality triviality_oracle(const PullbackSpec& s, uint32_t m_max) {
  return triviality_oracle(s.as_sheaf_spec(), m_max);
}

// --- L-polynomial fitting ---

std::vector<std::complex<double>> complex_roots(const std::vector<std::complex<long double>>& coeffs,
                                                std::vector<double>* errors) {
  using C = std::complex<long double>;
  size_t deg = coeffs.size() - 1;
  std::vector<C> z(deg);
  // radius heuristic: 1 + max |c_i|
  long double radius = 1;
  for (size_t i = 0; i < deg; ++i) radius = std::max(radius, std::abs(coeffs[i]));
  radius = 1 + radius;
  const long double pi = 3.14159265358979323846264338327950288L;
  for (size_t i = 0; i < deg; ++i) {
    long double theta = 2 * pi * i / deg + 0.4L;
    z[i] = radius * C{std::cos(theta), std::sin(theta)};
  }
  auto eval = [&](C x) {
    C acc = 0;
    for (size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
  };
  for (int iter = 0; iter < 500; ++iter) {
    long double shift = 0;
    for (size_t i = 0; i < deg; ++i) {
      C denom = 1;
      for (size_t j = 0; j < deg; ++j)
        if (j != i) denom *= z[i] - z[j];
      C corr = eval(z[i]) / denom;
      z[i] -= corr;
      shift = std::max(shift, std::abs(corr));
    }
    if (shift < 1e-30L) break;
  }
  std::vector<std::complex<double>> out(deg);
  if (errors) errors->assign(deg, 0);
  for (size_t i = 0; i < deg; ++i) {
    out[i] = {double(z[i].real()), double(z[i].imag())};
    if (errors) {
      C denom = 1;
      for (size_t j = 0; j < deg; ++j)
        if (j != i) denom *= z[i] - z[j];
      (*errors)[i] = double(std::abs(eval(z[i]) / denom)) * deg;
    }
  }
  // deterministic order: by argument then modulus
  std::vector<size_t> order(deg);
  for (size_t i = 0; i < deg; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    double ra = std::abs(out[a]), rb = std::abs(out[b]);
    if (std::abs(ra - rb) > 1e-12) return ra < rb;
    return std::arg(out[a]) < std::arg(out[b]);
  });
  std::vector<std::complex<double>> sorted(deg);
  std::vector<double> serr(deg);
  for (size_t i = 0; i < deg; ++i) {
    sorted[i] = out[order[i]];
    if (errors) serr[i] = (*errors)[order[i]];
  }
  if (errors) *errors = std::move(serr);
  return sorted;
}

LPolyFit lpoly_fit(const SheafSpec& s, int64_t B) {
  if (B < 0) throw Error("lpoly_fit needs B >= 0");
  const uint32_t N = s.cyc_order();
  LPolyFit fit;
  fit.betti = B;

  // power sums p_m = -S_m for m = 1..B+2
  for (int64_t m = 1; m <= B + 2; ++m)
    fit.power_sums.push_back((-complete_sum(s, uint32_t(m)).exact).canonical());

  // Newton: k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i
  std::vector<CycValue> e(size_t(B) + 1, CycValue::zero(N));
  e[0] = CycValue::integer(N, 1);
  for (int64_t k = 1; k <= B; ++k) {
    CycValue acc = CycValue::zero(N);
    for (int64_t i = 1; i <= k; ++i) {
      CycValue term = e[k - i] * fit.power_sums[i - 1];
      acc = (i % 2 == 1) ? acc + term : acc - term;
    }
    e[k] = acc.divide_exact(k);
  }

  // predictions at m = B+1, B+2 must vanish exactly
  for (int64_t k = B + 1; k <= B + 2; ++k) {
    CycValue acc = fit.power_sums[k - 1];
    for (int64_t i = 1; i <= B; ++i) {
      CycValue term = e[i] * fit.power_sums[k - i - 1];
      acc = (i % 2 == 1) ? acc - term : acc + term;
    }
    if (!acc.is_zero())
      throw Error("Newton prediction at m=" + std::to_string(k) +
                  " is nonzero: wrong Betti number (GOS/Swan inconsistency)");
  }

  // P(t) = sum (-1)^k e_k t^k
  for (int64_t k = 0; k <= B; ++k)
    fit.coeffs.push_back((k % 2 == 0 ? e[k] : -e[k]).canonical());
  // Frobenius is invertible, so det(1 - Ft) has exact degree B.
  if (B > 0 && fit.coeffs[size_t(B)].is_zero())
    throw Error("L-polynomial leading coefficient vanishes: wrong Betti number (GOS/Swan inconsistency)");

  double sqrt_qd = std::sqrt(double(s.ext_field()->size()));
  if (B == 0) {
    fit.bounded = true;
    fit.pure = true;
    return fit;
  }

  // inverse roots: roots of t^B P(1/t) = sum_k (-1)^k e_k t^{B-k}, monic
  std::vector<std::complex<long double>> rc(size_t(B) + 1);
  for (int64_t k = 0; k <= B; ++k) rc[B - k] = fit.coeffs[k].eval();
  fit.inverse_roots = complex_roots(rc, &fit.root_errors);
  fit.max_root_abs = 0;
  fit.bounded = true;
  fit.pure = true;
  for (const auto& a : fit.inverse_roots) {
    double r = std::abs(a);
    fit.max_root_abs = std::max(fit.max_root_abs, r);
    if (r > sqrt_qd + fit.tol) fit.bounded = false;
    if (std::abs(r - sqrt_qd) > fit.tol) fit.pure = false;
  }
  return fit;
}

}  // namespace charsum
