#include "charsum/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "charsum/grouptran.hpp"

namespace charsum {

namespace {

using nlohmann::json;

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += "\"";
  return out;
}

// Deterministic subsample: indexes 0, stride, 2*stride, ... with
// stride = ceil(total / max_take).
std::vector<uint64_t> stride_pick(uint64_t total, uint64_t max_take) {
  std::vector<uint64_t> out;
  if (total == 0 || max_take == 0) return out;
  uint64_t stride = (total + max_take - 1) / max_take;
  for (uint64_t i = 0; i < total; i += stride) out.push_back(i);
  return out;
}

// Monic polynomials of degree 1..deg_max over F, indexed globally:
// degree blocks in order, codes ascending inside a block.
uint64_t monic_count(uint64_t Q, uint32_t deg_max) {
  uint64_t total = 0, block = 1;
  for (uint32_t deg = 1; deg <= deg_max; ++deg) {
    block *= Q;
    total += block;
  }
  return total;
}

Poly monic_by_index(const FieldPtr& F, uint32_t deg_max, uint64_t index) {
  uint64_t Q = F->size(), block = 1;
  for (uint32_t deg = 1; deg <= deg_max; ++deg) {
    block *= Q;
    if (index < block) {
      std::vector<uint32_t> coeffs(deg + 1, 0);
      coeffs[deg] = 1;
      uint64_t v = index;
      for (uint32_t i = 0; i < deg; ++i) {
        coeffs[i] = uint32_t(v % Q);
        v /= Q;
      }
      return Poly::from_dense1(F, coeffs);
    }
    index -= block;
  }
  throw Error("monic index out of range (internal)");
}

struct Violations {
  uint64_t bound = 0;
  uint64_t identity = 0;
  uint64_t forms = 0;
  uint64_t oracle = 0;
  uint64_t swan = 0;
  uint64_t group = 0;
  uint64_t lpoly = 0;
  uint64_t total() const { return bound + identity + forms + oracle + swan + group + lpoly; }
};

struct SweepContext {
  json records = json::array();
  std::ostringstream csv;
  Violations viol;
  uint64_t cases = 0;
  double worst_margin = 1e300;
  double tolerance = 1e-9;
  bool check_oracle = true;
  bool check_swan = true;
  uint32_t oracle_m_max = 2;
  uint32_t oracle_retry_m_max = 2;  // diagnostic second look at higher levels
  uint64_t seed = 0;

  void csv_header() {
    csv << "case,p,q_exp,d,mode,hyp_applicable,hyp_holds,bound_coeff,bound_sqrt_arg,bound_value,"
           "abs_sum,margin,oracle,swan_point_ok,swan_total_ok,spec\n";
  }
};

void run_sweep_case(SweepContext& ctx, const SheafSpec& spec, const std::string& mode) {
  BoundReport br = bound_report(spec, ctx.seed);
  bool applicable, holds;
  BoundValue bound;
  if (mode == "kummer") {
    applicable = br.hyp_kummer.applicable;
    holds = br.hyp_kummer.holds;
    bound = br.kummer_bound;
  } else {
    applicable = true;
    holds = br.hyp_as.holds;
    bound = br.mixed_bound;
  }

  json rec;
  rec["case"] = ctx.cases;
  rec["mode"] = mode;
  rec["spec"] = spec.to_json();
  rec["hyp_applicable"] = applicable;
  rec["hyp_holds"] = holds;
  if (mode == "kummer") rec["hyp_holds_literal"] = br.hyp_kummer.holds_literal;
  rec["bound"] = {{"coeff", bound.coeff}, {"sqrt_arg", bound.sqrt_arg}, {"value", bound.value()}};

  double margin = 0;
  double abs_sum = 0;
  std::string oracle_str = "-";
  if (bound.applicable) {
    SumResult sr = incomplete_sum(spec);
    abs_sum = sr.abs_value;
    margin = bound.value() - abs_sum;
    rec["abs_sum"] = abs_sum;
    rec["margin"] = margin;
    ctx.worst_margin = std::min(ctx.worst_margin, margin);
    if (margin < -ctx.tolerance) ++ctx.viol.bound;
    if (ctx.check_oracle) {
      PullbackSpec pb = transfer_pullback(spec);
      Triviality t = triviality_oracle(pb, ctx.oracle_m_max);
      oracle_str = t == Triviality::NONTRIVIAL ? "NONTRIVIAL" : "TRIVIAL-EVIDENCE";
      rec["oracle"] = oracle_str;
      if (t != Triviality::NONTRIVIAL) {
        ++ctx.viol.oracle;
        if (ctx.oracle_retry_m_max > ctx.oracle_m_max) {
          // diagnostic only: does cancellation appear at a deeper level?
          try {
            Triviality t2 = triviality_oracle(pb, ctx.oracle_retry_m_max);
            rec["oracle_retry"] = t2 == Triviality::NONTRIVIAL ? "NONTRIVIAL" : "TRIVIAL-EVIDENCE";
          } catch (const Error&) {
            rec["oracle_retry"] = "BUDGET-EXCEEDED";
          }
        }
      }
    }
  }

  bool swan_point_ok = true;
  bool swan_total_ok = true;
  if (ctx.check_swan) {
    for (const auto& row : br.swan.rows)
      if (row.swan_exact > row.pole_bound) swan_point_ok = false;
    swan_total_ok = br.swan.total_tran <= int64_t(spec.d()) * br.swan.total_exact;
    if (!swan_point_ok || !swan_total_ok) ++ctx.viol.swan;
    rec["swan_point_ok"] = swan_point_ok;
    rec["swan_total_ok"] = swan_total_ok;
  }

  ctx.records.push_back(rec);
  ctx.csv << ctx.cases << "," << spec.p() << "," << spec.q_exp() << "," << spec.d() << "," << mode
          << "," << applicable << "," << holds << "," << bound.coeff << "," << bound.sqrt_arg << ","
          << bound.value() << ",";
  if (bound.applicable)
    ctx.csv << abs_sum << "," << margin;
  else
    ctx.csv << ",";
  ctx.csv << "," << oracle_str << "," << swan_point_ok << "," << swan_total_ok << ","
          << csv_quote(spec.canonical_text()) << "\n";
  ++ctx.cases;
}

std::vector<uint32_t> pick_chars(uint64_t Q, bool include_trivial, uint64_t max_chars) {
  std::vector<uint32_t> all;
  if (include_trivial) all.push_back(0);
  for (uint32_t k = 1; k + 1 < Q; ++k) all.push_back(k);
  std::vector<uint32_t> out;
  for (uint64_t i : stride_pick(all.size(), max_chars)) out.push_back(all[i]);
  return out;
}

// AS factor shapes used by the mixed and transfer corpora.
struct ASShape {
  std::string name;
  Poly num;
  Poly den;
};

std::vector<ASShape> as_shapes(const FieldPtr& F, const std::vector<std::string>& names,
                               uint64_t max_quads, uint64_t max_polys = 12, uint32_t deg_max = 3) {
  std::vector<ASShape> out;
  Poly t = Poly::variable(F, 1, 0);
  Poly one = Poly::constant(F, 1, F->one());
  for (const auto& nm : names) {
    if (nm == "ct") out.push_back({nm, t, one});
    else if (nm == "ct2") out.push_back({nm, t.pow(2), one});
    else if (nm == "ct3") out.push_back({nm, t.pow(3), one});
    else if (nm == "c/t") out.push_back({nm, one, t});
    else if (nm == "poly") {
      // c * (monic of degree <= deg_max) ranges over all polynomials
      for (uint64_t i : stride_pick(monic_count(F->size(), deg_max), max_polys))
        out.push_back({nm, monic_by_index(F, deg_max, i), one});
    } else if (nm == "c/quad") {
      uint64_t Q = F->size();
      for (uint64_t idx : stride_pick(Q * Q, max_quads)) {
        uint32_t a = uint32_t(idx % Q), b = uint32_t(idx / Q);
        Poly den = t.pow(2) + t.scaled(Element(F.get(), a)) + Poly::constant(F, 1, Element(F.get(), b));
        out.push_back({nm, one, den});
      }
    } else {
      throw Error("unknown AS shape: " + nm);
    }
  }
  return out;
}

json field_blocks(const json& cfg) {
  if (!cfg.contains("fields")) throw Error("sweep config needs a fields list");
  return cfg.at("fields");
}

// --- commands ---

json cmd_group(const json& cfg, Violations& viol, std::ostringstream& csv) {
  json records = json::array();
  uint32_t index_max = cfg.value("index_max", 6u);
  uint64_t max_rep_systems = cfg.value("max_rep_systems", 256u);
  csv << "group,subgroup_order,index,normal,cyclic_quotient,rep_systems,ok\n";
  for (const auto& desc : cfg.at("groups")) {
    GroupPtr G;
    if (desc.is_string()) {
      G = FiniteGroup::parse_descriptor(desc.get<std::string>());
    } else {
      // explicit multiplication-table form: {"name": ..., "table": [[...]]}
      std::vector<std::vector<uint16_t>> table;
      for (const auto& row : desc.at("table")) table.push_back(row.get<std::vector<uint16_t>>());
      G = FiniteGroup::from_table(std::move(table), desc.value("name", std::string("table-group")));
    }
    for (const auto& members : all_subgroups(G)) {
      uint32_t index = uint32_t(G->size() / members.size());
      if (index > index_max) continue;
      TransferLawReport rep = verify_transfer_laws(G, members, max_rep_systems);
      if (!rep.all_ok()) ++viol.group;
      json r;
      r["group"] = G->name();
      r["subgroup_order"] = members.size();
      r["index"] = index;
      r["normal"] = rep.h_normal;
      r["cyclic_quotient"] = rep.quotient_cyclic;
      r["rep_systems_checked"] = rep.rep_systems_checked;
      r["rep_independent"] = rep.rep_independent;
      r["homomorphism"] = rep.homomorphism;
      r["power_law"] = rep.power_law;
      r["conjugate_law"] = rep.conjugate_law;
      r["cyclic_law"] = rep.cyclic_law;
      r["ok"] = rep.all_ok();
      if (!rep.failures.empty()) r["failures"] = rep.failures;
      records.push_back(r);
      csv << G->name() << "," << members.size() << "," << index << "," << rep.h_normal << ","
          << rep.quotient_cyclic << "," << rep.rep_systems_checked << "," << rep.all_ok() << "\n";
    }
  }
  return records;
}

json cmd_bound(const json& cfg, Violations& viol, uint64_t seed) {
  SheafSpec spec = SheafSpec::from_json(cfg.at("spec"));
  BoundReport br = bound_report(spec, seed);
  json out = br.to_json();
  SumResult sr = incomplete_sum(spec);
  out["abs_sum"] = sr.abs_value;
  out["abs_sum_error"] = sr.abs_error;
  out["sum_exact"] = sr.exact.str();
  out["domain_points"] = sr.points;
  if (auto hb = br.headline()) {
    out["headline_bound"] = hb->value();
    out["margin"] = hb->value() - sr.abs_value;
    if (sr.abs_value > hb->value() + 1e-9) ++viol.bound;
  }
  return out;
}

json cmd_sum(const json& cfg, uint64_t /*seed*/) {
  SheafSpec spec = SheafSpec::from_json(cfg.at("spec"));
  json out;
  SumResult inc = incomplete_sum(spec);
  out["incomplete"] = {{"exact", inc.exact.str()},
                       {"abs", inc.abs_value},
                       {"error", inc.abs_error},
                       {"re", inc.value.real()},
                       {"im", inc.value.imag()},
                       {"points", inc.points}};
  json completes = json::array();
  for (const auto& mj : cfg.value("m_list", json::array({1}))) {
    uint32_t m = mj.get<uint32_t>();
    SumResult c = complete_sum(spec, m);
    completes.push_back({{"m", m},
                         {"exact", c.exact.str()},
                         {"abs", c.abs_value},
                         {"re", c.value.real()},
                         {"im", c.value.imag()},
                         {"points", c.points}});
  }
  out["complete"] = completes;
  return out;
}

// Corpus of transfer-identity cases (kummer specs, AS specs, a few mixed).
json cmd_verify(const json& cfg, Violations& viol, std::ostringstream& csv, uint64_t /*seed*/) {
  json records = json::array();
  uint64_t max_cases = cfg.value("max_cases_per_block", 4000u);
  uint64_t max_chars = cfg.value("max_chars", 64u);
  uint64_t max_coeffs = cfg.value("max_coeffs", 16u);
  uint32_t deg_max = cfg.value("deg_max", 3u);
  uint64_t mixed_cases = cfg.value("mixed_cases", 8u);
  csv << "block,p,q_exp,d,kind,cases,points_checked,violations\n";

  for (const auto& fb : field_blocks(cfg)) {
    uint32_t p = fb.at("p").get<uint32_t>();
    uint32_t q_exp = fb.at("q_exp").get<uint32_t>();
    uint32_t d = fb.at("d").get<uint32_t>();
    SheafSpec probe(p, q_exp, d, 1);
    const FieldPtr& F = probe.ext_field();
    uint64_t Q = F->size();

    uint64_t kummer_cases = 0, kummer_points = 0, kummer_viol = 0, kummer_form_viol = 0;
    std::vector<uint32_t> chars = pick_chars(Q, true, max_chars);
    uint64_t npolys = monic_count(Q, deg_max);
    uint64_t combos = chars.size() * npolys;
    for (uint64_t ci : stride_pick(combos, max_cases)) {
      uint32_t k_idx = chars[ci % chars.size()];
      Poly f = monic_by_index(F, deg_max, ci / chars.size());
      SheafSpec spec(p, q_exp, d, 1);
      spec.add_kummer(k_idx, f);
      IdentityReport r1 = verify_transfer_identity(spec);
      IdentityReport r2 = verify_pullback_forms(spec, 1);
      kummer_points += r1.points_checked + r2.points_checked;
      kummer_viol += r1.violations;
      kummer_form_viol += r2.violations;
      ++kummer_cases;
    }

    uint64_t as_cases = 0, as_points = 0, as_viol = 0, as_form_viol = 0;
    auto shapes = as_shapes(F, cfg.value("as_shapes", std::vector<std::string>{
                                             "ct", "ct2", "ct3", "c/t", "c/quad"}),
                            cfg.value("max_quads", 6u));
    std::vector<uint32_t> coeffs;
    for (uint64_t i : stride_pick(Q - 1, max_coeffs)) coeffs.push_back(uint32_t(i + 1));
    for (const auto& sh : shapes)
      for (uint32_t c : coeffs) {
        SheafSpec spec(p, q_exp, d, 1);
        Element ce(F.get(), c);
        spec.set_as(F->one(), RatFunc(sh.num.scaled(ce), sh.den));
        IdentityReport r1 = verify_transfer_identity(spec);
        IdentityReport r2 = verify_pullback_forms(spec, 1);
        as_points += r1.points_checked + r2.points_checked;
        as_viol += r1.violations;
        as_form_viol += r2.violations;
        ++as_cases;
      }

    uint64_t mixed_done = 0, mixed_points = 0, mixed_viol = 0, mixed_form_viol = 0;
    for (uint64_t mi = 0; mi < mixed_cases && !chars.empty() && !shapes.empty(); ++mi) {
      SheafSpec spec(p, q_exp, d, 1);
      uint32_t k_idx = chars[mi % chars.size()];
      Poly f = monic_by_index(F, deg_max, (mi * 7919) % npolys);
      const auto& sh = shapes[mi % shapes.size()];
      uint32_t c = coeffs.empty() ? 1 : coeffs[mi % coeffs.size()];
      spec.add_kummer(k_idx, f);
      spec.set_as(F->one(), RatFunc(sh.num.scaled(Element(F.get(), c)), sh.den));
      IdentityReport r1 = verify_transfer_identity(spec);
      IdentityReport r2 = verify_pullback_forms(spec, 1);
      mixed_points += r1.points_checked + r2.points_checked;
      mixed_viol += r1.violations;
      mixed_form_viol += r2.violations;
      ++mixed_done;
    }

    viol.identity += kummer_viol + as_viol + mixed_viol;
    viol.forms += kummer_form_viol + as_form_viol + mixed_form_viol;
    json rec;
    rec["field"] = {{"p", p}, {"q_exp", q_exp}, {"d", d}};
    rec["kummer"] = {{"cases", kummer_cases}, {"points", kummer_points}, {"violations", kummer_viol},
                     {"form_violations", kummer_form_viol}};
    rec["as"] = {{"cases", as_cases}, {"points", as_points}, {"violations", as_viol},
                 {"form_violations", as_form_viol}};
    rec["mixed"] = {{"cases", mixed_done}, {"points", mixed_points}, {"violations", mixed_viol},
                    {"form_violations", mixed_form_viol}};
    records.push_back(rec);
    csv << "1," << p << "," << q_exp << "," << d << ",kummer," << kummer_cases << "," << kummer_points
        << "," << kummer_viol << "\n";
    csv << "1," << p << "," << q_exp << "," << d << ",as," << as_cases << "," << as_points << ","
        << as_viol << "\n";
    csv << "1," << p << "," << q_exp << "," << d << ",mixed," << mixed_done << "," << mixed_points
        << "," << mixed_viol << "\n";
  }
  return records;
}

json cmd_sweep(const json& cfg, SweepContext& ctx) {
  std::string mode = cfg.value("mode", "kummer");
  uint32_t deg_max = cfg.value("deg_max", 3u);
  uint64_t max_chars = cfg.value("max_chars", 10u);
  uint64_t max_polys = cfg.value("max_polys", 40u);
  uint64_t max_pairs = cfg.value("max_pairs", 300u);
  uint32_t k_max = cfg.value("k_max", 2u);
  ctx.csv_header();

  // Up-front cost estimate against the evaluation budget: each case costs
  // roughly q points for the incomplete sum plus the oracle enumerations.
  {
    uint64_t est = 0;
    for (const auto& fb : field_blocks(cfg)) {
      uint32_t q_exp = fb.at("q_exp").get<uint32_t>();
      uint32_t d = fb.at("d").get<uint32_t>();
      uint64_t q = 1;
      for (uint32_t i = 0; i < q_exp; ++i) q *= fb.at("p").get<uint32_t>();
      uint64_t per_block = mode == "kummer" ? max_chars * max_polys + max_pairs
                                            : (max_polys + cfg.value("max_quads", 4u) + 1) *
                                                  cfg.value("max_coeffs", 8u) * 8;
      uint64_t oracle_pts = 0;
      if (ctx.check_oracle) {
        uint64_t qd = 1;
        for (uint32_t i = 0; i < d; ++i) qd *= q;
        for (uint32_t m = 1; m <= ctx.oracle_m_max; ++m) {
          uint64_t lvl = 1;
          for (uint32_t i = 0; i < m; ++i) lvl *= qd;
          oracle_pts += lvl;
        }
      }
      est += per_block * (q + oracle_pts);
    }
    std::cerr << "[charsum] sweep cost estimate: " << est << " point evaluations (budget "
              << eval_budget() << ")\n";
    if (est > eval_budget())
      throw Error("estimated sweep cost " + std::to_string(est) + " exceeds the evaluation budget " +
                  std::to_string(eval_budget()));
  }

  for (const auto& fb : field_blocks(cfg)) {
    uint32_t p = fb.at("p").get<uint32_t>();
    uint32_t q_exp = fb.at("q_exp").get<uint32_t>();
    uint32_t d = fb.at("d").get<uint32_t>();
    SheafSpec probe(p, q_exp, d, 1);
    const FieldPtr& F = probe.ext_field();
    uint64_t Q = F->size();

    if (mode == "kummer") {
      std::vector<uint32_t> chars = pick_chars(Q, false, max_chars);
      std::vector<Poly> polys;
      for (uint64_t i : stride_pick(monic_count(Q, deg_max), max_polys))
        polys.push_back(monic_by_index(F, deg_max, i));

      for (uint32_t k_idx : chars)
        for (const auto& f : polys) {
          SheafSpec spec(p, q_exp, d, 1);
          spec.add_kummer(k_idx, f);
          run_sweep_case(ctx, spec, "kummer");
        }

      if (k_max >= 2 && chars.size() >= 1 && polys.size() >= 2) {
        std::vector<std::pair<size_t, size_t>> poly_pairs;
        for (size_t i = 0; i < polys.size() && poly_pairs.size() < max_pairs; ++i)
          for (size_t j = i + 1; j < polys.size() && poly_pairs.size() < max_pairs; ++j)
            if (poly_gcd(polys[i], polys[j]).degree() == 0) poly_pairs.emplace_back(i, j);
        uint64_t char_pairs = uint64_t(chars.size()) * chars.size();
        auto char_sel = stride_pick(char_pairs, std::max<uint64_t>(1, max_pairs / std::max<size_t>(poly_pairs.size(), 1)));
        for (uint64_t cidx : char_sel)
          for (const auto& [i, j] : poly_pairs) {
            SheafSpec spec(p, q_exp, d, 1);
            spec.add_kummer(chars[cidx % chars.size()], polys[i]);
            spec.add_kummer(chars[cidx / chars.size()], polys[j]);
            run_sweep_case(ctx, spec, "kummer");
          }
      }
    } else if (mode == "mixed") {
      std::vector<uint32_t> chars = pick_chars(Q, true, max_chars);
      std::vector<Poly> kpolys;
      for (uint64_t i : stride_pick(monic_count(Q, std::min(deg_max, 2u)), max_polys))
        kpolys.push_back(monic_by_index(F, std::min(deg_max, 2u), i));
      auto shapes = as_shapes(F, cfg.value("as_shapes", std::vector<std::string>{
                                               "poly", "c/t", "c/quad"}),
                              cfg.value("max_quads", 4u), cfg.value("max_as_polys", 12u), deg_max);
      std::vector<uint32_t> coeffs;
      for (uint64_t i : stride_pick(Q - 1, cfg.value("max_coeffs", 8u))) coeffs.push_back(uint32_t(i + 1));
      std::vector<uint32_t> twists;
      for (uint32_t b = 1; b < p; ++b) twists.push_back(b);

      for (const auto& sh : shapes)
        for (uint32_t c : coeffs)
          for (uint32_t b : twists) {
            // k = 0: AS factor alone
            {
              SheafSpec spec(p, q_exp, d, 1);
              spec.set_as(Element(F.get(), F->scalar_mul_idx(b, 1)),
                          RatFunc(sh.num.scaled(Element(F.get(), c)), sh.den));
              run_sweep_case(ctx, spec, "mixed");
            }
            // k = 1: one kummer factor on top
            if (!chars.empty() && !kpolys.empty()) {
              SheafSpec spec(p, q_exp, d, 1);
              uint64_t pick = (uint64_t(c) * 31 + b) % (chars.size() * kpolys.size());
              spec.add_kummer(chars[pick % chars.size()], kpolys[pick / chars.size()]);
              spec.set_as(Element(F.get(), F->scalar_mul_idx(b, 1)),
                          RatFunc(sh.num.scaled(Element(F.get(), c)), sh.den));
              run_sweep_case(ctx, spec, "mixed");
            }
          }
    } else {
      throw Error("unknown sweep mode: " + mode);
    }
  }

  json out;
  out["records"] = ctx.records;
  return out;
}

json cmd_lpoly(const json& cfg, Violations& viol, std::ostringstream& csv, uint64_t seed) {
  json records = json::array();
  csv << "case,p,q_exp,d,betti,max_root_abs,sqrt_qd,bounded,pure,spec\n";
  uint64_t idx = 0;
  for (const auto& sj : cfg.at("specs")) {
    SheafSpec spec = SheafSpec::from_json(sj);
    json r;
    r["case"] = idx;
    r["spec"] = spec.to_json();
    BoundReport br = bound_report(spec, seed);
    int64_t betti;
    LPolyFit fit;
    try {
      betti = gos_betti(0, br.missing_points, br.swan.total_exact);
      fit = lpoly_fit(spec, betti);
    } catch (const Error& e) {
      ++viol.lpoly;
      r["error"] = e.what();
      records.push_back(r);
      csv << idx << "," << spec.p() << "," << spec.q_exp() << "," << spec.d() << ",,,,,,"
          << csv_quote(spec.canonical_text()) << "\n";
      ++idx;
      continue;
    }
    if (!fit.bounded) ++viol.lpoly;
    r["betti"] = betti;
    json cs = json::array();
    for (const auto& c : fit.coeffs) cs.push_back(c.str());
    r["lpoly_coeffs"] = cs;
    json roots = json::array();
    for (size_t i = 0; i < fit.inverse_roots.size(); ++i)
      roots.push_back({{"re", fit.inverse_roots[i].real()},
                       {"im", fit.inverse_roots[i].imag()},
                       {"abs", std::abs(fit.inverse_roots[i])},
                       {"err", fit.root_errors[i]}});
    r["inverse_roots"] = roots;
    r["bounded"] = fit.bounded;
    r["pure"] = fit.pure;
    r["max_root_abs"] = fit.max_root_abs;
    double sq = std::sqrt(double(spec.ext_field()->size()));
    r["sqrt_qd"] = sq;
    records.push_back(r);
    csv << idx << "," << spec.p() << "," << spec.q_exp() << "," << spec.d() << "," << betti << ","
        << fit.max_root_abs << "," << sq << "," << fit.bounded << "," << fit.pure << ","
        << csv_quote(spec.canonical_text()) << "\n";
    ++idx;
  }
  return records;
}

}  // namespace

std::string artifact_version() { return "charsum 1.0.0"; }

nlohmann::json load_preset(const std::string& name, const std::string& presets_dir) {
  std::string path = presets_dir + "/" + name + ".json";
  std::ifstream in(path);
  if (!in) throw Error("preset not found: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("bad preset JSON in " + path + ": " + e.what());
  }
  return j;
}

CliResult run_config(const nlohmann::json& config) {
  if (!config.is_object()) throw Error("config must be a JSON object");
  std::string command = config.value("command", "");
  if (command.empty()) throw Error("config needs a command");
  uint64_t seed = config.value("seed", 0ull);
  if (config.contains("max_evals")) set_eval_budget(config.at("max_evals").get<uint64_t>());
  if (config.contains("field_cap")) set_field_cap(config.at("field_cap").get<uint64_t>());
  if (config.contains("p") && !is_prime_u64(config.at("p").get<uint64_t>()))
    throw Error("p must be prime");

  CliResult res;
  Violations viol;
  std::ostringstream csv;
  json body;

  if (command == "group") {
    body["records"] = cmd_group(config, viol, csv);
  } else if (command == "bound") {
    body = cmd_bound(config, viol, seed);
  } else if (command == "sum") {
    body = cmd_sum(config, seed);
  } else if (command == "verify") {
    body["records"] = cmd_verify(config, viol, csv, seed);
  } else if (command == "sweep") {
    SweepContext ctx;
    ctx.tolerance = config.value("tolerance", 1e-9);
    ctx.check_oracle = config.value("check_oracle", true);
    ctx.check_swan = config.value("check_swan", true);
    ctx.oracle_m_max = config.value("oracle_m_max", 2u);
    ctx.oracle_retry_m_max = config.value("oracle_retry_m_max", ctx.oracle_m_max);
    ctx.seed = seed;
    body = cmd_sweep(config, ctx);
    csv << ctx.csv.str();
    body["summary_margin"] = ctx.cases && ctx.worst_margin < 1e299 ? json(ctx.worst_margin) : json(nullptr);
    body["cases"] = ctx.cases;
    viol = ctx.viol;
  } else if (command == "lpoly") {
    body["records"] = cmd_lpoly(config, viol, csv, seed);
  } else {
    throw Error("unknown command: " + command);
  }

  json report;
  report["artifact"] = artifact_version();
  report["command"] = command;
  report["seed"] = seed;
  report["config"] = config;
  report["result"] = body;
  report["summary"] = {{"violations", viol.total()},
                       {"bound_violations", viol.bound},
                       {"identity_violations", viol.identity},
                       {"form_violations", viol.forms},
                       {"oracle_violations", viol.oracle},
                       {"swan_violations", viol.swan},
                       {"group_violations", viol.group},
                       {"lpoly_violations", viol.lpoly}};
  res.report = std::move(report);
  res.csv = csv.str();
  res.exit_code = viol.total() == 0 ? 0 : 1;
  return res;
}

}  // namespace charsum
