#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "charsum/cli.hpp"

using namespace charsum;
using nlohmann::json;

TEST_CASE("invalid configs are rejected") {
  CHECK_THROWS_AS(run_config(json{{"command", "warp"}}), Error);
  CHECK_THROWS_AS(run_config(json{{"seed", 0}}), Error);
  CHECK_THROWS_AS(run_config(json::array()), Error);
  CHECK_THROWS_AS(run_config(json{{"command", "bound"}, {"p", 4},
                                  {"spec", {{"p", 4}, {"q_exp", 1}, {"d", 2}}}}),
                  Error);
  CHECK_THROWS_AS(run_config(json{{"command", "sweep"}, {"mode", "kummer"}}), Error);
  CHECK_THROWS_AS(load_preset("no-such-preset", "/nonexistent"), Error);
}

TEST_CASE("bound command emits the worked example") {
  json cfg{{"command", "bound"},
           {"spec", {{"p", 2}, {"q_exp", 1}, {"d", 2}, {"n", 1},
                     {"kummer", json::array({{{"k_idx", 1}, {"poly", "t+g"}}})}}}};
  CliResult r = run_config(cfg);
  CHECK(r.exit_code == 0);
  const json& b = r.report.at("result");
  CHECK(b.at("kummer_bound").at("coeff") == 1);
  CHECK(b.at("kummer_bound").at("value").get<double>() == doctest::Approx(1.4142135623).epsilon(1e-9));
  CHECK(b.at("headline_bound").get<double>() == doctest::Approx(1.4142135623).epsilon(1e-9));
  CHECK(b.at("abs_sum").get<double>() == doctest::Approx(1.0));
  CHECK(b.at("domain_points") == 2);
}

TEST_CASE("sum command reports exact and complex values") {
  json cfg{{"command", "sum"},
           {"m_list", json::array({1, 2})},
           {"spec", {{"p", 2}, {"q_exp", 2}, {"d", 1}, {"n", 1},
                     {"kummer", json::array({{{"k_idx", 1}, {"poly", "t^2+t"}}})}}}};
  CliResult r = run_config(cfg);
  CHECK(r.exit_code == 0);
  CHECK(r.report.at("result").at("incomplete").at("points") == 2);
  CHECK(r.report.at("result").at("complete")[0].at("abs").get<double>() == doctest::Approx(2.0));
  CHECK(r.report.at("result").at("complete")[1].at("abs").get<double>() == doctest::Approx(4.0));
}

TEST_CASE("group command runs a small corpus") {
  json cfg{{"command", "group"}, {"groups", json::array({"cyclic:6", "symmetric:3"})},
           {"index_max", 6}};
  CliResult r = run_config(cfg);
  CHECK(r.exit_code == 0);
  CHECK(r.report.at("summary").at("group_violations") == 0);
  CHECK(r.report.at("result").at("records").size() > 4);

  // explicit multiplication-table groups are accepted too (Klein four)
  json table = json::array({json::array({0, 1, 2, 3}), json::array({1, 0, 3, 2}),
                            json::array({2, 3, 0, 1}), json::array({3, 2, 1, 0})});
  json cfg2{{"command", "group"},
            {"groups", json::array({json{{"name", "klein"}, {"table", table}}})},
            {"index_max", 6}};
  CliResult r2 = run_config(cfg2);
  CHECK(r2.exit_code == 0);
  CHECK(r2.report.at("result").at("records").size() == 5);  // subgroup lattice of V_4
}

TEST_CASE("sweep produces records, CSV, and is byte-deterministic") {
  json cfg{{"command", "sweep"},
           {"mode", "kummer"},
           {"fields", json::array({{{"p", 2}, {"q_exp", 1}, {"d", 2}}})},
           {"deg_max", 2},
           {"max_chars", 2},
           {"max_polys", 6},
           {"max_pairs", 10},
           {"check_oracle", true},
           {"oracle_m_max", 2},
           {"seed", 0}};
  CliResult a = run_config(cfg);
  CliResult b = run_config(cfg);
  CHECK(a.report.dump(2) == b.report.dump(2));
  CHECK(a.csv == b.csv);
  CHECK(a.csv.find("case,p,q_exp,d,mode") == 0);
  CHECK(a.report.at("result").at("cases").get<uint64_t>() > 0);

  // every record carries the full spec needed to re-run it in isolation
  const json& rec = a.report.at("result").at("records")[0];
  SheafSpec replay = SheafSpec::from_json(rec.at("spec"));
  json one{{"command", "bound"}, {"spec", replay.to_json()}};
  CliResult rr = run_config(one);
  CHECK(rr.report.at("result").at("kummer_bound").at("coeff") ==
        rec.at("bound").at("coeff"));
}

TEST_CASE("verify command on a tiny corpus") {
  json cfg{{"command", "verify"},
           {"fields", json::array({{{"p", 2}, {"q_exp", 1}, {"d", 2}}})},
           {"deg_max", 2},
           {"max_cases_per_block", 40},
           {"max_chars", 3},
           {"max_coeffs", 3},
           {"max_quads", 2},
           {"mixed_cases", 2}};
  CliResult r = run_config(cfg);
  CHECK(r.exit_code == 0);
  CHECK(r.report.at("summary").at("identity_violations") == 0);
  CHECK(r.report.at("summary").at("form_violations") == 0);
}

TEST_CASE("lpoly command handles a bad spec as a violation, not a crash") {
  // a trivial sheaf (chi of order 3 on t^3) has no valid Betti number
  json cfg{{"command", "lpoly"},
           {"specs", json::array({{{"p", 2}, {"q_exp", 2}, {"d", 1}, {"n", 1},
                                   {"kummer", json::array({{{"k_idx", 1}, {"poly", "t^3"}}})}}})}};
  CliResult r = run_config(cfg);
  CHECK(r.exit_code == 1);
  CHECK(r.report.at("summary").at("lpoly_violations") == 1);
  CHECK(r.report.at("result").at("records")[0].contains("error"));
}
