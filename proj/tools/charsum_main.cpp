#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "charsum/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"charsum: exact verification of incomplete character-sum bounds via the transfer construction"};
  std::string command = "run";
  std::string config_path, preset, presets_dir = "presets", out_dir, format = "json";
  uint64_t seed = 0, max_evals = 0;
  app.add_option("command", command,
                 "run | group | bound | sum | verify | sweep | lpoly (run keeps the config's command)");
  app.add_option("--config", config_path, "config JSON file");
  app.add_option("--preset", preset, "preset name, resolved as <presets-dir>/<name>.json");
  app.add_option("--presets-dir", presets_dir, "preset directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "seed for factorization tie-breaking (default 0)");
  app.add_option("--out", out_dir, "write report.json / report.csv into this directory");
  auto* evals_opt = app.add_option("--max-evals", max_evals, "budget for exhaustive enumerations");
  app.add_option("--format", format, "json | csv | both")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    nlohmann::json config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw charsum::Error("cannot open config: " + config_path);
      in >> config;
    } else if (!preset.empty()) {
      config = charsum::load_preset(preset, presets_dir);
    } else {
      throw charsum::Error("need --config or --preset");
    }
    if (command != "run") config["command"] = command;
    if (seed_opt->count() > 0) config["seed"] = seed;
    if (evals_opt->count() > 0) config["max_evals"] = max_evals;
    // configs may carry output settings; flags take precedence
    if (out_dir.empty() && config.contains("out") && config.at("out").is_string())
      out_dir = config.at("out").get<std::string>();
    if (format == "json" && config.contains("format") && config.at("format").is_string())
      format = config.at("format").get<std::string>();
    if (format != "json" && format != "csv" && format != "both")
      throw charsum::Error("bad --format: " + format);

    auto t0 = std::chrono::steady_clock::now();
    charsum::CliResult res = charsum::run_config(config);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
    std::cerr << "[charsum] " << config.value("command", command) << " finished in " << ms.count()
              << " ms, exit " << res.exit_code << "\n";

    std::string report_text = res.report.dump(2);
    report_text += "\n";
    if (!out_dir.empty()) {
      if (format == "json" || format == "both") {
        std::ofstream f(out_dir + "/report.json", std::ios::binary);
        if (!f) throw charsum::Error("cannot write to " + out_dir);
        f << report_text;
      }
      if (format == "csv" || format == "both") {
        std::ofstream f(out_dir + "/report.csv", std::ios::binary);
        if (!f) throw charsum::Error("cannot write to " + out_dir);
        f << res.csv;
      }
    } else {
      if (format == "json" || format == "both") std::cout << report_text;
      if (format == "csv" || format == "both") std::cout << res.csv;
    }
    return res.exit_code;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: bad config JSON: " << e.what() << "\n";
    return 2;
  } catch (const charsum::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
