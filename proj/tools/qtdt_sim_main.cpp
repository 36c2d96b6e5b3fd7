// qtdt-sim: scenario-driven Monte Carlo power studies for the sib-pair
// transmission test, with conditional imputation of missing phenotypes.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qtdt/power.hpp"

namespace {

using qtdt::Scenario;
using qtdt::ScenarioResult;
using qtdt::Strategy;
using qtdt::Variant;

void print_power_table(const ScenarioResult& result) {
  std::printf("%-12s", "variant");
  for (const auto& cell : result.cells) std::printf("  d*=%-8.4g", cell.delta_star);
  std::printf("\n");
  for (const Variant variant : {Variant::NoMissing, Variant::Imputed, Variant::Deleted}) {
    std::printf("%-12s", qtdt::to_string(variant));
    for (const auto& cell : result.cells) std::printf("  %-10.3f", cell.power(variant));
    std::printf("\n");
  }
}

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed,
            const std::string& out_dir, int threads, bool svg) {
  Scenario scenario = qtdt::load_scenario(scenario_path);
  if (seed) scenario.master_seed = *seed;
  if (threads >= 0) scenario.threads = threads;

  std::filesystem::create_directories(out_dir);
  const ScenarioResult result = qtdt::run_scenario(scenario);

  const std::string csv_path = out_dir + "/power.csv";
  qtdt::write_results_csv(result.rows(), csv_path);
  qtdt::write_manifest(result, out_dir + "/manifest.txt");
  if (svg) qtdt::write_power_svg(result, out_dir + "/power.svg");

  print_power_table(result);
  std::printf("results written to %s\n", csv_path.c_str());
  return 0;
}

int cmd_strategies(const std::string& scenario_path, std::optional<std::uint64_t> seed,
                   int threads, const std::string& out_dir) {
  Scenario scenario = qtdt::load_scenario(scenario_path);
  if (seed) scenario.master_seed = *seed;
  if (threads >= 0) scenario.threads = threads;
  if (scenario.mtype != qtdt::MissingType::T2_1 || scenario.miss_p <= 0.0) {
    std::fprintf(stderr,
                 "strategies compares type-2.1 imputation choices; the scenario must set "
                 "mtype = t2_1 and miss_p > 0\n");
    return 1;
  }

  std::vector<std::string> csv_lines{"strategy,delta_star,power,mc_se,replications"};
  std::printf("%-12s", "strategy");
  std::vector<ScenarioResult> results;
  for (const Strategy strategy : {Strategy::UseSame, Strategy::UseOther, Strategy::UseBoth}) {
    Scenario fixed = scenario;
    fixed.fixed_strategy = strategy;
    results.push_back(qtdt::run_scenario(fixed));
  }
  for (const auto& cell : results.front().cells) std::printf("  d*=%-8.4g", cell.delta_star);
  std::printf("\n");
  for (std::size_t s = 0; s < results.size(); ++s) {
    const Strategy strategy =
        std::array{Strategy::UseSame, Strategy::UseOther, Strategy::UseBoth}[s];
    std::printf("%-12s", qtdt::to_string(strategy));
    for (const auto& cell : results[s].cells) {
      const double power = cell.power(Variant::Imputed);
      std::printf("  %-10.3f", power);
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s,%.10g,%.6f,%.6f,%llu", qtdt::to_string(strategy),
                    cell.delta_star, power,
                    std::sqrt(power * (1.0 - power) / static_cast<double>(cell.replications)),
                    static_cast<unsigned long long>(cell.replications));
      csv_lines.emplace_back(buf);
    }
    std::printf("\n");
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    const std::string path = out_dir + "/strategies.csv";
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) {
      std::fprintf(stderr, "cannot open for writing: %s\n", path.c_str());
      return 2;
    }
    for (const std::string& line : csv_lines) std::fprintf(f, "%s\n", line.c_str());
    std::fclose(f);
    std::printf("table written to %s\n", path.c_str());
  }
  return 0;
}

int cmd_validate(const std::string& scenario_path) {
  const Scenario scenario = qtdt::load_scenario(scenario_path);
  const auto specs = scenario.resolve_traits();

  std::printf("locus: d=%g m=%g theta=%g\n", scenario.d, scenario.m, scenario.theta);
  for (const double ds : scenario.delta_star_grid) {
    const auto locus = scenario.locus_at(ds);
    std::printf("  delta*=%-6g -> delta=%.6g\n", ds, qtdt::compute_delta(locus));
  }

  bool ok = true;
  for (std::size_t t = 0; t < specs.size(); ++t) {
    const auto& spec = specs[t];
    std::printf("trait%zu: kind=%s alpha=%g beta=%g residual=%.10g\n", t + 1,
                qtdt::to_string(spec.kind), spec.alpha, spec.beta, spec.residual);
    const double achieved = qtdt::p_star_oracle(spec, scenario.d);
    if (spec.kind == qtdt::TraitKind::BinaryThreshold) {
      std::printf("  c=%g  p_star=%.6f  prevalence=%.6f\n", spec.threshold, achieved,
                  qtdt::binary_prevalence(spec, scenario.d));
    } else {
      const double target = scenario.traits[t].p_star;
      const double error = std::fabs(achieved - target);
      std::printf("  p_star target=%g achieved=%.12g |error|=%.3g %s\n", target, achieved,
                  error, error <= 1e-9 ? "ok" : "MISMATCH");
      if (error > 1e-9) ok = false;
    }
  }
  std::printf("calibration %s\n", ok ? "ok" : "FAILED");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sib-pair transmission-test power studies with phenotype imputation"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir;
  std::optional<std::uint64_t> seed;
  int threads = -1;
  bool svg = false;

  CLI::App* run = app.add_subcommand("run", "run the power study for a scenario");
  run->add_option("--scenario", scenario_path, "scenario file")->required()
      ->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "master seed (overrides the scenario file)");
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--threads", threads, "worker threads, 0 = hardware");
  run->add_flag("--svg", svg, "also write a power chart");

  CLI::App* strategies =
      app.add_subcommand("strategies", "compare type-2.1 imputation strategies");
  strategies->add_option("--scenario", scenario_path, "scenario file")->required()
      ->check(CLI::ExistingFile);
  strategies->add_option("--seed", seed, "master seed (overrides the scenario file)");
  strategies->add_option("--threads", threads, "worker threads, 0 = hardware");
  strategies->add_option("--out", out_dir, "optional output directory for strategies.csv");

  CLI::App* validate =
      app.add_subcommand("validate", "report the calibration round-trip for a scenario");
  validate->add_option("--scenario", scenario_path, "scenario file")->required()
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(scenario_path, seed, out_dir, threads, svg);
    if (strategies->parsed()) return cmd_strategies(scenario_path, seed, threads, out_dir);
    if (validate->parsed()) return cmd_validate(scenario_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
