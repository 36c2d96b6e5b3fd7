#include "qtdt/power.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace qtdt {

const char* to_string(Variant variant) {
  switch (variant) {
    case Variant::NoMissing: return "no_missing";
    case Variant::Imputed: return "imputed";
    case Variant::Deleted: return "deleted";
  }
  return "?";
}

void Scenario::validate() const {
  if (n_families < 1) throw std::invalid_argument("n_families must be at least 1");
  if (replications < 1) throw std::invalid_argument("replications must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0,1), got " + std::to_string(alpha));
  if (delta_star_grid.empty()) throw std::invalid_argument("delta_star grid is empty");
  for (const double ds : delta_star_grid) locus_at(ds).validate();
  if (traits.empty() || traits.size() > 2)
    throw std::invalid_argument("scenarios take one or two traits");
  const std::size_t required_k = (mtype == MissingType::T1) ? 1 : 2;
  if (traits.size() != required_k)
    throw std::invalid_argument(std::string("missing type ") + to_string(mtype) +
                                " requires " + std::to_string(required_k) +
                                " trait(s), scenario has " + std::to_string(traits.size()));
  if (!(miss_p >= 0.0 && miss_p < 1.0))
    throw std::invalid_argument("miss_p must lie in [0,1)");
  rho.validate();
  resolve_traits();  // surfaces calibration errors early
  if (mtype == MissingType::T2_1 && !fixed_strategy && miss_p > 0.0) {
    for (const TraitConfig& t : traits)
      if (t.kind == TraitKind::BinaryThreshold)
        throw std::invalid_argument(
            "strategy=auto is not defined for binary trait combinations; fix a strategy");
  }
}

std::vector<TraitSpec> Scenario::resolve_traits() const {
  std::vector<TraitSpec> specs;
  specs.reserve(traits.size());
  for (const TraitConfig& config : traits) {
    TraitSpec spec;
    spec.kind = config.kind;
    spec.alpha = config.alpha;
    spec.beta = config.beta;
    if (config.kind == TraitKind::BinaryThreshold) {
      spec.residual = config.sigma;
      spec.threshold = config.threshold;
    } else {
      spec.residual =
          solve_residual_param(config.kind, d, config.beta, HeritabilityTarget{config.p_star});
    }
    spec.validate();
    specs.push_back(spec);
  }
  return specs;
}

LocusParams Scenario::locus_at(double delta_star) const { return {d, m, delta_star, theta}; }

ReplicateOutcome run_replicate(const Scenario& scenario, std::size_t delta_index,
                               std::size_t rep_index) {
  if (delta_index >= scenario.delta_star_grid.size())
    throw std::invalid_argument("delta index out of range");

  const Rng base = Rng(scenario.master_seed).derive(delta_index).derive(rep_index);
  const Rng family_stream = base.derive(0);
  const Rng trait_stream = base.derive(1);
  Rng mask_rng = base.derive(2);

  const LocusParams locus = scenario.locus_at(scenario.delta_star_grid[delta_index]);
  const std::vector<TraitSpec> specs = scenario.resolve_traits();

  const FamilyPanel families = simulate_families(scenario.n_families, locus, family_stream);
  const PhenotypePanel complete =
      generate_phenotypes(families, specs, scenario.rho, trait_stream);
  const PhenotypePanel masked =
      apply_missingness(complete, scenario.mtype, scenario.miss_p, mask_rng);

  ReplicateOutcome outcome;
  const auto run_variant = [&](Variant variant, const PhenotypePanel& panel) {
    const std::size_t index = static_cast<std::size_t>(variant);
    try {
      const TestResult result =
          multivariate_tdt(build_test_input(families, panel, scenario.centering));
      outcome.reject[index] = result.p_value < scenario.alpha;
      outcome.nonconverged[index] = !result.converged;
    } catch (const std::exception&) {
      outcome.fit_error[index] = true;
    }
  };

  run_variant(Variant::NoMissing, complete);
  try {
    ImputeReport report;
    const PhenotypePanel imputed =
        impute(masked, scenario.mtype, scenario.fixed_strategy, &report);
    if (report.strategy) outcome.strategy_used = static_cast<int>(*report.strategy);
    run_variant(Variant::Imputed, imputed);
  } catch (const std::exception&) {
    outcome.fit_error[static_cast<std::size_t>(Variant::Imputed)] = true;
  }
  run_variant(Variant::Deleted, deleted_panel(masked, scenario.deletion));
  return outcome;
}

double DeltaSummary::power(Variant variant) const {
  const int bit = 1 << static_cast<int>(variant);
  std::uint64_t hits = 0;
  for (int mask = 0; mask < 8; ++mask)
    if (mask & bit) hits += joint[mask];
  return replications ? static_cast<double>(hits) / static_cast<double>(replications) : 0.0;
}

double DeltaSummary::paired_diff(Variant a, Variant b) const { return power(a) - power(b); }

double DeltaSummary::paired_diff_se(Variant a, Variant b) const {
  if (!replications) return 0.0;
  const int bit_a = 1 << static_cast<int>(a);
  const int bit_b = 1 << static_cast<int>(b);
  std::uint64_t a_only = 0, b_only = 0;
  for (int mask = 0; mask < 8; ++mask) {
    const bool ra = mask & bit_a, rb = mask & bit_b;
    if (ra && !rb) a_only += joint[mask];
    if (rb && !ra) b_only += joint[mask];
  }
  const double r = static_cast<double>(replications);
  const double mean = (static_cast<double>(a_only) - static_cast<double>(b_only)) / r;
  const double var = (static_cast<double>(a_only) + static_cast<double>(b_only)) / r - mean * mean;
  return std::sqrt(std::max(0.0, var) / r);
}

std::vector<PowerRow> ScenarioResult::rows() const {
  std::vector<PowerRow> out;
  out.reserve(cells.size() * 3);
  for (const DeltaSummary& cell : cells) {
    for (const Variant variant : {Variant::NoMissing, Variant::Imputed, Variant::Deleted}) {
      PowerRow row;
      row.delta_star = cell.delta_star;
      row.variant = variant;
      row.power = cell.power(variant);
      row.replications = cell.replications;
      row.mc_se = cell.replications
                      ? std::sqrt(row.power * (1.0 - row.power) /
                                  static_cast<double>(cell.replications))
                      : 0.0;
      out.push_back(row);
    }
  }
  return out;
}

ScenarioResult run_scenario(const Scenario& scenario) {
  scenario.validate();
  const std::size_t n_deltas = scenario.delta_star_grid.size();
  const std::size_t reps = scenario.replications;
  const std::size_t total = n_deltas * reps;

  ScenarioResult result;
  result.scenario = scenario;
  result.cells.resize(n_deltas);
  for (std::size_t di = 0; di < n_deltas; ++di) {
    result.cells[di].delta_star = scenario.delta_star_grid[di];
    result.cells[di].replications = reps;
  }

  unsigned n_threads = scenario.threads > 0
                           ? static_cast<unsigned>(scenario.threads)
                           : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, total));

  std::atomic<std::size_t> next{0};
  std::mutex merge_mutex;
  std::exception_ptr failure;

  const auto worker = [&]() {
    std::vector<DeltaSummary> local(n_deltas);
    try {
      for (;;) {
        const std::size_t item = next.fetch_add(1, std::memory_order_relaxed);
        if (item >= total) break;
        const std::size_t di = item / reps;
        const std::size_t rep = item % reps;
        const ReplicateOutcome outcome = run_replicate(scenario, di, rep);
        DeltaSummary& cell = local[di];
        int mask = 0;
        for (int v = 0; v < 3; ++v) {
          if (outcome.reject[v]) mask |= 1 << v;
          if (outcome.fit_error[v]) ++cell.fit_errors[v];
          if (outcome.nonconverged[v]) ++cell.nonconverged[v];
        }
        ++cell.joint[mask];
        if (outcome.strategy_used >= 0) ++cell.strategy_counts[outcome.strategy_used];
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(merge_mutex);
      if (!failure) failure = std::current_exception();
      return;
    }
    const std::lock_guard<std::mutex> lock(merge_mutex);
    for (std::size_t di = 0; di < n_deltas; ++di) {
      DeltaSummary& cell = result.cells[di];
      for (int mask = 0; mask < 8; ++mask) cell.joint[mask] += local[di].joint[mask];
      for (int v = 0; v < 3; ++v) {
        cell.fit_errors[v] += local[di].fit_errors[v];
        cell.nonconverged[v] += local[di].nonconverged[v];
        cell.strategy_counts[v] += local[di].strategy_counts[v];
      }
    }
  };

  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return result;
}

}  // namespace qtdt
