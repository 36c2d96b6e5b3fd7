#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qtdt/genetics.hpp"
#include "qtdt/imputation.hpp"
#include "qtdt/missingness.hpp"
#include "qtdt/tdt.hpp"
#include "qtdt/traits.hpp"

namespace qtdt {

/// The three datasets compared in a power run: the complete panel, the
/// masked-then-imputed panel, and the masked-then-complete-case panel.
enum class Variant { NoMissing = 0, Imputed = 1, Deleted = 2 };

const char* to_string(Variant variant);

/// One trait of a scenario before calibration.  Normal, chi-square and
/// Poisson traits state a heritability target p_star and have their residual
/// parameter solved; binary threshold traits state (sigma, threshold)
/// directly.
struct TraitConfig {
  TraitKind kind = TraitKind::Normal;
  double alpha = 0.0;
  double beta = 1.0;
  double p_star = 0.1;
  double sigma = 1.0;
  double threshold = 0.0;
};

struct Scenario {
  double d = 0.1;
  double m = 0.5;
  double theta = 0.01;
  std::vector<double> delta_star_grid{0.0, 0.33, 0.67, 1.0};
  std::size_t n_families = 500;
  std::size_t replications = 1000;
  double alpha = 0.05;
  std::vector<TraitConfig> traits;
  MissingType mtype = MissingType::T1;
  double miss_p = 0.0;
  std::optional<Strategy> fixed_strategy;  // empty = select from estimated correlations
  DeletionScope deletion = DeletionScope::Family;
  ResidualCorrelation rho;
  Centering centering = Centering::Mean;
  std::uint64_t master_seed = 0;
  int threads = 0;  // 0 = hardware concurrency; results do not depend on it

  void validate() const;
  std::vector<TraitSpec> resolve_traits() const;
  LocusParams locus_at(double delta_star) const;
};

/// Flat key=value scenario file (one key per line, '#' comments, arrays
/// comma-separated).  See scenarios/ for documented samples.
Scenario load_scenario(const std::string& path);

struct ReplicateOutcome {
  std::array<bool, 3> reject{};
  std::array<bool, 3> fit_error{};
  std::array<bool, 3> nonconverged{};
  int strategy_used = -1;  // Strategy enum value for type-2.1 replicates
};

/// One paired replicate: a single panel is simulated, masked once, and the
/// three variants are tested on it at level alpha.  All randomness derives
/// from (master_seed, delta index, replicate index).
ReplicateOutcome run_replicate(const Scenario& scenario, std::size_t delta_index,
                               std::size_t rep_index);

struct PowerRow {
  double delta_star = 0.0;
  Variant variant = Variant::NoMissing;
  double power = 0.0;
  double mc_se = 0.0;
  std::size_t replications = 0;
};

/// Aggregated decisions at one grid point.  `joint[mask]` counts
/// replicates whose rejection pattern is `mask` (bit 0 = NoMissing,
/// bit 1 = Imputed, bit 2 = Deleted), which supports paired comparisons.
struct DeltaSummary {
  double delta_star = 0.0;
  std::uint64_t replications = 0;
  std::array<std::uint64_t, 8> joint{};
  std::array<std::uint64_t, 3> fit_errors{};
  std::array<std::uint64_t, 3> nonconverged{};
  std::array<std::uint64_t, 3> strategy_counts{};

  double power(Variant variant) const;
  /// power(a) - power(b) and its paired standard error.
  double paired_diff(Variant a, Variant b) const;
  double paired_diff_se(Variant a, Variant b) const;
};

struct ScenarioResult {
  Scenario scenario;
  std::vector<DeltaSummary> cells;

  std::vector<PowerRow> rows() const;
};

/// Monte Carlo power over the whole delta grid.  Replicates are distributed
/// over a worker pool; per-replicate stream derivation makes the output
/// identical for every thread count.
ScenarioResult run_scenario(const Scenario& scenario);

/// CSV with header delta_star,variant,power,mc_se,replications; rows sorted
/// by (grid position, variant).  Deterministic bytes for a fixed seed.
void write_results_csv(const std::vector<PowerRow>& rows, const std::string& path);

/// Single-scenario line chart, one line per variant (green no-missing, blue
/// imputed, red deleted).
void write_power_svg(const ScenarioResult& result, const std::string& path);

/// All resolved parameters, the seed, and per-cell diagnostics.
void write_manifest(const ScenarioResult& result, const std::string& path);

}  // namespace qtdt
