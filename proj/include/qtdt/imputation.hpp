#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qtdt/glm.hpp"
#include "qtdt/missingness.hpp"
#include "qtdt/panel.hpp"

namespace qtdt {

/// Predictor choice when a single cell of a two-trait sib pair is missing
/// (type 2.1): the same trait of the other sib, the other trait of the same
/// sib, or both.
enum class Strategy { UseSame, UseOther, UseBoth };

const char* to_string(Strategy strategy);

struct CorrelationSummary {
  double rho1 = 0.0;  // cross-trait correlation within an offspring
  double rho2 = 0.0;  // max over traits of the cross-sib same-trait correlation
};

/// Pearson correlations on complete cases: rho1 pools both sibs'
/// (trait1, trait2) pairs, rho2 takes the larger of the two cross-sib
/// same-trait correlations.  Requires a two-trait panel with at least 10
/// fully observed families.
CorrelationSummary estimate_correlations(const PhenotypePanel& panel);

/// The best type-2.1 strategy for a trait-kind combination, keyed on the
/// sign of rho1 - rho2 (|rho1 - rho2| <= 0.02 counts as a tie).  Combinations
/// involving binary traits are not supported.
Strategy select_strategy(TraitKind first, TraitKind second, const CorrelationSummary& corr);

/// Natural-log transform applied to skewed (chi-square) traits before
/// regression; throws unless kind is ChiSquareShift and all values positive.
std::vector<double> transform_for_skew(std::span<const double> values, TraitKind kind);

/// Back-transform of a prediction made on the log scale.
double invert_skew_transform(double transformed, TraitKind kind);

/// One regression used by the imputer, for test-side verification.
struct FittedImputer {
  int response_trait = 0;
  struct Predictor {
    int trait = 0;
    bool cross_sib = false;  // predictor read from the other sib
  };
  std::vector<Predictor> predictors;
  FitResult fit;  // coefficients are (intercept, predictors...)
  std::size_t training_rows = 0;
};

struct ImputedCell {
  std::size_t family = 0;
  int sib = 0;
  int trait = 0;
  double value = 0.0;
};

struct ImputeReport {
  std::vector<FittedImputer> fits;
  std::vector<ImputedCell> cells;
  std::optional<Strategy> strategy;
};

/// Fill every missing cell with its fitted conditional mean.  The predictor
/// set follows the missing type: T1 and T2_3 use the same trait of the other
/// sib, T2_4 regresses each missing cell on the family's single observed
/// cell, and T2_1 follows `strategy` (estimated from the panel's own
/// correlations when not forced).  Regressions are trained on this panel's
/// complete records only, with both sib orderings stacked for cross-sib
/// models, and need at least 10 rows each.
PhenotypePanel impute(const PhenotypePanel& masked, MissingType type,
                      std::optional<Strategy> strategy = std::nullopt,
                      ImputeReport* report = nullptr);

}  // namespace qtdt
