#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "qtdt/imputation.hpp"
#include "qtdt/traits.hpp"

using namespace qtdt;

namespace {

PhenotypePanel blank_panel(std::size_t n_families, std::vector<TraitKind> kinds) {
  PhenotypePanel panel;
  panel.kinds = std::move(kinds);
  panel.families.resize(n_families);
  for (auto& family : panel.families) {
    family.resize(2);
    for (int s = 0; s < 2; ++s) {
      family[s].sib_index = s;
      family[s].y.assign(panel.kinds.size(), 0.0);
      family[s].observed.assign(panel.kinds.size(), 1);
    }
  }
  return panel;
}

}  // namespace

TEST_SUITE("imputation") {

TEST_CASE("log transform round trips") {
  const std::vector<double> values{1.0, std::exp(1.0), std::exp(2.0)};
  const auto logs = transform_for_skew(values, TraitKind::ChiSquareShift);
  CHECK(logs[0] == doctest::Approx(0.0));
  CHECK(logs[1] == doctest::Approx(1.0));
  CHECK(logs[2] == doctest::Approx(2.0));
  for (std::size_t i = 0; i < values.size(); ++i)
    CHECK(invert_skew_transform(logs[i], TraitKind::ChiSquareShift) ==
          doctest::Approx(values[i]).epsilon(1e-12));

  CHECK_THROWS_AS(transform_for_skew(values, TraitKind::Normal), std::invalid_argument);
  const std::vector<double> bad{1.0, 0.0};
  CHECK_THROWS_AS(transform_for_skew(bad, TraitKind::ChiSquareShift), std::domain_error);
}

TEST_CASE("a complete panel passes through untouched") {
  PhenotypePanel panel = blank_panel(30, {TraitKind::Normal});
  for (std::size_t f = 0; f < 30; ++f)
    for (int s = 0; s < 2; ++s) panel.families[f][s].y[0] = double(f) + 0.1 * s;
  const PhenotypePanel out = impute(panel, MissingType::T1);
  for (std::size_t f = 0; f < 30; ++f)
    for (int s = 0; s < 2; ++s) CHECK(out.families[f][s].y[0] == panel.families[f][s].y[0]);
}

TEST_CASE("identical sibs train an identity imputer") {
  PhenotypePanel panel = blank_panel(30, {TraitKind::Normal});
  for (std::size_t f = 0; f < 30; ++f) {
    const double v = 1.0 + 0.37 * static_cast<double>(f);
    panel.families[f][0].y[0] = v;
    panel.families[f][1].y[0] = v;
  }
  panel.families[4][1].observed[0] = 0;
  panel.families[4][1].y[0] = -999.0;
  const PhenotypePanel out = impute(panel, MissingType::T1);
  CHECK(std::fabs(out.families[4][1].y[0] - panel.families[4][0].y[0]) < 1e-8);
}

TEST_CASE("imputed values equal the conditional mean at the fitted coefficients") {
  Rng rng(21);
  PhenotypePanel panel = blank_panel(200, {TraitKind::Normal});
  for (auto& family : panel.families) {
    const double shared = rng.next_normal();
    for (int s = 0; s < 2; ++s) family[s].y[0] = 1.5 + shared + 0.5 * rng.next_normal();
  }
  for (std::size_t f = 0; f < 40; ++f) panel.families[f][f % 2].observed[0] = 0;

  ImputeReport report;
  const PhenotypePanel out = impute(panel, MissingType::T1, std::nullopt, &report);
  REQUIRE(report.fits.size() == 1);
  const auto& fit = report.fits[0].fit;

  // Reference: rebuild the training rows (both sib orderings of complete
  // families) and solve by the full-pivoting oracle.
  std::vector<double> x_rows, y_resp;
  for (const auto& family : panel.families) {
    if (!family[0].observed[0] || !family[1].observed[0]) continue;
    for (int s = 0; s < 2; ++s) {
      x_rows.push_back(1.0);
      x_rows.push_back(family[1 - s].y[0]);
      y_resp.push_back(family[s].y[0]);
    }
  }
  const auto reference = oracle::ols_full_pivot(x_rows, y_resp.size(), 2, y_resp);
  CHECK(fit.coefficients[0] == doctest::Approx(reference[0]).epsilon(1e-8));
  CHECK(fit.coefficients[1] == doctest::Approx(reference[1]).epsilon(1e-8));

  for (const ImputedCell& cell : report.cells) {
    const double predictor = panel.families[cell.family][1 - cell.sib].y[0];
    const double expected = fit.coefficients[0] + fit.coefficients[1] * predictor;
    CHECK(std::fabs(out.families[cell.family][cell.sib].y[0] - expected) < 1e-10);
  }
}

TEST_CASE("observed cells are never modified") {
  Rng rng(22);
  PhenotypePanel panel = blank_panel(100, {TraitKind::Normal, TraitKind::Normal});
  for (auto& family : panel.families)
    for (int s = 0; s < 2; ++s)
      for (int t = 0; t < 2; ++t) family[s].y[t] = rng.next_normal() + 3.0 * t;
  Rng mask_rng(23);
  const PhenotypePanel masked = apply_missingness(panel, MissingType::T2_1, 0.3, mask_rng);
  const PhenotypePanel out = impute(masked, MissingType::T2_1, Strategy::UseBoth);
  for (std::size_t f = 0; f < 100; ++f)
    for (int s = 0; s < 2; ++s)
      for (int t = 0; t < 2; ++t)
        if (masked.families[f][s].observed[t])
          CHECK(out.families[f][s].y[t] == masked.families[f][s].y[t]);
}

TEST_CASE("binary cells are imputed with a probability") {
  Rng rng(24);
  PhenotypePanel panel = blank_panel(300, {TraitKind::BinaryThreshold});
  for (auto& family : panel.families) {
    const double latent = rng.next_normal();
    for (int s = 0; s < 2; ++s)
      family[s].y[0] = (latent + rng.next_normal() > 0.3) ? 1.0 : 0.0;
  }
  for (std::size_t f = 0; f < 60; ++f) panel.families[f][0].observed[0] = 0;
  ImputeReport report;
  const PhenotypePanel out = impute(panel, MissingType::T1, std::nullopt, &report);
  REQUIRE(!report.cells.empty());
  for (const ImputedCell& cell : report.cells) {
    const double value = out.families[cell.family][cell.sib].y[0];
    CHECK(value >= 0.0);
    CHECK(value <= 1.0);
    CHECK(value != 0.0);  // a conditional probability, not a hard call
    CHECK(value != 1.0);
  }
}

TEST_CASE("chi-square pipeline output stays positive") {
  const FamilyPanel families = simulate_families(10000, {0.1, 0.5, 0.5, 0.01}, Rng(25));
  const std::vector<TraitSpec> specs{{TraitKind::ChiSquareShift, 5.0, 1.0, 0.81, 0.0}};
  const PhenotypePanel panel = generate_phenotypes(families, specs, {0.0, 0.45}, Rng(26));
  Rng mask_rng(27);
  const PhenotypePanel masked = apply_missingness(panel, MissingType::T1, 0.3, mask_rng);
  ImputeReport report;
  const PhenotypePanel out = impute(masked, MissingType::T1, std::nullopt, &report);
  CHECK(report.cells.size() == 3000);
  for (const ImputedCell& cell : report.cells) CHECK(cell.value > 0.0);
}

TEST_CASE("conditional imputation beats the unconditional mean") {
  const FamilyPanel families = simulate_families(10000, {0.1, 0.5, 0.0, 0.01}, Rng(28));
  const std::vector<TraitSpec> specs{{TraitKind::Normal, 5.0, 1.0, 1.62, 0.0}};
  const PhenotypePanel truth = generate_phenotypes(families, specs, {0.0, 0.5}, Rng(29));
  Rng mask_rng(30);
  const PhenotypePanel masked = apply_missingness(truth, MissingType::T1, 0.3, mask_rng);
  ImputeReport report;
  impute(masked, MissingType::T1, std::nullopt, &report);

  double grand = 0.0;
  std::size_t rows = 0;
  for (const auto& family : masked.families)
    for (const auto& sib : family)
      if (sib.observed[0]) {
        grand += sib.y[0];
        ++rows;
      }
  grand /= static_cast<double>(rows);

  double mse_model = 0.0, mse_mean = 0.0;
  for (const ImputedCell& cell : report.cells) {
    const double actual = truth.families[cell.family][cell.sib].y[0];
    mse_model += (cell.value - actual) * (cell.value - actual);
    mse_mean += (grand - actual) * (grand - actual);
  }
  CHECK(mse_model < mse_mean);
}

TEST_CASE("use-both on exact-fit data reproduces the single-predictor answer") {
  Rng rng(31);
  PhenotypePanel panel = blank_panel(60, {TraitKind::Normal, TraitKind::Normal});
  for (auto& family : panel.families)
    for (int s = 0; s < 2; ++s) {
      const double y = rng.next_normal();
      family[s].y[1] = y;
      family[s].y[0] = 1.0 + 2.0 * y;  // trait0 is an exact function of trait1
    }
  PhenotypePanel holed = panel;
  holed.families[7][1].observed[0] = 0;
  holed.families[7][1].y[0] = -1e9;

  const PhenotypePanel via_both = impute(holed, MissingType::T2_1, Strategy::UseBoth);
  const PhenotypePanel via_other = impute(holed, MissingType::T2_1, Strategy::UseOther);
  CHECK(std::fabs(via_both.families[7][1].y[0] - via_other.families[7][1].y[0]) < 1e-8);
  CHECK(via_other.families[7][1].y[0] ==
        doctest::Approx(1.0 + 2.0 * panel.families[7][1].y[1]).epsilon(1e-10));
}

TEST_CASE("type 2.1 strategies wire the documented predictor sets") {
  Rng rng(61);
  PhenotypePanel panel = blank_panel(80, {TraitKind::Normal, TraitKind::Normal});
  for (auto& family : panel.families)
    for (int s = 0; s < 2; ++s)
      for (int t = 0; t < 2; ++t) family[s].y[t] = rng.next_normal() + t;
  panel.families[3][1].observed[0] = 0;  // missing cell: sib 1, trait 0

  const auto predictors_for = [&](Strategy strategy) {
    ImputeReport report;
    impute(panel, MissingType::T2_1, strategy, &report);
    REQUIRE(report.fits.size() == 1);
    CHECK(report.strategy == strategy);
    return report.fits[0].predictors;
  };

  const auto same = predictors_for(Strategy::UseSame);
  REQUIRE(same.size() == 1);
  CHECK(same[0].trait == 0);
  CHECK(same[0].cross_sib);

  const auto other = predictors_for(Strategy::UseOther);
  REQUIRE(other.size() == 1);
  CHECK(other[0].trait == 1);
  CHECK_FALSE(other[0].cross_sib);

  const auto both = predictors_for(Strategy::UseBoth);
  REQUIRE(both.size() == 2);
  CHECK(both[0].trait == 1);
  CHECK_FALSE(both[0].cross_sib);
  CHECK(both[1].trait == 0);
  CHECK(both[1].cross_sib);
}

TEST_CASE("type 2.4 imputes all three cells from the lone observed one") {
  Rng rng(32);
  PhenotypePanel panel = blank_panel(200, {TraitKind::Normal, TraitKind::Normal});
  for (auto& family : panel.families) {
    const double shared = rng.next_normal();
    for (int s = 0; s < 2; ++s)
      for (int t = 0; t < 2; ++t)
        family[s].y[t] = shared + 0.3 * rng.next_normal() + 2.0 * t;
  }
  Rng mask_rng(33);
  const PhenotypePanel masked = apply_missingness(panel, MissingType::T2_4, 0.2, mask_rng);
  ImputeReport report;
  const PhenotypePanel out = impute(masked, MissingType::T2_4, std::nullopt, &report);
  CHECK(out.all_observed());
  CHECK(report.cells.size() == 3 * 40);
  // Every fitted imputer conditions on exactly one predictor.
  for (const auto& fitted : report.fits) CHECK(fitted.predictors.size() == 1);
}

TEST_CASE("a cell with no usable predictor is left missing rather than faked") {
  Rng rng(62);
  PhenotypePanel panel = blank_panel(40, {TraitKind::Normal});
  for (auto& family : panel.families)
    for (int s = 0; s < 2; ++s) family[s].y[0] = rng.next_normal();
  panel.families[5][0].observed[0] = 0;  // both sibs of family 5 missing:
  panel.families[5][1].observed[0] = 0;  // no sib value to condition on
  ImputeReport report;
  const PhenotypePanel out = impute(panel, MissingType::T1, std::nullopt, &report);
  CHECK_FALSE(out.families[5][0].complete());
  CHECK_FALSE(out.families[5][1].complete());
  CHECK(report.cells.empty());
}

TEST_CASE("too few complete records fail with a clear error") {
  PhenotypePanel panel = blank_panel(5, {TraitKind::Normal});
  for (std::size_t f = 0; f < 5; ++f) {
    panel.families[f][0].y[0] = static_cast<double>(f);
    panel.families[f][1].y[0] = static_cast<double>(f) + 0.5;
  }
  panel.families[0][0].observed[0] = 0;
  CHECK_THROWS_WITH_AS(impute(panel, MissingType::T1), doctest::Contains("insufficient"),
                       std::runtime_error);
}

TEST_CASE("correlation estimates on designed panels") {
  Rng rng(34);
  PhenotypePanel independent = blank_panel(10000, {TraitKind::Normal, TraitKind::Normal});
  for (auto& family : independent.families)
    for (int s = 0; s < 2; ++s)
      for (int t = 0; t < 2; ++t) family[s].y[t] = rng.next_normal();
  const CorrelationSummary none = estimate_correlations(independent);
  CHECK(std::fabs(none.rho1) < 0.05);
  CHECK(std::fabs(none.rho2) < 0.05);

  PhenotypePanel duplicated = independent;
  for (auto& family : duplicated.families)
    for (int s = 0; s < 2; ++s) family[s].y[1] = family[s].y[0];
  CHECK(estimate_correlations(duplicated).rho1 == doctest::Approx(1.0));

  const FamilyPanel families = simulate_families(10000, {0.1, 0.5, 0.0, 0.01}, Rng(35));
  const std::vector<TraitSpec> specs{{TraitKind::Normal, 0.0, 0.0, 1.0, 0.0},
                                     {TraitKind::Normal, 0.0, 0.0, 2.0, 0.0}};
  const PhenotypePanel copula = generate_phenotypes(families, specs, {0.3, 0.15}, Rng(36));
  const CorrelationSummary estimated = estimate_correlations(copula);
  CHECK(std::fabs(estimated.rho1 - 0.3) < 0.05);
  CHECK(std::fabs(estimated.rho2 - 0.15) < 0.05);
}

TEST_CASE("correlation estimation preconditions") {
  CHECK_THROWS_AS(estimate_correlations(blank_panel(20, {TraitKind::Normal})),
                  std::invalid_argument);
  PhenotypePanel small = blank_panel(8, {TraitKind::Normal, TraitKind::Normal});
  CHECK_THROWS_AS(estimate_correlations(small), std::runtime_error);
}

TEST_CASE("strategy selection follows the published comparisons") {
  const CorrelationSummary greater{0.4, 0.2};
  const CorrelationSummary less{0.2, 0.4};
  const CorrelationSummary tied{0.3, 0.31};

  for (const auto& corr : {greater, less, tied}) {
    CHECK(select_strategy(TraitKind::Normal, TraitKind::Normal, corr) == Strategy::UseOther);
    CHECK(select_strategy(TraitKind::PoissonShift, TraitKind::PoissonShift, corr) ==
          Strategy::UseOther);
  }

  CHECK(select_strategy(TraitKind::Normal, TraitKind::PoissonShift, greater) ==
        Strategy::UseOther);
  CHECK(select_strategy(TraitKind::Normal, TraitKind::PoissonShift, less) ==
        Strategy::UseSame);
  CHECK(select_strategy(TraitKind::Normal, TraitKind::PoissonShift, tied) ==
        Strategy::UseOther);

  for (const auto first : {TraitKind::Normal, TraitKind::PoissonShift,
                           TraitKind::ChiSquareShift}) {
    CHECK(select_strategy(first, TraitKind::ChiSquareShift, greater) == Strategy::UseSame);
    CHECK(select_strategy(first, TraitKind::ChiSquareShift, less) == Strategy::UseOther);
    CHECK(select_strategy(first, TraitKind::ChiSquareShift, tied) == Strategy::UseOther);
  }

  CHECK_THROWS_AS(
      select_strategy(TraitKind::BinaryThreshold, TraitKind::Normal, greater),
      std::invalid_argument);
}

}  // TEST_SUITE
