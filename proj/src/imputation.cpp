#include "qtdt/imputation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace qtdt {

const char* to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::UseSame: return "use_same";
    case Strategy::UseOther: return "use_other";
    case Strategy::UseBoth: return "use_both";
  }
  return "?";
}

namespace {

constexpr std::size_t kMinTrainingRows = 10;

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
    sab += (a[i] - ma) * (b[i] - mb);
  }
  if (!(saa > 0.0) || !(sbb > 0.0))
    throw std::runtime_error("correlation undefined: a trait has zero variance");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

// Records of one family addressed by sib position; absent slots are null.
struct FamilyView {
  const SibPhenotypes* by_sib[2] = {nullptr, nullptr};
};

std::vector<FamilyView> family_views(const PhenotypePanel& panel) {
  std::vector<FamilyView> views(panel.families.size());
  for (std::size_t f = 0; f < panel.families.size(); ++f)
    for (const SibPhenotypes& sib : panel.families[f])
      views[f].by_sib[sib.sib_index] = &sib;
  return views;
}

using PredictorList = std::vector<FittedImputer::Predictor>;

struct RegressionKey {
  int response_trait;
  PredictorList predictors;

  friend bool operator<(const RegressionKey& a, const RegressionKey& b) {
    if (a.response_trait != b.response_trait) return a.response_trait < b.response_trait;
    if (a.predictors.size() != b.predictors.size())
      return a.predictors.size() < b.predictors.size();
    for (std::size_t i = 0; i < a.predictors.size(); ++i) {
      if (a.predictors[i].trait != b.predictors[i].trait)
        return a.predictors[i].trait < b.predictors[i].trait;
      if (a.predictors[i].cross_sib != b.predictors[i].cross_sib)
        return a.predictors[i].cross_sib < b.predictors[i].cross_sib;
    }
    return false;
  }
};

double feature_value(double raw, TraitKind kind) {
  if (kind != TraitKind::ChiSquareShift) return raw;
  if (!(raw > 0.0))
    throw std::domain_error("log transform requires positive values, got " +
                            std::to_string(raw));
  return std::log(raw);
}

FittedImputer fit_regression(const PhenotypePanel& panel,
                             const std::vector<FamilyView>& views,
                             const RegressionKey& key) {
  const TraitKind response_kind = panel.kinds[key.response_trait];

  std::vector<double> responses;
  std::vector<double> features;  // row-major, predictors only
  for (const FamilyView& view : views) {
    for (int s = 0; s < 2; ++s) {
      const SibPhenotypes* self = view.by_sib[s];
      const SibPhenotypes* other = view.by_sib[1 - s];
      if (!self || !self->observed[key.response_trait]) continue;
      bool usable = true;
      for (const auto& p : key.predictors) {
        const SibPhenotypes* source = p.cross_sib ? other : self;
        if (!source || !source->observed[p.trait]) {
          usable = false;
          break;
        }
      }
      if (!usable) continue;
      responses.push_back(feature_value(self->y[key.response_trait], response_kind));
      for (const auto& p : key.predictors) {
        const SibPhenotypes* source = p.cross_sib ? other : self;
        features.push_back(feature_value(source->y[p.trait], panel.kinds[p.trait]));
      }
    }
  }

  if (responses.size() < kMinTrainingRows)
    throw std::runtime_error("insufficient training rows for imputation regression (" +
                             std::to_string(responses.size()) + " < " +
                             std::to_string(kMinTrainingRows) + ")");

  const std::size_t n = responses.size();
  const std::size_t p = key.predictors.size();
  DesignMatrix x(n, p + 1);
  for (std::size_t i = 0; i < n; ++i) {
    x.at(i, 0) = 1.0;
    for (std::size_t j = 0; j < p; ++j) x.at(i, j + 1) = features[i * p + j];
  }

  FittedImputer fitted;
  fitted.response_trait = key.response_trait;
  fitted.predictors = key.predictors;
  fitted.training_rows = n;
  switch (response_kind) {
    case TraitKind::Normal:
    case TraitKind::ChiSquareShift:
      // chi-square responses were moved to the log scale above
      fitted.fit = fit_ols(x, responses);
      break;
    case TraitKind::PoissonShift:
      fitted.fit = fit_poisson(x, responses);
      break;
    case TraitKind::BinaryThreshold:
      fitted.fit = fit_logistic(x, responses);
      break;
  }
  return fitted;
}

double conditional_mean(const FittedImputer& model, const FamilyView& view, int sib,
                        const PhenotypePanel& panel) {
  double eta = model.fit.coefficients[0];
  for (std::size_t j = 0; j < model.predictors.size(); ++j) {
    const auto& p = model.predictors[j];
    const SibPhenotypes* source = p.cross_sib ? view.by_sib[1 - sib] : view.by_sib[sib];
    if (!source || !source->observed[p.trait])
      throw std::logic_error("imputation predictor cell unexpectedly missing");
    eta += model.fit.coefficients[j + 1] * feature_value(source->y[p.trait], panel.kinds[p.trait]);
  }
  switch (panel.kinds[model.response_trait]) {
    case TraitKind::Normal: return eta;
    case TraitKind::ChiSquareShift: return std::exp(eta);
    case TraitKind::PoissonShift: return std::exp(eta);
    case TraitKind::BinaryThreshold: return 1.0 / (1.0 + std::exp(-eta));
  }
  return eta;
}

// Predictor set for one missing cell under the given type and strategy.
RegressionKey key_for_cell(MissingType type, Strategy strategy, int sib, int trait,
                           const FamilyView& view) {
  RegressionKey key;
  key.response_trait = trait;
  const int other_trait = 1 - trait;
  switch (type) {
    case MissingType::T1:
    case MissingType::T2_3:
      key.predictors = {{trait, true}};
      break;
    case MissingType::T2_1:
      switch (strategy) {
        case Strategy::UseSame: key.predictors = {{trait, true}}; break;
        case Strategy::UseOther: key.predictors = {{other_trait, false}}; break;
        case Strategy::UseBoth:
          key.predictors = {{other_trait, false}, {trait, true}};
          break;
      }
      break;
    case MissingType::T2_4: {
      // The family's single observed cell is the predictor.
      int obs_sib = -1, obs_trait = -1;
      for (int s = 0; s < 2; ++s) {
        const SibPhenotypes* rec = view.by_sib[s];
        if (!rec) continue;
        for (std::size_t t = 0; t < rec->observed.size(); ++t)
          if (rec->observed[t]) {
            obs_sib = s;
            obs_trait = static_cast<int>(t);
          }
      }
      if (obs_sib < 0)
        throw std::runtime_error("type 2.4 family has no observed cell to impute from");
      key.predictors = {{obs_trait, obs_sib != sib}};
      break;
    }
  }
  return key;
}

}  // namespace

CorrelationSummary estimate_correlations(const PhenotypePanel& panel) {
  if (panel.trait_count() != 2)
    throw std::invalid_argument("estimate_correlations requires a two-trait panel");
  const auto views = family_views(panel);

  std::size_t complete_families = 0;
  std::vector<double> t1_pool, t2_pool;
  std::vector<double> sib1_by_trait[2], sib2_by_trait[2];
  for (const FamilyView& view : views) {
    const SibPhenotypes* a = view.by_sib[0];
    const SibPhenotypes* b = view.by_sib[1];
    if (a && b && a->complete() && b->complete()) ++complete_families;
    for (const SibPhenotypes* rec : {a, b}) {
      if (rec && rec->observed[0] && rec->observed[1]) {
        t1_pool.push_back(rec->y[0]);
        t2_pool.push_back(rec->y[1]);
      }
    }
    for (int t = 0; t < 2; ++t) {
      if (a && b && a->observed[t] && b->observed[t]) {
        sib1_by_trait[t].push_back(a->y[t]);
        sib2_by_trait[t].push_back(b->y[t]);
      }
    }
  }
  if (complete_families < 10)
    throw std::runtime_error("estimate_correlations needs at least 10 complete families, got " +
                             std::to_string(complete_families));

  CorrelationSummary summary;
  summary.rho1 = pearson(t1_pool, t2_pool);
  summary.rho2 = std::max(pearson(sib1_by_trait[0], sib2_by_trait[0]),
                          pearson(sib1_by_trait[1], sib2_by_trait[1]));
  return summary;
}

Strategy select_strategy(TraitKind first, TraitKind second, const CorrelationSummary& corr) {
  if (first == TraitKind::BinaryThreshold || second == TraitKind::BinaryThreshold)
    throw std::invalid_argument("no strategy table exists for binary trait combinations");
  if (!(corr.rho1 >= -1.0 && corr.rho1 <= 1.0) || !(corr.rho2 >= -1.0 && corr.rho2 <= 1.0))
    throw std::invalid_argument("correlations must lie in [-1,1]");

  const TraitKind lo = std::min(first, second);
  const TraitKind hi = std::max(first, second);
  const double gap = corr.rho1 - corr.rho2;
  const bool tie = std::fabs(gap) <= 0.02;

  // Same-kind normal and poisson pairs prefer the other trait of the same
  // offspring in every correlation regime; the remaining supported pairs
  // switch on which correlation dominates.
  if (lo == hi && (lo == TraitKind::Normal || lo == TraitKind::PoissonShift))
    return Strategy::UseOther;
  if (lo == TraitKind::Normal && hi == TraitKind::PoissonShift) {
    if (tie) return Strategy::UseOther;
    return gap > 0.0 ? Strategy::UseOther : Strategy::UseSame;
  }
  // Pairs involving a chi-square trait.
  if (tie) return Strategy::UseOther;
  return gap > 0.0 ? Strategy::UseSame : Strategy::UseOther;
}

std::vector<double> transform_for_skew(std::span<const double> values, TraitKind kind) {
  if (kind != TraitKind::ChiSquareShift)
    throw std::invalid_argument("skew transform applies to chi-square traits only");
  std::vector<double> out;
  out.reserve(values.size());
  for (const double v : values) out.push_back(feature_value(v, kind));
  return out;
}

double invert_skew_transform(double transformed, TraitKind kind) {
  if (kind != TraitKind::ChiSquareShift)
    throw std::invalid_argument("skew transform applies to chi-square traits only");
  return std::exp(transformed);
}

PhenotypePanel impute(const PhenotypePanel& masked, MissingType type,
                      std::optional<Strategy> strategy, ImputeReport* report) {
  const std::size_t required_k = (type == MissingType::T1) ? 1 : 2;
  if (masked.trait_count() != required_k)
    throw std::invalid_argument(std::string("missing type ") + to_string(type) +
                                " requires " + std::to_string(required_k) + " trait(s)");
  if (masked.all_observed()) {
    if (report && strategy) report->strategy = strategy;
    return masked;
  }

  Strategy chosen = Strategy::UseSame;
  if (type == MissingType::T2_1) {
    chosen = strategy ? *strategy
                      : select_strategy(masked.kinds[0], masked.kinds[1],
                                        estimate_correlations(masked));
  }

  PhenotypePanel completed = masked;
  const auto views = family_views(masked);

  std::map<RegressionKey, std::size_t> fitted_index;
  std::vector<FittedImputer> fits;
  const auto fit_for = [&](const RegressionKey& key) -> const FittedImputer& {
    const auto it = fitted_index.find(key);
    if (it != fitted_index.end()) return fits[it->second];
    fits.push_back(fit_regression(masked, views, key));
    fitted_index.emplace(key, fits.size() - 1);
    return fits.back();
  };

  std::vector<ImputedCell> cells;
  for (std::size_t f = 0; f < masked.families.size(); ++f) {
    const FamilyView& view = views[f];
    for (std::size_t r = 0; r < masked.families[f].size(); ++r) {
      const SibPhenotypes& sib = masked.families[f][r];
      for (std::size_t t = 0; t < sib.observed.size(); ++t) {
        if (sib.observed[t]) continue;
        RegressionKey key =
            key_for_cell(type, chosen, sib.sib_index, static_cast<int>(t), view);
        // A single-sib family (or one whose sib lacks the needed cell) cannot
        // supply a cross-sib predictor; fall back to the offspring's own
        // other trait when one is observed.
        if (key.predictors.size() == 1 && key.predictors[0].cross_sib) {
          const SibPhenotypes* other = view.by_sib[1 - sib.sib_index];
          if (!other || !other->observed[key.predictors[0].trait]) {
            if (required_k == 2 && sib.observed[1 - t])
              key.predictors = {{static_cast<int>(1 - t), false}};
            else
              continue;  // nothing to condition on; the record stays incomplete
          }
        }
        const FittedImputer& model = fit_for(key);
        const double value = conditional_mean(model, view, sib.sib_index, masked);
        completed.families[f][r].y[t] = value;
        completed.families[f][r].observed[t] = 1;
        cells.push_back({f, sib.sib_index, static_cast<int>(t), value});
      }
    }
  }

  if (report) {
    report->fits = std::move(fits);
    report->cells = std::move(cells);
    if (type == MissingType::T2_1) report->strategy = chosen;
  }
  return completed;
}

}  // namespace qtdt
