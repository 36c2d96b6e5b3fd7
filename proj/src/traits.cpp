#include "qtdt/traits.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qtdt/special.hpp"

namespace qtdt {

const char* to_string(TraitKind kind) {
  switch (kind) {
    case TraitKind::Normal: return "normal";
    case TraitKind::ChiSquareShift: return "chi_square";
    case TraitKind::PoissonShift: return "poisson";
    case TraitKind::BinaryThreshold: return "binary";
  }
  return "?";
}

void TraitSpec::validate() const {
  if (!(residual > 0.0))
    throw std::domain_error(std::string("trait residual parameter must be positive (") +
                            to_string(kind) + ", got " + std::to_string(residual) + ")");
}

double TraitSpec::residual_variance() const {
  switch (kind) {
    case TraitKind::Normal: return residual;
    case TraitKind::ChiSquareShift: return 2.0 * residual;
    case TraitKind::PoissonShift: return residual;
    case TraitKind::BinaryThreshold: break;
  }
  throw std::logic_error("residual_variance is undefined for the binary threshold model");
}

void HeritabilityTarget::validate() const {
  if (!(p_star > 0.0 && p_star < 1.0))
    throw std::domain_error("p_star must lie in (0,1), got " + std::to_string(p_star));
}

void ResidualCorrelation::validate() const {
  if (!(cross_trait > -1.0 && cross_trait < 1.0) || !(cross_sib > -1.0 && cross_sib < 1.0))
    throw std::domain_error("residual correlations must lie in (-1,1)");
}

double genetic_variance(double d, double beta) {
  if (!(d > 0.0 && d < 1.0)) throw std::domain_error("d must lie in (0,1)");
  return 2.0 * d * (1.0 - d) * beta * beta;
}

double solve_residual_param(TraitKind kind, double d, double beta, HeritabilityTarget target) {
  target.validate();
  const double vg = genetic_variance(d, beta);
  const double residual_var = vg * (1.0 - target.p_star) / target.p_star;
  if (!(residual_var > 0.0))
    throw std::domain_error("calibration failed: implied residual variance " +
                            std::to_string(residual_var) + " is not positive");
  switch (kind) {
    case TraitKind::Normal: return residual_var;
    case TraitKind::ChiSquareShift: return 0.5 * residual_var;
    case TraitKind::PoissonShift: return residual_var;
    case TraitKind::BinaryThreshold: break;
  }
  throw std::invalid_argument(
      "solve_residual_param applies to normal, chi-square and poisson kinds only");
}

double binary_penetrance(const TraitSpec& spec, int x) {
  if (spec.kind != TraitKind::BinaryThreshold)
    throw std::invalid_argument("binary_penetrance requires a binary threshold spec");
  spec.validate();
  return 1.0 - normal_cdf((spec.threshold - spec.alpha - spec.beta * x) / spec.residual);
}

namespace {

std::array<double, 3> hwe_weights(double d) {
  if (!(d > 0.0 && d < 1.0)) throw std::domain_error("d must lie in (0,1)");
  return {(1.0 - d) * (1.0 - d), 2.0 * d * (1.0 - d), d * d};
}

}  // namespace

double p_star_oracle(const TraitSpec& spec, double d) {
  spec.validate();
  const auto w = hwe_weights(d);
  if (spec.kind == TraitKind::BinaryThreshold) {
    double p_inf = 0.0, second_moment = 0.0;
    for (int x = 0; x < 3; ++x) {
      const double pen = binary_penetrance(spec, x);
      p_inf += w[x] * pen;
      second_moment += w[x] * pen * pen;
    }
    const double vg = std::max(0.0, second_moment - p_inf * p_inf);
    const double vy = p_inf * (1.0 - p_inf);
    return vy > 0.0 ? vg / vy : 0.0;
  }
  double mean = 0.0, second_moment = 0.0;
  for (int x = 0; x < 3; ++x) {
    const double mu = spec.alpha + spec.beta * x;
    mean += w[x] * mu;
    second_moment += w[x] * mu * mu;
  }
  const double vg = std::max(0.0, second_moment - mean * mean);
  return vg / (vg + spec.residual_variance());
}

double binary_prevalence(const TraitSpec& spec, double d) {
  const auto w = hwe_weights(d);
  double p_inf = 0.0;
  for (int x = 0; x < 3; ++x) p_inf += w[x] * binary_penetrance(spec, x);
  return p_inf;
}

double residual_from_latent(const TraitSpec& spec, double z) {
  spec.validate();
  switch (spec.kind) {
    case TraitKind::Normal:
      return std::sqrt(spec.residual) * z;
    case TraitKind::ChiSquareShift:
      return chi_square_quantile(normal_cdf(z), spec.residual);
    case TraitKind::PoissonShift:
      return static_cast<double>(poisson_quantile(normal_cdf(z), spec.residual));
    case TraitKind::BinaryThreshold:
      break;
  }
  throw std::logic_error("binary threshold traits are generated from the latent normal directly");
}

double generate_trait(const TraitSpec& spec, int x, Rng& rng) {
  spec.validate();
  const double z = rng.next_normal();
  const double location = spec.alpha + spec.beta * x;
  if (spec.kind == TraitKind::BinaryThreshold)
    return location + spec.residual * z > spec.threshold ? 1.0 : 0.0;
  return location + residual_from_latent(spec, z);
}

namespace {

// Cholesky factor of the 2x2 equicorrelation matrix.
struct Chol2 {
  double off, diag;
  explicit Chol2(double rho) : off(rho), diag(std::sqrt(1.0 - rho * rho)) {}
};

}  // namespace

PhenotypePanel generate_phenotypes(const FamilyPanel& panel,
                                   const std::vector<TraitSpec>& specs,
                                   const ResidualCorrelation& correlation,
                                   const Rng& stream) {
  if (specs.empty() || specs.size() > 2)
    throw std::invalid_argument("generate_phenotypes supports one or two traits");
  for (const auto& spec : specs) spec.validate();
  correlation.validate();
  const std::size_t k = specs.size();

  PhenotypePanel result;
  result.kinds.reserve(k);
  for (const auto& spec : specs) result.kinds.push_back(spec.kind);
  result.families.resize(panel.families.size());

  const Chol2 sib_chol(correlation.cross_sib);
  const Chol2 trait_chol(correlation.cross_trait);

  for (std::size_t f = 0; f < panel.families.size(); ++f) {
    Rng rng = stream.derive(f);

    // Latent normals with the separable correlation structure
    // corr(z[s][t], z[s'][t']) = cross_sib^{s != s'} * cross_trait^{t != t'}.
    double eps[2][2];
    for (std::size_t s = 0; s < 2; ++s)
      for (std::size_t t = 0; t < k; ++t) eps[s][t] = rng.next_normal();
    double latent[2][2];
    for (std::size_t t = 0; t < k; ++t) {
      latent[0][t] = eps[0][t];
      latent[1][t] = sib_chol.off * eps[0][t] + sib_chol.diag * eps[1][t];
    }
    if (k == 2) {
      for (std::size_t s = 0; s < 2; ++s) {
        const double z0 = latent[s][0];
        latent[s][1] = trait_chol.off * z0 + trait_chol.diag * latent[s][1];
      }
    }

    auto& family_out = result.families[f];
    family_out.resize(2);
    for (int s = 0; s < 2; ++s) {
      SibPhenotypes& sib = family_out[s];
      sib.sib_index = s;
      sib.y.resize(k);
      sib.observed.assign(k, 1);
      const int x = panel.families[f].sibs[s].qtl_allele_count;
      for (std::size_t t = 0; t < k; ++t) {
        const TraitSpec& spec = specs[t];
        const double location = spec.alpha + spec.beta * x;
        if (spec.kind == TraitKind::BinaryThreshold)
          sib.y[t] = location + spec.residual * latent[s][t] > spec.threshold ? 1.0 : 0.0;
        else
          sib.y[t] = location + residual_from_latent(spec, latent[s][t]);
      }
    }
  }
  return result;
}

}  // namespace qtdt
