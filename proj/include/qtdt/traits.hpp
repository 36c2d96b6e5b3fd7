#pragma once

#include <vector>

#include "qtdt/panel.hpp"
#include "qtdt/pedigree.hpp"
#include "qtdt/rng.hpp"

namespace qtdt {

/// One trait's generative model conditional on the QTL allele count x:
/// location alpha, additive effect beta per copy of D2, and a kind-specific
/// residual parameter:
///   Normal          residual = sigma^2
///   ChiSquareShift  residual = df (fractional df allowed)
///   PoissonShift    residual = lambda
///   BinaryThreshold residual = sigma of the latent normal; threshold = c
struct TraitSpec {
  TraitKind kind = TraitKind::Normal;
  double alpha = 0.0;
  double beta = 0.0;
  double residual = 1.0;
  double threshold = 0.0;

  void validate() const;
  /// Variance of the residual component (Normal sigma^2, chi-square 2*df,
  /// Poisson lambda).  Not defined for BinaryThreshold.
  double residual_variance() const;
};

struct HeritabilityTarget {
  double p_star = 0.1;
  void validate() const;  // requires 0 < p_star < 1
};

/// Gaussian-copula correlation injected into the residual components of a
/// sib pair's trait vectors: `cross_trait` couples the two traits of one
/// offspring (rho1), `cross_sib` couples the same trait across the two
/// offspring (rho2).  Marginals are preserved exactly because each latent
/// normal is mapped through the residual's own quantile function.
struct ResidualCorrelation {
  double cross_trait = 0.0;
  double cross_sib = 0.0;
  void validate() const;
};

/// Variance of the additive genetic component E(Y|x) = alpha + beta*x under
/// HWE, x ~ Binomial(2, d): 2 d (1-d) beta^2.
double genetic_variance(double d, double beta);

/// Residual parameter making the QTL explain p_star of the trait variance:
/// residual variance r = genetic_variance * (1 - p*) / p*, reported as
/// sigma^2 = r (Normal), df = r/2 (ChiSquareShift) or lambda = r
/// (PoissonShift).  Throws if the implied residual is not positive.
double solve_residual_param(TraitKind kind, double d, double beta, HeritabilityTarget target);

/// P(Y = 1 | x) = 1 - Phi((c - alpha - beta*x)/sigma) for BinaryThreshold.
double binary_penetrance(const TraitSpec& spec, int x);

/// Exact p* = V(E(Y|x))/V(Y) by enumeration over x in {0,1,2} with
/// Binomial(2,d) weights.  For BinaryThreshold, V(Y) = p_inf(1 - p_inf).
double p_star_oracle(const TraitSpec& spec, double d);

/// Population prevalence of a BinaryThreshold trait at allele frequency d.
double binary_prevalence(const TraitSpec& spec, double d);

/// Residual draw mapped from a standard-normal latent z (copula-ready).
double residual_from_latent(const TraitSpec& spec, double z);

/// One trait value at allele count x.
double generate_trait(const TraitSpec& spec, int x, Rng& rng);

/// Complete phenotype panel for a simulated family panel; one trait column
/// per spec.  Residual correlation is injected per family via the Gaussian
/// copula; `stream` is split per family index.
PhenotypePanel generate_phenotypes(const FamilyPanel& panel,
                                   const std::vector<TraitSpec>& specs,
                                   const ResidualCorrelation& correlation,
                                   const Rng& stream);

}  // namespace qtdt
