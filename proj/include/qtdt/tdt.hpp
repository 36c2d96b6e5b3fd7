#pragma once

#include <vector>

#include "qtdt/glm.hpp"
#include "qtdt/panel.hpp"
#include "qtdt/pedigree.hpp"

namespace qtdt {

enum class Centering { Mean, Median };

const char* to_string(Centering centering);

/// Input to the transmission test: one row per transmission, the offspring's
/// indicator z and its complete k-vector of phenotype values.
struct TestInput {
  std::vector<int> z;
  DesignMatrix phenotypes;  // N x k, raw (uncentered) values
  Centering centering = Centering::Mean;
};

struct TestResult {
  double lrt = 0.0;
  int df = 0;
  double p_value = 1.0;
  std::vector<double> coefficients;
  bool converged = false;
  bool separation = false;
  std::vector<double> centers;
};

/// The quantitative-trait transmission test: each trait is centered by the
/// chosen statistic of the analyzed sample, a logistic model of z on the
/// centered phenotypes is fit without an intercept, and the statistic
///   LRT = 2 * (ll_full - N * ln(1/2))
/// is referred to chi-square with k degrees of freedom (the null model has
/// no free parameter).  Non-convergence is flagged; the p-value is still
/// reported from the capped fit.
TestResult multivariate_tdt(const TestInput& input);

/// Assemble test rows from a panel: one transmission per offspring record
/// whose trait vector is complete, with z looked up in the family panel.
TestInput build_test_input(const FamilyPanel& families, const PhenotypePanel& panel,
                           Centering centering = Centering::Mean);

}  // namespace qtdt
