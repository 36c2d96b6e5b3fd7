#include "qtdt/tdt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qtdt {

const char* to_string(Centering centering) {
  return centering == Centering::Mean ? "mean" : "median";
}

namespace {

double column_center(const DesignMatrix& m, std::size_t j, Centering centering) {
  if (centering == Centering::Mean) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) s += m.at(i, j);
    return s / static_cast<double>(m.rows);
  }
  std::vector<double> column(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) column[i] = m.at(i, j);
  std::sort(column.begin(), column.end());
  const std::size_t mid = m.rows / 2;
  return (m.rows % 2 == 1) ? column[mid] : 0.5 * (column[mid - 1] + column[mid]);
}

}  // namespace

TestResult multivariate_tdt(const TestInput& input) {
  const std::size_t n = input.z.size();
  const std::size_t k = input.phenotypes.cols;
  if (input.phenotypes.rows != n)
    throw std::invalid_argument("phenotype rows do not match transmission count");
  if (k == 0) throw std::invalid_argument("at least one phenotype is required");
  if (n < k + 5)
    throw std::invalid_argument("too few transmissions: need at least k+5 = " +
                                std::to_string(k + 5) + ", got " + std::to_string(n));
  for (const int zi : input.z)
    if (zi != 0 && zi != 1) throw std::invalid_argument("z values must be 0 or 1");
  for (const double v : input.phenotypes.data)
    if (!std::isfinite(v)) throw std::invalid_argument("phenotype values must be finite");

  TestResult result;
  result.df = static_cast<int>(k);
  result.centers.resize(k);
  for (std::size_t j = 0; j < k; ++j)
    result.centers[j] = column_center(input.phenotypes, j, input.centering);

  DesignMatrix x(n, k);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = static_cast<double>(input.z[i]);
    for (std::size_t j = 0; j < k; ++j)
      x.at(i, j) = input.phenotypes.at(i, j) - result.centers[j];
  }

  const FitResult fit = fit_logistic(x, y);
  const double null_ll = static_cast<double>(n) * std::log(0.5);
  result.lrt = std::max(0.0, 2.0 * (fit.log_likelihood - null_ll));
  result.p_value = chi_square_sf(result.lrt, static_cast<double>(k));
  result.coefficients = fit.coefficients;
  result.converged = fit.converged;
  result.separation = fit.separation;
  return result;
}

TestInput build_test_input(const FamilyPanel& families, const PhenotypePanel& panel,
                           Centering centering) {
  if (panel.family_count() != families.families.size())
    throw std::invalid_argument("phenotype panel and family panel sizes differ");
  const std::size_t k = panel.trait_count();

  std::size_t n = 0;
  for (const auto& family : panel.families)
    for (const auto& sib : family)
      if (sib.complete()) ++n;

  TestInput input;
  input.centering = centering;
  input.z.reserve(n);
  input.phenotypes = DesignMatrix(n, k);
  std::size_t row = 0;
  for (std::size_t f = 0; f < panel.families.size(); ++f) {
    for (const SibPhenotypes& sib : panel.families[f]) {
      if (!sib.complete()) continue;
      input.z.push_back(families.families[f].sibs[sib.sib_index].z);
      for (std::size_t j = 0; j < k; ++j) input.phenotypes.at(row, j) = sib.y[j];
      ++row;
    }
  }
  return input;
}

}  // namespace qtdt
