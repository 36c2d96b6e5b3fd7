#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "qtdt/special.hpp"
#include "qtdt/tdt.hpp"
#include "qtdt/traits.hpp"

using namespace qtdt;

namespace {

TestInput make_input(const std::vector<int>& z, const std::vector<std::vector<double>>& y,
                     Centering centering = Centering::Mean) {
  TestInput input;
  input.z = z;
  input.centering = centering;
  input.phenotypes = DesignMatrix(y.size(), y.front().size());
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = 0; j < y[i].size(); ++j) input.phenotypes.at(i, j) = y[i][j];
  return input;
}

}  // namespace

TEST_SUITE("tdt") {

TEST_CASE("symmetric data gives a null statistic") {
  // The 4-row symmetric pattern sits below the k+5 floor; repeat it once.
  const TestInput padded =
      make_input({0, 1, 0, 1, 0, 1, 0, 1}, {{+1}, {+1}, {-1}, {-1}, {+2}, {+2}, {-2}, {-2}});
  const TestResult result = multivariate_tdt(padded);
  CHECK(result.lrt == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(result.p_value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(result.converged);
}

TEST_CASE("the statistic agrees with a derivative-free likelihood search") {
  Rng rng(41);
  const std::size_t n = 60;
  std::vector<int> z(n);
  std::vector<std::vector<double>> y(n, std::vector<double>(1));
  for (std::size_t i = 0; i < n; ++i) {
    y[i][0] = rng.next_normal() + 5.0;
    const double p = 1.0 / (1.0 + std::exp(-(0.6 * (y[i][0] - 5.0))));
    z[i] = rng.next_bernoulli(p) ? 1 : 0;
  }
  const TestResult result = multivariate_tdt(make_input(z, y));
  REQUIRE(result.converged);

  double mean = 0.0;
  for (const auto& row : y) mean += row[0];
  mean /= static_cast<double>(n);
  std::vector<double> x(n);
  std::vector<double> zf(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = y[i][0] - mean;
    zf[i] = z[i];
  }
  const auto reference = oracle::coordinate_ascent(
      [&](const std::vector<double>& beta) {
        return oracle::logistic_loglik(x, n, 1, zf, beta);
      },
      1);
  const double reference_lrt =
      2.0 * (oracle::logistic_loglik(x, n, 1, zf, reference) -
             static_cast<double>(n) * std::log(0.5));
  CHECK(result.lrt == doctest::Approx(reference_lrt).epsilon(1e-3));
  CHECK(result.coefficients[0] == doctest::Approx(reference[0]).epsilon(1e-3));
}

TEST_CASE("p value is exactly the chi-square tail of the statistic") {
  Rng rng(42);
  const std::size_t n = 80;
  std::vector<int> z(n);
  std::vector<std::vector<double>> y(n, std::vector<double>(2));
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = rng.next_bernoulli(0.5) ? 1 : 0;
    y[i][0] = rng.next_normal();
    y[i][1] = rng.next_normal() * 2.0 + 1.0;
  }
  const TestResult result = multivariate_tdt(make_input(z, y));
  CHECK(result.df == 2);
  CHECK(result.p_value == chi_square_sf(result.lrt, 2));
}

TEST_CASE("rescaling a trait leaves the decision invariant") {
  Rng rng(43);
  const std::size_t n = 120;
  std::vector<int> z(n);
  std::vector<std::vector<double>> y(n, std::vector<double>(2)), scaled = {};
  scaled.assign(n, std::vector<double>(2));
  for (std::size_t i = 0; i < n; ++i) {
    y[i][0] = rng.next_normal() + 2.0;
    y[i][1] = rng.next_normal() - 1.0;
    const double p = 1.0 / (1.0 + std::exp(-(0.4 * (y[i][0] - 2.0) - 0.3 * (y[i][1] + 1.0))));
    z[i] = rng.next_bernoulli(p) ? 1 : 0;
    scaled[i][0] = 37.0 * y[i][0];
    scaled[i][1] = 0.01 * y[i][1];
  }
  const TestResult base = multivariate_tdt(make_input(z, y));
  const TestResult rescaled = multivariate_tdt(make_input(z, scaled));
  CHECK(base.lrt == doctest::Approx(rescaled.lrt).epsilon(1e-8));
  CHECK(rescaled.coefficients[0] == doctest::Approx(base.coefficients[0] / 37.0).epsilon(1e-6));
}

TEST_CASE("the statistic is never negative") {
  Rng rng(44);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 30;
    std::vector<int> z(n);
    std::vector<std::vector<double>> y(n, std::vector<double>(1));
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = rng.next_bernoulli(0.5) ? 1 : 0;
      y[i][0] = rng.next_normal();
    }
    const TestResult result = multivariate_tdt(make_input(z, y));
    CHECK(result.lrt >= 0.0);
  }
}

TEST_CASE("median centering changes the centers, not the contract") {
  Rng rng(45);
  const std::size_t n = 101;
  std::vector<int> z(n);
  std::vector<std::vector<double>> y(n, std::vector<double>(1));
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = rng.next_bernoulli(0.5) ? 1 : 0;
    y[i][0] = std::exp(rng.next_normal());  // skewed, so mean != median
  }
  const TestResult mean_c = multivariate_tdt(make_input(z, y, Centering::Mean));
  const TestResult median_c = multivariate_tdt(make_input(z, y, Centering::Median));
  CHECK(mean_c.centers[0] != median_c.centers[0]);
  CHECK(median_c.p_value == chi_square_sf(median_c.lrt, 1));
}

TEST_CASE("permuting z against y restores the null distribution") {
  Rng rng(46);
  const std::size_t n = 600;
  std::vector<int> z(n);
  std::vector<std::vector<double>> y(n, std::vector<double>(1));
  for (std::size_t i = 0; i < n; ++i) {
    y[i][0] = rng.next_normal() + 1.0;
    const double p = 1.0 / (1.0 + std::exp(-0.8 * (y[i][0] - 1.0)));
    z[i] = rng.next_bernoulli(p) ? 1 : 0;
  }
  std::vector<double> stats;
  std::vector<int> permuted = z;
  for (int rep = 0; rep < 1000; ++rep) {
    for (std::size_t i = n; i-- > 1;)
      std::swap(permuted[i], permuted[rng.next_below(i + 1)]);
    stats.push_back(multivariate_tdt(make_input(permuted, y)).lrt);
  }
  const double d = oracle::ks_statistic(
      stats, [](double x) { return 1.0 - chi_square_sf(x, 1.0); });
  CHECK(d < 1.628 / std::sqrt(1000.0));  // KS critical value at size .01
}

TEST_CASE("a separating phenotype is flagged but still scored") {
  std::vector<int> z(40);
  std::vector<std::vector<double>> y(40, std::vector<double>(1));
  for (int i = 0; i < 40; ++i) {
    z[i] = i < 20 ? 0 : 1;
    y[i][0] = i < 20 ? -1.0 - 0.01 * i : 1.0 + 0.01 * i;  // perfectly separates z
  }
  const TestResult result = multivariate_tdt(make_input(z, y));
  CHECK_FALSE(result.converged);
  CHECK(result.separation);
  CHECK(result.p_value >= 0.0);
  CHECK(result.p_value == chi_square_sf(result.lrt, 1));
  CHECK(result.p_value < 0.001);  // the capped fit still rejects decisively
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(multivariate_tdt(make_input({0, 1, 0}, {{1.0}, {2.0}, {3.0}})),
                  std::invalid_argument);  // below the k+5 floor
  TestInput bad = make_input({0, 1, 0, 1, 0, 1}, {{1}, {2}, {3}, {4}, {5}, {6}});
  bad.z[2] = 7;
  CHECK_THROWS_AS(multivariate_tdt(bad), std::invalid_argument);
}

TEST_CASE("panel assembly pairs transmissions with complete trait vectors") {
  const FamilyPanel families = simulate_families(40, {0.2, 0.5, 0.5, 0.01}, Rng(47));
  const std::vector<TraitSpec> specs{{TraitKind::Normal, 5.0, 1.0, 1.62, 0.0}};
  PhenotypePanel panel = generate_phenotypes(families, specs, {}, Rng(48));
  panel.families[3][1].observed[0] = 0;  // one incomplete offspring
  const TestInput input = build_test_input(families, panel, Centering::Mean);
  CHECK(input.z.size() == 79);
  CHECK(input.phenotypes.rows == 79);
  for (std::size_t i = 0; i < input.z.size(); ++i) CHECK((input.z[i] == 0 || input.z[i] == 1));
}

}  // TEST_SUITE
