#include "qtdt/glm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qtdt {

namespace {

void check_shape(const DesignMatrix& x, std::span<const double> y) {
  if (x.rows != y.size())
    throw std::invalid_argument("design matrix rows (" + std::to_string(x.rows) +
                                ") do not match response length (" +
                                std::to_string(y.size()) + ")");
  if (x.cols == 0 || x.rows == 0) throw std::invalid_argument("empty design matrix");
}

// Solve the SPD system a * x = b in place; a is p x p row-major.
// Returns false when a pivot collapses (rank-deficient weighted design).
bool cholesky_solve(std::vector<double>& a, std::vector<double>& b, std::size_t p) {
  for (std::size_t j = 0; j < p; ++j) {
    double diag = a[j * p + j];
    for (std::size_t k = 0; k < j; ++k) diag -= a[j * p + k] * a[j * p + k];
    if (!(diag > 1e-12 * std::max(1.0, std::fabs(a[j * p + j])))) return false;
    const double root = std::sqrt(diag);
    a[j * p + j] = root;
    for (std::size_t i = j + 1; i < p; ++i) {
      double v = a[i * p + j];
      for (std::size_t k = 0; k < j; ++k) v -= a[i * p + k] * a[j * p + k];
      a[i * p + j] = v / root;
    }
  }
  for (std::size_t i = 0; i < p; ++i) {
    double v = b[i];
    for (std::size_t k = 0; k < i; ++k) v -= a[i * p + k] * b[k];
    b[i] = v / a[i * p + i];
  }
  for (std::size_t ii = p; ii-- > 0;) {
    double v = b[ii];
    for (std::size_t k = ii + 1; k < p; ++k) v -= a[k * p + ii] * b[k];
    b[ii] = v / a[ii * p + ii];
  }
  return true;
}

struct IrlsFamily {
  double (*mean)(double eta);
  double (*weight)(double mu);
  double (*loglik)(std::span<const double> y, const std::vector<double>& eta);
};

double logistic_mean(double eta) { return 1.0 / (1.0 + std::exp(-eta)); }
double logistic_weight(double mu) { return mu * (1.0 - mu); }
double logistic_loglik(std::span<const double> y, const std::vector<double>& eta) {
  double ll = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    // y*eta - log(1 + e^eta), stable for large |eta|
    const double e = eta[i];
    ll += y[i] * e - (e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e)));
  }
  return ll;
}

double poisson_mean(double eta) { return std::exp(eta); }
double poisson_weight(double mu) { return mu; }
double poisson_loglik(std::span<const double> y, const std::vector<double>& eta) {
  double ll = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    ll += y[i] * eta[i] - std::exp(eta[i]) - log_gamma(y[i] + 1.0);
  return ll;
}

FitResult irls_fit(const DesignMatrix& x, std::span<const double> y, const IrlsFamily& family) {
  check_shape(x, y);
  const std::size_t n = x.rows, p = x.cols;

  std::vector<double> beta(p, 0.0);
  std::vector<double> eta(n, 0.0);
  std::vector<double> mu(n), candidate_beta(p), candidate_eta(n);
  std::vector<double> hessian(p * p), step(p);

  FitResult result;
  double ll = family.loglik(y, eta);
  result.ll_trace.push_back(ll);

  for (int iter = 1; iter <= 50; ++iter) {
    result.iterations = iter;
    double score_max = 0.0;
    std::fill(step.begin(), step.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) mu[i] = family.mean(eta[i]);
    for (std::size_t j = 0; j < p; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += x.at(i, j) * (y[i] - mu[i]);
      step[j] = s;
      score_max = std::max(score_max, std::fabs(s));
    }
    if (score_max <= 1e-8) {
      result.converged = true;
      break;
    }

    std::fill(hessian.begin(), hessian.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = family.weight(mu[i]);
      for (std::size_t j = 0; j < p; ++j) {
        const double wxj = w * x.at(i, j);
        for (std::size_t k = j; k < p; ++k) hessian[j * p + k] += wxj * x.at(i, k);
      }
    }
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t k = 0; k < j; ++k) hessian[j * p + k] = hessian[k * p + j];
    if (!cholesky_solve(hessian, step, p))
      throw std::runtime_error("singular weighted design in IRLS (rank-deficient predictors)");

    // Step-halving keeps the log-likelihood nondecreasing.
    double t = 1.0, candidate_ll = -std::numeric_limits<double>::infinity();
    for (int halving = 0; halving < 60; ++halving) {
      for (std::size_t j = 0; j < p; ++j) candidate_beta[j] = beta[j] + t * step[j];
      for (std::size_t i = 0; i < n; ++i) {
        double e = 0.0;
        for (std::size_t j = 0; j < p; ++j) e += x.at(i, j) * candidate_beta[j];
        candidate_eta[i] = e;
      }
      candidate_ll = family.loglik(y, candidate_eta);
      if (candidate_ll >= ll - 1e-12) break;
      t *= 0.5;
    }
    if (candidate_ll < ll - 1e-12) break;  // no ascent possible at fp resolution

    double step_max = 0.0, beta_max = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      step_max = std::max(step_max, std::fabs(t * step[j]));
      beta_max = std::max(beta_max, std::fabs(candidate_beta[j]));
    }
    beta = candidate_beta;
    eta = candidate_eta;
    ll = candidate_ll;
    result.ll_trace.push_back(ll);

    if (step_max <= 1e-10) {
      result.converged = true;
      break;
    }
    if (beta_max > 1e3) {
      // Coefficients run away while the likelihood keeps improving.
      result.separation = true;
      result.converged = false;
      break;
    }
  }

  // A likelihood at (numerically) zero means a perfect fit: the MLE sits at
  // infinity and the score test above stops on a plateau.
  if (ll > -1e-6) {
    result.separation = true;
    result.converged = false;
  }

  result.coefficients = std::move(beta);
  result.log_likelihood = ll;
  return result;
}

}  // namespace

FitResult fit_ols(const DesignMatrix& x, std::span<const double> y) {
  check_shape(x, y);
  const std::size_t n = x.rows, p = x.cols;
  if (n < p) throw std::invalid_argument("fit_ols requires rows >= columns");

  // Householder QR of a working copy; y is reduced alongside.
  DesignMatrix a = x;
  std::vector<double> rhs(y.begin(), y.end());
  std::vector<double> col_scale(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += x.at(i, j) * x.at(i, j);
    col_scale[j] = std::sqrt(norm);
  }

  for (std::size_t j = 0; j < p; ++j) {
    double norm = 0.0;
    for (std::size_t i = j; i < n; ++i) norm += a.at(i, j) * a.at(i, j);
    norm = std::sqrt(norm);
    if (norm <= 1e-12 * std::max(1.0, col_scale[j]))
      throw std::runtime_error("singular design matrix: column " + std::to_string(j) +
                               " is linearly dependent");
    // Sign-match the pivot so the reflector head is >= 1 (no cancellation).
    if (a.at(j, j) < 0) norm = -norm;
    for (std::size_t i = j; i < n; ++i) a.at(i, j) /= norm;
    a.at(j, j) += 1.0;
    for (std::size_t k = j + 1; k < p; ++k) {
      double s = 0.0;
      for (std::size_t i = j; i < n; ++i) s += a.at(i, j) * a.at(i, k);
      s = -s / a.at(j, j);
      for (std::size_t i = j; i < n; ++i) a.at(i, k) += s * a.at(i, j);
    }
    double s = 0.0;
    for (std::size_t i = j; i < n; ++i) s += a.at(i, j) * rhs[i];
    s = -s / a.at(j, j);
    for (std::size_t i = j; i < n; ++i) rhs[i] += s * a.at(i, j);
    a.at(j, j) = -norm;  // diagonal of R
  }

  FitResult result;
  result.coefficients.assign(p, 0.0);
  for (std::size_t jj = p; jj-- > 0;) {
    double v = rhs[jj];
    for (std::size_t k = jj + 1; k < p; ++k) v -= a.at(jj, k) * result.coefficients[k];
    result.coefficients[jj] = v / a.at(jj, jj);
  }

  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - linear_predictor(x, i, result.coefficients);
    rss += r * r;
  }
  const double sigma2 = rss / static_cast<double>(n);
  result.log_likelihood =
      sigma2 > 0.0 ? -0.5 * static_cast<double>(n) * (std::log(2.0 * M_PI * sigma2) + 1.0)
                   : std::numeric_limits<double>::infinity();
  result.converged = true;
  result.iterations = 1;
  result.ll_trace.push_back(result.log_likelihood);
  return result;
}

FitResult fit_logistic(const DesignMatrix& x, std::span<const double> y) {
  for (const double v : y)
    if (v != 0.0 && v != 1.0)
      throw std::invalid_argument("fit_logistic requires a 0/1 response");
  static const IrlsFamily family{logistic_mean, logistic_weight, logistic_loglik};
  return irls_fit(x, y, family);
}

FitResult fit_poisson(const DesignMatrix& x, std::span<const double> y) {
  for (const double v : y)
    if (!(v >= 0.0) || std::fabs(v - std::round(v)) > 1e-9)
      throw std::invalid_argument("fit_poisson requires nonnegative integer responses");
  static const IrlsFamily family{poisson_mean, poisson_weight, poisson_loglik};
  return irls_fit(x, y, family);
}

double linear_predictor(const DesignMatrix& x, std::size_t i, std::span<const double> beta) {
  double eta = 0.0;
  for (std::size_t j = 0; j < x.cols; ++j) eta += x.at(i, j) * beta[j];
  return eta;
}

}  // namespace qtdt
