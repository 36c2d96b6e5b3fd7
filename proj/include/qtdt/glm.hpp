#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qtdt/special.hpp"

namespace qtdt {

/// Dense row-major design matrix.  Callers control whether an intercept
/// column is present.
struct DesignMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DesignMatrix() = default;
  DesignMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

struct FitResult {
  std::vector<double> coefficients;
  double log_likelihood = 0.0;
  bool converged = false;
  int iterations = 0;
  /// Set when a logistic/Poisson likelihood diverges (complete separation or
  /// a boundary MLE); the coefficients are the capped fit.
  bool separation = false;
  /// Log-likelihood after each accepted IRLS step (diagnostics).
  std::vector<double> ll_trace;
};

/// Ordinary least squares via Householder QR.  The log-likelihood is the
/// normal-model value at the MLE variance RSS/n.  Throws on a rank-deficient
/// design.
FitResult fit_ols(const DesignMatrix& x, std::span<const double> y);

/// Logistic regression (y in {0,1}) by iteratively reweighted least squares
/// with step-halving.  Converged when max|score| <= 1e-8 or the coefficient
/// step max-norm <= 1e-10, within 50 iterations.
FitResult fit_logistic(const DesignMatrix& x, std::span<const double> y);

/// Log-link Poisson regression (y nonnegative integers); same IRLS contract
/// as fit_logistic.
FitResult fit_poisson(const DesignMatrix& x, std::span<const double> y);

/// Linear predictor of row i at the given coefficients.
double linear_predictor(const DesignMatrix& x, std::size_t i, std::span<const double> beta);

}  // namespace qtdt
