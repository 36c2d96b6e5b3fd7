#include "qtdt/genetics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qtdt {

namespace {

constexpr double kFeasTol = 1e-12;

void check_frequency(double value, const char* name) {
  if (!(value > 0.0 && value < 1.0))
    throw std::domain_error(std::string(name) + " must lie in (0,1), got " +
                            std::to_string(value));
}

double clamp_probability(double p) {
  if (p < 0.0 && p > -kFeasTol) return 0.0;
  if (p > 1.0 && p < 1.0 + kFeasTol) return 1.0;
  return p;
}

}  // namespace

void LocusParams::validate() const {
  check_frequency(d, "d");
  check_frequency(m, "m");
  if (!(delta_star >= 0.0 && delta_star <= 1.0))
    throw std::domain_error("delta_star must lie in [0,1], got " + std::to_string(delta_star));
  if (!(theta >= 0.0 && theta <= 0.5))
    throw std::domain_error("theta must lie in [0,0.5], got " + std::to_string(theta));
}

double HaplotypeDist::prob(Haplotype h) const {
  if (h.marker == MarkerAllele::M2)
    return h.qtl == QtlAllele::D2 ? p_m2d2 : p_m2d1;
  return h.qtl == QtlAllele::D2 ? p_m1d2 : p_m1d1;
}

Haplotype HaplotypeDist::sample(Rng& rng) const {
  const double u = rng.next_double();
  if (u < p_m2d2) return {MarkerAllele::M2, QtlAllele::D2};
  if (u < p_m2d2 + p_m1d2) return {MarkerAllele::M1, QtlAllele::D2};
  if (u < p_m2d2 + p_m1d2 + p_m2d1) return {MarkerAllele::M2, QtlAllele::D1};
  return {MarkerAllele::M1, QtlAllele::D1};
}

double compute_delta(const LocusParams& params) {
  params.validate();
  return params.delta_star * std::min(params.d * (1.0 - params.m),
                                      params.m * (1.0 - params.d));
}

HaplotypeDist haplotype_distribution(double d, double m, double delta) {
  check_frequency(d, "d");
  check_frequency(m, "m");
  const double lo = -std::min(d * m, (1.0 - d) * (1.0 - m));
  const double hi = std::min(d * (1.0 - m), m * (1.0 - d));
  if (delta < lo - kFeasTol)
    throw std::domain_error("delta=" + std::to_string(delta) +
                            " below the lower feasibility bound -min(dm,(1-d)(1-m)) = " +
                            std::to_string(lo));
  if (delta > hi + kFeasTol)
    throw std::domain_error("delta=" + std::to_string(delta) +
                            " above the upper feasibility bound min(d(1-m),m(1-d)) = " +
                            std::to_string(hi));
  HaplotypeDist dist;
  dist.p_m2d2 = clamp_probability(m * d + delta);
  dist.p_m1d2 = clamp_probability((1.0 - m) * d - delta);
  dist.p_m2d1 = clamp_probability(m * (1.0 - d) - delta);
  dist.p_m1d1 = clamp_probability((1.0 - m) * (1.0 - d) + delta);
  return dist;
}

HaplotypeDist haplotype_distribution(const LocusParams& params) {
  return haplotype_distribution(params.d, params.m, compute_delta(params));
}

}  // namespace qtdt
