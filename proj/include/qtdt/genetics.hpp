#pragma once

#include <cstdint>

#include "qtdt/rng.hpp"

namespace qtdt {

enum class MarkerAllele : std::uint8_t { M1 = 0, M2 = 1 };
enum class QtlAllele : std::uint8_t { D1 = 0, D2 = 1 };

/// One gamete: a marker allele and a QTL allele on the same chromosome.
struct Haplotype {
  MarkerAllele marker = MarkerAllele::M1;
  QtlAllele qtl = QtlAllele::D1;

  friend bool operator==(Haplotype a, Haplotype b) {
    return a.marker == b.marker && a.qtl == b.qtl;
  }
};

/// Population parameters for the two-locus model.
///   d          frequency of QTL allele D2
///   m          frequency of marker allele M2
///   delta_star LD coefficient normalized by its feasibility bound, in [0,1]
///   theta      recombination fraction between the two loci
struct LocusParams {
  double d = 0.1;
  double m = 0.5;
  double delta_star = 0.0;
  double theta = 0.01;

  void validate() const;  // throws std::domain_error on out-of-range fields
};

/// The four two-locus haplotype probabilities.
struct HaplotypeDist {
  double p_m2d2 = 0.0;
  double p_m1d2 = 0.0;
  double p_m2d1 = 0.0;
  double p_m1d1 = 0.0;

  double prob(Haplotype h) const;
  Haplotype sample(Rng& rng) const;
};

/// Raw LD coefficient: delta_star times min{d(1-m), m(1-d)}.
double compute_delta(const LocusParams& params);

/// Haplotype distribution for allele frequencies (d, m) and raw LD delta:
///   P(M2D2) = m d + delta          P(M1D2) = (1-m) d - delta
///   P(M2D1) = m (1-d) - delta      P(M1D1) = (1-m)(1-d) + delta
/// delta must lie in [-min(dm, (1-d)(1-m)), min(d(1-m), m(1-d))] (checked
/// with 1e-12 slack); otherwise throws naming the violated bound.
HaplotypeDist haplotype_distribution(double d, double m, double delta);

/// Convenience: the distribution induced by LocusParams.
HaplotypeDist haplotype_distribution(const LocusParams& params);

}  // namespace qtdt
