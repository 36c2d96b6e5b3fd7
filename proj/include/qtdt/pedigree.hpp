#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "qtdt/genetics.hpp"
#include "qtdt/rng.hpp"

namespace qtdt {

/// Unordered pair of marker alleles.
struct MarkerGenotype {
  MarkerAllele a = MarkerAllele::M1;
  MarkerAllele b = MarkerAllele::M1;

  bool heterozygous() const { return a != b; }
  int m2_count() const {
    return (a == MarkerAllele::M2 ? 1 : 0) + (b == MarkerAllele::M2 ? 1 : 0);
  }
  bool carries(MarkerAllele allele) const { return a == allele || b == allele; }
};

/// A parent's two phased haplotypes.
struct ParentGenotype {
  Haplotype hap_a;
  Haplotype hap_b;

  MarkerGenotype marker_genotype() const { return {hap_a.marker, hap_b.marker}; }
  bool marker_heterozygous() const { return hap_a.marker != hap_b.marker; }
};

/// One offspring: observed marker genotype, latent QTL allele count x
/// (copies of D2) and the transmission indicator Z.
struct Offspring {
  MarkerGenotype marker_genotype;
  int qtl_allele_count = 0;
  int z = 0;
};

struct Family {
  std::array<ParentGenotype, 2> parents;
  std::array<Offspring, 2> sibs;
};

struct FamilyPanel {
  LocusParams locus_params;
  std::vector<Family> families;
};

/// Two independent haplotype draws.
ParentGenotype sample_parent(const HaplotypeDist& dist, Rng& rng);

/// True iff at least one parent is heterozygous at the marker locus.
bool is_informative(const ParentGenotype& p1, const ParentGenotype& p2);

/// Gamete formation.  A parent heterozygous at both loci transmits each
/// parental haplotype with probability (1-theta)/2 and each recombinant with
/// probability theta/2; homozygosity at either locus collapses the cases to
/// the single-locus rules.
Haplotype transmit_haplotype(const ParentGenotype& parent, double theta, Rng& rng);

/// Transmission indicator from marker data alone:
///   offspring M1M1 -> 0, M2M2 -> 1;
///   offspring M1M2 with parents (M1M2, M2M2) -> 0, (M1M2, M1M1) -> 1,
///   (M1M2, M1M2) -> fair coin.
/// Throws on a Mendelian-inconsistent trio or a non-informative family
/// (cannot arise from internal simulation; guards file-based inputs).
int derive_z(const std::array<MarkerGenotype, 2>& parent_markers,
             MarkerGenotype offspring_marker, Rng& rng);

/// Simulate exactly n informative sib-pair families.  Non-informative parent
/// pairs are redrawn until informative.  Each family consumes an independent
/// sub-stream of `stream` keyed by its index, so panels are reproducible
/// under any parallel schedule.
FamilyPanel simulate_families(std::size_t n, const LocusParams& params, const Rng& stream);

}  // namespace qtdt
