#include "qtdt/pedigree.hpp"

#include <stdexcept>

namespace qtdt {

namespace {

bool trio_consistent(const std::array<MarkerGenotype, 2>& parents, MarkerGenotype off) {
  const auto feasible = [&](MarkerAllele from_first, MarkerAllele from_second) {
    return parents[0].carries(from_first) && parents[1].carries(from_second);
  };
  return feasible(off.a, off.b) || feasible(off.b, off.a);
}

}  // namespace

ParentGenotype sample_parent(const HaplotypeDist& dist, Rng& rng) {
  ParentGenotype parent;
  parent.hap_a = dist.sample(rng);
  parent.hap_b = dist.sample(rng);
  return parent;
}

bool is_informative(const ParentGenotype& p1, const ParentGenotype& p2) {
  return p1.marker_heterozygous() || p2.marker_heterozygous();
}

Haplotype transmit_haplotype(const ParentGenotype& parent, double theta, Rng& rng) {
  if (!(theta >= 0.0 && theta <= 0.5))
    throw std::domain_error("theta must lie in [0,0.5]");
  // Single draw over {hap_a, hap_b, recombinant_a, recombinant_b}; when the
  // parent is homozygous at a locus the cases coincide and the distribution
  // collapses to the single-locus table.
  const double u = rng.next_double();
  const double half_parental = 0.5 * (1.0 - theta);
  if (u < half_parental) return parent.hap_a;
  if (u < 2.0 * half_parental) return parent.hap_b;
  if (u < 2.0 * half_parental + 0.5 * theta)
    return {parent.hap_a.marker, parent.hap_b.qtl};
  return {parent.hap_b.marker, parent.hap_a.qtl};
}

int derive_z(const std::array<MarkerGenotype, 2>& parent_markers,
             MarkerGenotype offspring_marker, Rng& rng) {
  if (!trio_consistent(parent_markers, offspring_marker))
    throw std::invalid_argument(
        "Mendelian inconsistency: offspring marker genotype impossible given parents");
  if (!parent_markers[0].heterozygous() && !parent_markers[1].heterozygous())
    throw std::invalid_argument("family is not informative: both parents marker-homozygous");

  const int off_m2 = offspring_marker.m2_count();
  if (off_m2 == 0) return 0;
  if (off_m2 == 2) return 1;

  const bool het0 = parent_markers[0].heterozygous();
  const bool het1 = parent_markers[1].heterozygous();
  if (het0 && het1) return rng.next_bernoulli(0.5) ? 1 : 0;
  // Exactly one heterozygous parent: the homozygous one fixes its allele.
  const MarkerGenotype& hom = het0 ? parent_markers[1] : parent_markers[0];
  return hom.m2_count() == 2 ? 0 : 1;
}

FamilyPanel simulate_families(std::size_t n, const LocusParams& params, const Rng& stream) {
  if (n < 1) throw std::invalid_argument("simulate_families requires n >= 1");
  params.validate();
  const HaplotypeDist dist = haplotype_distribution(params);

  FamilyPanel panel;
  panel.locus_params = params;
  panel.families.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = stream.derive(i);
    Family& family = panel.families[i];
    do {
      family.parents[0] = sample_parent(dist, rng);
      family.parents[1] = sample_parent(dist, rng);
    } while (!is_informative(family.parents[0], family.parents[1]));

    const std::array<MarkerGenotype, 2> parent_markers = {
        family.parents[0].marker_genotype(), family.parents[1].marker_genotype()};
    for (Offspring& sib : family.sibs) {
      const Haplotype from_first = transmit_haplotype(family.parents[0], params.theta, rng);
      const Haplotype from_second = transmit_haplotype(family.parents[1], params.theta, rng);
      sib.marker_genotype = {from_first.marker, from_second.marker};
      sib.qtl_allele_count = (from_first.qtl == QtlAllele::D2 ? 1 : 0) +
                             (from_second.qtl == QtlAllele::D2 ? 1 : 0);
      sib.z = derive_z(parent_markers, sib.marker_genotype, rng);
    }
  }
  return panel;
}

}  // namespace qtdt
