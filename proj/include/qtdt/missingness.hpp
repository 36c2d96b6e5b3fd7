#pragma once

#include <cstddef>
#include <vector>

#include "qtdt/panel.hpp"
#include "qtdt/rng.hpp"

namespace qtdt {

/// Missing-data taxonomy for sib-pair trait panels.  With one trait per
/// offspring (k=1) only T1 applies; the T2 patterns address the four cells
/// (x1, y1, x2, y2) of a two-trait sib pair.
enum class MissingType {
  T1,    // the single trait of one offspring is missing
  T2_1,  // any one of the four cells is missing
  T2_3,  // both traits of one offspring are missing
  T2_4   // any three of the four cells are missing
};

const char* to_string(MissingType type);

/// Half-up rounding of miss_p * n: the number of families selected for
/// masking.
std::size_t selected_family_count(double miss_p, std::size_t n_families);

/// Address of one trait cell within a family.
struct CellAddress {
  int sib = 0;
  int trait = 0;
};

/// The cells to mask, chosen from panel dimensions and randomness alone so
/// that missingness is completely at random by construction.  Returns one
/// entry per selected family: (family index, cells to blank).
std::vector<std::pair<std::size_t, std::vector<CellAddress>>> draw_missingness_mask(
    std::size_t n_families, std::size_t trait_count, MissingType type, double miss_p,
    Rng& rng);

/// Apply the taxonomy to a complete panel: exactly round(miss_p * n)
/// families are selected and within each the pattern is drawn uniformly
/// among those the type admits.
PhenotypePanel apply_missingness(const PhenotypePanel& panel, MissingType type,
                                 double miss_p, Rng& rng);

/// Complete-case granularity.  Family scope drops the whole sib pair when
/// any cell is missing (the only reading under which imputation can beat
/// deletion here: an offspring's transmission indicator is conditionally
/// independent of its sib's phenotypes given the parents, so cross-sib
/// imputed values carry no own-transmission signal and the benefit of
/// imputation is the rescued complete sib).  Offspring scope drops only the
/// records with missing cells.
enum class DeletionScope { Family, Offspring };

const char* to_string(DeletionScope scope);

/// Complete-case companion dataset at the chosen granularity.
PhenotypePanel deleted_panel(const PhenotypePanel& masked,
                             DeletionScope scope = DeletionScope::Family);

}  // namespace qtdt
