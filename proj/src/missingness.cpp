#include "qtdt/missingness.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qtdt {

const char* to_string(MissingType type) {
  switch (type) {
    case MissingType::T1: return "t1";
    case MissingType::T2_1: return "t2_1";
    case MissingType::T2_3: return "t2_3";
    case MissingType::T2_4: return "t2_4";
  }
  return "?";
}

std::size_t selected_family_count(double miss_p, std::size_t n_families) {
  if (!(miss_p >= 0.0 && miss_p < 1.0))
    throw std::invalid_argument("miss_p must lie in [0,1), got " + std::to_string(miss_p));
  return static_cast<std::size_t>(std::floor(miss_p * static_cast<double>(n_families) + 0.5));
}

std::vector<std::pair<std::size_t, std::vector<CellAddress>>> draw_missingness_mask(
    std::size_t n_families, std::size_t trait_count, MissingType type, double miss_p,
    Rng& rng) {
  const std::size_t required_k = (type == MissingType::T1) ? 1 : 2;
  if (trait_count != required_k)
    throw std::invalid_argument(std::string("missing type ") + to_string(type) +
                                " requires a panel with " + std::to_string(required_k) +
                                " trait(s), got " + std::to_string(trait_count));

  const std::size_t n_selected = selected_family_count(miss_p, n_families);
  std::vector<std::size_t> order(n_families);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < n_selected; ++i) {
    const std::size_t j = i + rng.next_below(n_families - i);
    std::swap(order[i], order[j]);
  }

  std::vector<std::pair<std::size_t, std::vector<CellAddress>>> mask;
  mask.reserve(n_selected);
  for (std::size_t i = 0; i < n_selected; ++i) {
    std::vector<CellAddress> cells;
    switch (type) {
      case MissingType::T1: {
        cells.push_back({static_cast<int>(rng.next_below(2)), 0});
        break;
      }
      case MissingType::T2_1: {
        const int c = static_cast<int>(rng.next_below(4));
        cells.push_back({c / 2, c % 2});
        break;
      }
      case MissingType::T2_3: {
        const int sib = static_cast<int>(rng.next_below(2));
        cells.push_back({sib, 0});
        cells.push_back({sib, 1});
        break;
      }
      case MissingType::T2_4: {
        const int kept = static_cast<int>(rng.next_below(4));
        for (int c = 0; c < 4; ++c)
          if (c != kept) cells.push_back({c / 2, c % 2});
        break;
      }
    }
    mask.emplace_back(order[i], std::move(cells));
  }
  return mask;
}

PhenotypePanel apply_missingness(const PhenotypePanel& panel, MissingType type,
                                 double miss_p, Rng& rng) {
  if (!panel.all_observed())
    throw std::invalid_argument("apply_missingness requires a complete panel");
  // Mask addresses are drawn from dimensions only; trait values and Z are
  // never consulted.
  const auto mask =
      draw_missingness_mask(panel.family_count(), panel.trait_count(), type, miss_p, rng);
  PhenotypePanel masked = panel;
  for (const auto& [family_index, cells] : mask)
    for (const CellAddress cell : cells)
      masked.families[family_index][cell.sib].observed[cell.trait] = 0;
  return masked;
}

const char* to_string(DeletionScope scope) {
  return scope == DeletionScope::Family ? "family" : "offspring";
}

PhenotypePanel deleted_panel(const PhenotypePanel& masked, DeletionScope scope) {
  PhenotypePanel result;
  result.kinds = masked.kinds;
  result.families.resize(masked.families.size());
  for (std::size_t f = 0; f < masked.families.size(); ++f) {
    if (scope == DeletionScope::Family) {
      bool intact = true;
      for (const SibPhenotypes& sib : masked.families[f])
        if (!sib.complete()) intact = false;
      if (!intact) continue;
      result.families[f] = masked.families[f];
    } else {
      for (const SibPhenotypes& sib : masked.families[f])
        if (sib.complete()) result.families[f].push_back(sib);
    }
  }
  return result;
}

}  // namespace qtdt
