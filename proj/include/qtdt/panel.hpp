#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace qtdt {

enum class TraitKind : std::uint8_t {
  Normal,          // N(alpha + beta*x, sigma^2)
  ChiSquareShift,  // alpha + beta*x + chi-square(df)
  PoissonShift,    // alpha + beta*x + Poisson(lambda)
  BinaryThreshold  // 1 iff N(alpha + beta*x, sigma^2) latent exceeds c
};

const char* to_string(TraitKind kind);

/// Trait values of one offspring, with a per-cell observed flag.
struct SibPhenotypes {
  int sib_index = 0;  // position of this offspring within its Family
  std::vector<double> y;
  std::vector<std::uint8_t> observed;

  bool complete() const {
    for (const auto flag : observed)
      if (!flag) return false;
    return true;
  }
};

/// Per-offspring trait vectors for a whole panel.  `families[f]` holds the
/// offspring records of family f (two after simulation; complete-case
/// filtering may retain fewer).
struct PhenotypePanel {
  std::vector<TraitKind> kinds;
  std::vector<std::vector<SibPhenotypes>> families;

  std::size_t trait_count() const { return kinds.size(); }
  std::size_t family_count() const { return families.size(); }

  bool all_observed() const {
    for (const auto& family : families)
      for (const auto& sib : family)
        if (!sib.complete()) return false;
    return true;
  }

  std::size_t missing_cell_count() const {
    std::size_t count = 0;
    for (const auto& family : families)
      for (const auto& sib : family)
        for (const auto flag : sib.observed)
          if (!flag) ++count;
    return count;
  }
};

}  // namespace qtdt
