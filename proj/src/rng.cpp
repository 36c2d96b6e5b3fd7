#include "qtdt/rng.hpp"

#include "qtdt/special.hpp"

namespace qtdt {

double Rng::next_normal() noexcept { return normal_quantile(next_double_open()); }

}  // namespace qtdt
