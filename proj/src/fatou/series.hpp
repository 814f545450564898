#pragma once

// Truncated complex power series in one variable.

#include "pararc/polyalg/rational.hpp"

#include <vector>

namespace pararc::fatou::detail {

using Series = std::vector<Complex>;

Series series_mul(const Series& x, const Series& y, std::size_t order);
Series series_pow(const Series& x, int n, std::size_t order);
// 1/x with x[0] != 0.
Series series_inverse(const Series& x, std::size_t order);
// log x with x[0] == 1.
Series series_log(const Series& x, std::size_t order);

} // namespace pararc::fatou::detail
