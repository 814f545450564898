#pragma once

#include "pararc/polyalg/rational.hpp"

namespace pararc::hausdorff::detail {

Complex ipow(Complex z, int d);
// k-th d-th root of w, k = 0 being the principal one.
Complex root_branch(Complex w, int d, int k);

} // namespace pararc::hausdorff::detail
