#pragma once

#include "series.hpp"

#include "pararc/fatou/fatou.hpp"

namespace pararc::fatou::detail {

struct IterateJet {
    Complex value;
    Complex first;
    Complex second;
};

// P^k and its first two derivatives at z.
IterateJet iterate_jet(const MapParameter& p, int k, Complex z);

// Taylor coefficients of P^k(z0 + w) - z0 in w up to the given order.
Series local_series(const MapParameter& p, int k, Complex z0, std::size_t order);

} // namespace pararc::fatou::detail
