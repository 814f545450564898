#include "series.hpp"

#include "pararc/errors.hpp"

namespace pararc::fatou::detail {

Series series_mul(const Series& x, const Series& y, std::size_t order) {
    Series out(order + 1, 0.0);
    for (std::size_t i = 0; i < x.size() && i <= order; ++i) {
        if (x[i] == 0.0) {
            continue;
        }
        for (std::size_t j = 0; j < y.size() && i + j <= order; ++j) {
            out[i + j] += x[i] * y[j];
        }
    }
    return out;
}

Series series_pow(const Series& x, int n, std::size_t order) {
    Series out(order + 1, 0.0);
    out[0] = 1.0;
    for (int i = 0; i < n; ++i) {
        out = series_mul(out, x, order);
    }
    return out;
}

Series series_inverse(const Series& x, std::size_t order) {
    if (x.empty() || x[0] == 0.0) {
        throw DomainError("series inverse needs a nonzero constant term");
    }
    Series out(order + 1, 0.0);
    out[0] = 1.0 / x[0];
    for (std::size_t n = 1; n <= order; ++n) {
        Complex s = 0.0;
        for (std::size_t i = 1; i <= n && i < x.size(); ++i) {
            s += x[i] * out[n - i];
        }
        out[n] = -s / x[0];
    }
    return out;
}

Series series_log(const Series& x, std::size_t order) {
    // (log x)' = x' / x with x[0] = 1.
    Series dx(order + 1, 0.0);
    for (std::size_t i = 1; i < x.size() && i <= order + 1; ++i) {
        dx[i - 1] = double(i) * x[i];
    }
    Series q = series_mul(dx, series_inverse(x, order), order);
    Series out(order + 1, 0.0);
    for (std::size_t i = 1; i <= order; ++i) {
        out[i] = q[i - 1] / double(i);
    }
    return out;
}

} // namespace pararc::fatou::detail
