#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "agora/errors.hpp"

namespace agora {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
};

// Ordinary least squares y = a + b x. Throws ValidationError when x has no
// variance or fewer than two points are given.
inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw ValidationError("linear_fit: need >= 2 points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw ValidationError("linear_fit: x has zero variance (undefined slope)");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (n > 2) {
        double ss_res = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] - (fit.intercept + fit.slope * x[i]);
            ss_res += r * r;
        }
        fit.slope_stderr = std::sqrt(ss_res / (static_cast<double>(n - 2) * sxx));
    }
    return fit;
}

struct MeanStats {
    double mean = 0.0;
    double std_error = 0.0;  // sample sd / sqrt(n)
    std::size_t n = 0;
};

inline MeanStats mean_and_se(const std::vector<double>& xs) {
    MeanStats s;
    s.n = xs.size();
    if (s.n == 0) return s;
    double acc = 0.0;
    for (double v : xs) acc += v;
    s.mean = acc / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double v : xs) ss += (v - s.mean) * (v - s.mean);
        s.std_error = std::sqrt(ss / (static_cast<double>(s.n - 1) * static_cast<double>(s.n)));
    }
    return s;
}

}  // namespace agora
