#pragma once

// Independent reference computations used to check the library numerics.
// Deliberately coded differently: full sorts instead of selection, raw
// (uncentered) normal equations solved by Cramer's rule.

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

namespace testing {

/// Locally weighted linear fit at every x, by direct weighted least squares.
inline std::vector<double> wls_loess_oracle(const std::vector<double>& x, const std::vector<double>& y, double span) {
    const std::size_t n = x.size();
    std::size_t q = static_cast<std::size_t>(std::ceil(span * static_cast<double>(n)));
    q = std::max<std::size_t>(q, 3);
    q = std::min(q, n);
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> d;
        for (double xj : x) d.push_back(std::fabs(xj - x[i]));
        std::vector<double> sorted = d;
        std::sort(sorted.begin(), sorted.end());
        const double h = sorted[q - 1];
        long double s0 = 0, s1 = 0, s2 = 0, t0 = 0, t1 = 0;
        for (std::size_t j = 0; j < n; ++j) {
            double w = 0;
            if (h == 0) w = d[j] == 0 ? 1 : 0;
            else if (d[j] < h) w = std::pow(1 - std::pow(d[j] / h, 3), 3);
            // shift x to the evaluation point so the intercept is the fit
            const long double u = x[j] - x[i];
            s0 += w, s1 += w * u, s2 += w * u * u;
            t0 += w * y[j], t1 += w * u * y[j];
        }
        const long double det = s0 * s2 - s1 * s1;
        if (std::fabs(static_cast<double>(det)) <= 1e-12 * static_cast<double>(s0 * s2 + 1))
            out.push_back(static_cast<double>(t0 / s0));
        else
            out.push_back(static_cast<double>((t0 * s2 - t1 * s1) / det));
    }
    return out;
}

struct LogFit {
    double a, b;
};

/// ln(count) = ln a + b (year - 1970) by uncentered normal equations.
inline LogFit log_linear_oracle(const std::map<int, double>& totals, int first, int last) {
    long double n = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
    for (int y = first; y <= last; ++y) {
        const long double x = y - 1970, v = std::log(static_cast<long double>(totals.at(y)));
        n += 1, sx += x, sxx += x * x, sy += v, sxy += x * v;
    }
    const long double det = n * sxx - sx * sx;
    const long double b = (n * sxy - sx * sy) / det;
    const long double c = (sy * sxx - sx * sxy) / det;
    return {static_cast<double>(std::exp(c)), static_cast<double>(b)};
}

}  // namespace testing
