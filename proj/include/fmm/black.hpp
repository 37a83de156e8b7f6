#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fmm {

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Black payer-swaption price on forward par rate s0, strike k, expiry t, annuity a:
//   a * ( s0 Phi(d1) - k Phi(d2) ).
inline double black_price(double s0, double k, double vol, double t, double a) {
    if (s0 <= 0.0 || k <= 0.0) throw std::domain_error("black: forward and strike must be positive");
    if (t < 0.0 || vol < 0.0 || a <= 0.0) throw std::domain_error("black: bad inputs");
    const double stdev = vol * std::sqrt(t);
    if (stdev == 0.0) return a * std::max(s0 - k, 0.0);
    const double d1 = (std::log(s0 / k) + 0.5 * stdev * stdev) / stdev;
    const double d2 = d1 - stdev;
    return a * (s0 * norm_cdf(d1) - k * norm_cdf(d2));
}

// Implied Black volatility by bracketing bisection to 1e-10 in vol. A price at or below
// intrinsic maps to 0; a price at or above the forward bound a*s0 has no solution.
inline double black_implied_vol(double price, double s0, double k, double t, double a) {
    if (t <= 0.0) throw std::domain_error("implied vol: expiry must be positive");
    const double intrinsic = a * std::max(s0 - k, 0.0);
    const double upper_bound = a * s0;
    if (price < intrinsic - 1e-16 * upper_bound)
        throw std::domain_error("implied vol: price below intrinsic value");
    if (price <= intrinsic) return 0.0;
    if (price >= upper_bound) throw std::domain_error("implied vol: price at or above forward bound");

    double lo = 0.0, hi = 1.0;
    while (black_price(s0, k, hi, t, a) < price) {
        hi *= 2.0;
        if (hi > 1e4) throw std::runtime_error("implied vol: bracket expansion failed");
    }
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (black_price(s0, k, mid, t, a) < price ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace fmm
