#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace fmm {

// splitmix64 mixing step; used to decorrelate per-path seeds derived from (seed, path index).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Inverse standard normal CDF: Acklam's rational approximation polished with one Halley
// step through erfc, giving close to full double precision. Fully deterministic, unlike
// std::normal_distribution whose algorithm is implementation-defined.
inline double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("inverse normal cdf: p must be in (0,1)");

    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // One Halley refinement: e = Phi(x) - p, u = e / phi(x).
    static const double sqrt2pi = std::sqrt(2.0 * std::acos(-1.0));
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * sqrt2pi * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

// Deterministic per-path normal stream. The engine (mt19937_64) and the uniform mapping
// (top 53 bits) are pinned by the C++ standard, so sequences are reproducible across
// platforms for a given (seed, path index).
class PathRng {
public:
    PathRng(std::uint64_t seed, std::uint64_t path_index)
        : engine_(splitmix64(splitmix64(seed) ^ (0x9e3779b97f4a7c15ULL * (path_index + 1)))) {}

    double uniform() {
        // in (0,1): offset by half an ulp of the 2^-53 lattice to exclude 0
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() { return inverse_normal_cdf(uniform()); }

private:
    std::mt19937_64 engine_;
};

}  // namespace fmm
