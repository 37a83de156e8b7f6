#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "fmm/market_data.hpp"
#include "fmm/payoffs.hpp"

namespace fmm {

struct MCConfig {
    std::size_t num_paths = 100000;
    std::size_t num_steps = 100;
    std::uint64_t seed = 1;
    bool antithetic = false;
};

struct CIEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    double half_width = 0.0;  // 1.959964 * std_error
    std::size_t num_paths = 0;

    double lower() const { return mean - half_width; }
    double upper() const { return mean + half_width; }
    bool contains(double x) const { return x >= lower() && x <= upper(); }
};

// Lower-triangular factor L with L L^T = rho. Semi-definite matrices are accepted:
// a zero pivot zeroes its column. A pivot below -1e-10 is rejected.
std::vector<double> cholesky_factor(const std::vector<double>& rho, std::size_t n);

// One log-Euler step of all rates: exact in the Milstein sense in log coordinates.
//   R_k <- R_k * exp( (mu_k/R_k) dt - 0.5 gamma_k^2 sigma_k^2 dt + sigma_k gamma_k dW_k ),
// with dW = sqrt(dt) * chol * z and all coefficients frozen at the step start. The drift
// ratio mu_k/R_k is evaluated in cancelled form, so R_k = 0 is admissible. Rates whose
// accrual ended (gamma_k = 0) stay frozen. Lognormal vol spec only.
void log_euler_step(const MarketData& md, double t, double dt, const std::vector<double>& chol,
                    const double* z, std::vector<double>& rates);

// Expectation of payoff(terminal state) / P(T_a, T_0) under the bank-account measure,
// estimated from num_paths independent paths on a time grid of num_steps uniform steps
// over [0, T_a] merged with all tenor dates <= T_a. The estimate is bit-identical for a
// given config regardless of num_threads.
CIEstimate mc_deflated_expectation(const MarketData& md, std::size_t a,
                                   const std::function<double(const RateState&)>& payoff,
                                   const MCConfig& cfg, unsigned num_threads = 0);

struct MCPriceResult {
    CIEstimate ci;
    double runtime_sec = 0.0;
};

// European swaption price by Monte Carlo: E[ max(IRS(T_a),0) / P(T_a,T_0) ].
MCPriceResult price_swaption_mc(const MarketData& md, const SwaptionSpec& spec, const MCConfig& cfg,
                                unsigned num_threads = 0);

}  // namespace fmm
