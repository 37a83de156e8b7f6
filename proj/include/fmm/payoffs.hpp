#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fmm/market_data.hpp"
#include "fmm/tenor.hpp"

namespace fmm {

// Swaption on the swap over [T_a, T_b] with fixed rate strike. exercise_dates lists the
// tenor indices e at which the holder may enter the swap [T_e, T_b]; a European swaption
// has exercise_dates = {a}. The largest exercise index must equal a.
struct SwaptionSpec {
    std::size_t a = 1;
    std::size_t b = 2;
    double strike = 0.0;
    std::vector<std::size_t> exercise_dates;  // empty means {a}

    void validate(std::size_t n) const {
        if (!(a >= 1 && a < b && b <= n))
            throw std::invalid_argument("swaption: need 1 <= a < b <= N");
        if (!(strike > 0.0)) throw std::invalid_argument("swaption: strike must be positive");
        std::size_t prev = 0;
        for (std::size_t e : exercise_dates) {
            if (e <= prev || e > a)
                throw std::invalid_argument("swaption: exercise dates must be increasing and end at a");
            prev = e;
        }
        if (!exercise_dates.empty() && exercise_dates.back() != a)
            throw std::invalid_argument("swaption: last exercise date must equal a");
    }

    bool european() const {
        return exercise_dates.empty() || (exercise_dates.size() == 1 && exercise_dates[0] == a);
    }
};

// Value at T_a of the swap exchanging R_i against strike over [T_a, T_b]:
//   sum_{i=a+1}^{b} P(T_a, T_i) tau_i (R_i(T_a) - K).
inline double irs_value(const TenorStructure& tenor, const RateState& state, std::size_t a,
                        std::size_t b, double strike) {
    if (!(a < b) || b > tenor.num_rates()) throw std::invalid_argument("irs: need a < b <= N");
    double value = 0.0;
    for (std::size_t i = a + 1; i <= b; ++i)
        value += discount_factor(tenor, state, a, i) * tenor.tau(i) * (state.rates[i - 1] - strike);
    return value;
}

inline double swaption_payoff(const TenorStructure& tenor, const RateState& state, std::size_t a,
                              std::size_t b, double strike) {
    return std::max(irs_value(tenor, state, a, b, strike), 0.0);
}

// Swap value at T_e divided by the bank account P(T_e, T_0), written directly on the
// rate vector x (x_l = R_l at or before its fixing):
//   g_e(x) = sum_{k=e+1}^{b} ( prod_{l=1}^{k} 1/(1+tau_l x_l) ) tau_k (x_k - K).
// This is what a backward solver in deflated units compares against at exercise.
inline double deflated_swap_value(const TenorStructure& tenor, const std::vector<double>& x,
                                  std::size_t e, std::size_t b, double strike) {
    if (!(e < b) || b > tenor.num_rates()) throw std::invalid_argument("deflated swap: need e < b <= N");
    if (x.size() < b) throw std::invalid_argument("deflated swap: state missing rates");
    double disc = 1.0;
    for (std::size_t l = 1; l <= e; ++l) {
        const double denom = 1.0 + tenor.tau(l) * x[l - 1];
        if (denom <= 0.0) throw std::domain_error("deflated swap: 1 + tau*R not positive");
        disc /= denom;
    }
    double value = 0.0;
    for (std::size_t k = e + 1; k <= b; ++k) {
        const double denom = 1.0 + tenor.tau(k) * x[k - 1];
        if (denom <= 0.0) throw std::domain_error("deflated swap: 1 + tau*R not positive");
        disc /= denom;
        value += disc * tenor.tau(k) * (x[k - 1] - strike);
    }
    return value;
}

// Deflated exercise payoff max(g_e, 0); with e = a this is the terminal condition of the
// backward pricing problem.
inline double relative_payoff(const TenorStructure& tenor, const std::vector<double>& x,
                              std::size_t e, std::size_t b, double strike) {
    return std::max(deflated_swap_value(tenor, x, e, b, strike), 0.0);
}

}  // namespace fmm
