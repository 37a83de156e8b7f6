#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fmm/tenor.hpp"

namespace fmm {

// Piecewise-constant volatility in time: value(i) applies on (breaks[i-1], breaks[i]],
// with the first segment starting at t = 0 and the last extending to +inf.
// A plain constant is the one-segment special case.
class VolCurve {
public:
    VolCurve() : values_{0.0} {}
    VolCurve(double constant) : values_{constant} {
        if (constant < 0.0) throw std::invalid_argument("vol curve: negative volatility");
    }
    VolCurve(std::vector<double> breaks, std::vector<double> values)
        : breaks_(std::move(breaks)), values_(std::move(values)) {
        if (values_.size() != breaks_.size() + 1)
            throw std::invalid_argument("vol curve: need one more value than break");
        for (std::size_t i = 1; i < breaks_.size(); ++i)
            if (!(breaks_[i] > breaks_[i - 1]))
                throw std::invalid_argument("vol curve: breaks must be strictly increasing");
        for (double v : values_)
            if (v < 0.0) throw std::invalid_argument("vol curve: negative volatility");
    }

    double operator()(double t) const {
        std::size_t i = 0;
        while (i < breaks_.size() && t > breaks_[i]) ++i;
        return values_[i];
    }

    bool constant() const { return breaks_.empty(); }

private:
    std::vector<double> breaks_;
    std::vector<double> values_;
};

// Local-volatility family for nu_k(t) = f(sigma_k(t), R_k(t)). R_min is the lower bound
// of admissible rates implied by the family.
struct VolSpec {
    enum class Kind { normal, lognormal, shifted_lognormal, cev };

    Kind kind = Kind::lognormal;
    double shift = 0.0;  // vartheta, shifted-lognormal only
    double beta = 0.5;   // cev only

    double nu(double sigma, double r) const {
        switch (kind) {
            case Kind::normal: return sigma;
            case Kind::lognormal: return sigma * r;
            case Kind::shifted_lognormal: return sigma * (r + shift);
            case Kind::cev: return sigma * std::pow(r, beta);
        }
        throw std::logic_error("vol spec: bad kind");
    }

    double r_min() const {
        switch (kind) {
            case Kind::normal: return -std::numeric_limits<double>::infinity();
            case Kind::lognormal: return 0.0;
            case Kind::shifted_lognormal: return -shift;
            case Kind::cev: return 0.0;
        }
        throw std::logic_error("vol spec: bad kind");
    }
};

// Rates at a point in time. rates[k-1] holds R_k(min(t, T_k)): the live value while the
// rate accrues, frozen at its fixing once t passes T_k.
struct RateState {
    double t = 0.0;
    std::vector<double> rates;
};

struct MarketData {
    TenorStructure tenor;
    std::vector<double> initial_forwards;  // R_k(0), k = 1..N
    std::vector<VolCurve> vols;            // sigma_k(t), k = 1..N
    std::vector<double> correlation;       // rho, row-major N x N
    VolSpec spec;

    MarketData(TenorStructure tenor_, std::vector<double> forwards, std::vector<VolCurve> vols_,
               std::vector<double> rho, VolSpec spec_ = {})
        : tenor(std::move(tenor_)),
          initial_forwards(std::move(forwards)),
          vols(std::move(vols_)),
          correlation(std::move(rho)),
          spec(spec_) {
        const std::size_t n = tenor.num_rates();
        if (initial_forwards.size() != n) throw std::invalid_argument("market data: forwards size");
        if (vols.size() != n) throw std::invalid_argument("market data: vols size");
        if (correlation.size() != n * n) throw std::invalid_argument("market data: correlation size");
        for (std::size_t k = 0; k < n; ++k) {
            if (correlation[k * n + k] != 1.0)
                throw std::invalid_argument("market data: correlation diagonal must be 1");
            for (std::size_t l = 0; l < k; ++l) {
                const double a = correlation[k * n + l], b = correlation[l * n + k];
                if (a != b) throw std::invalid_argument("market data: correlation not symmetric");
                if (a < -1.0 || a > 1.0) throw std::invalid_argument("market data: correlation out of range");
            }
            if (initial_forwards[k] <= spec.r_min())
                throw std::invalid_argument("market data: initial forward at or below R_min");
        }
    }

    std::size_t num_rates() const { return tenor.num_rates(); }
    double rho(std::size_t k, std::size_t l) const {  // 1-based
        return correlation[(k - 1) * num_rates() + (l - 1)];
    }
    double sigma(std::size_t k, double t) const { return vols[k - 1](t); }
    double forward(std::size_t k) const { return initial_forwards[k - 1]; }

    // Flat correlation constructor helper: off-diagonals rho_const.
    static std::vector<double> flat_correlation(std::size_t n, double rho_const) {
        std::vector<double> rho(n * n, rho_const);
        for (std::size_t k = 0; k < n; ++k) rho[k * n + k] = 1.0;
        return rho;
    }
};

// gamma_k(t): accrual decay of the volatility inside the rate's own period.
// 1 before T_{k-1}, linear decay to 0 across (T_{k-1}, T_k), 0 after T_k.
inline double gamma_decay(const TenorStructure& tenor, std::size_t k, double t) {
    const double t0 = tenor.date(k - 1), t1 = tenor.date(k);
    if (t <= t0) return 1.0;
    if (t >= t1) return 0.0;
    return (t1 - t) / (t1 - t0);
}

// Risk-neutral drift mu_k(t) of dR_k under the bank-account measure, evaluated on a
// state with live rates R_i(t). Terms with i < eta(t) vanish through gamma_i = 0; the
// sum starts at max(eta(t), 1).
inline double drift_mu(const MarketData& md, std::size_t k, double t,
                       const std::vector<double>& rates) {
    const auto& tenor = md.tenor;
    if (k < 1 || k > md.num_rates()) throw std::out_of_range("drift: rate index");
    if (rates.size() < k) throw std::invalid_argument("drift: state missing rates");
    const double nu_k = md.spec.nu(md.sigma(k, t), rates[k - 1]);
    const double g_k = gamma_decay(tenor, k, t);
    if (g_k == 0.0) return 0.0;
    double sum = 0.0;
    std::size_t lo = tenor.eta(t);
    if (lo < 1) lo = 1;
    for (std::size_t i = lo; i <= k; ++i) {
        const double g_i = gamma_decay(tenor, i, t);
        if (g_i == 0.0) continue;
        const double nu_i = md.spec.nu(md.sigma(i, t), rates[i - 1]);
        const double denom = 1.0 + tenor.tau(i) * rates[i - 1];
        if (denom <= 0.0) throw std::domain_error("drift: 1 + tau*R not positive");
        sum += md.rho(i, k) * tenor.tau(i) * nu_i * g_i / denom;
    }
    return nu_k * g_k * sum;
}

// P(T_i, T_j) from a state observed at T_i (state.rates per the RateState convention).
// Extended bonds with i > j compound realized fixings; i < j discounts live rates.
inline double discount_factor(const TenorStructure& tenor, const RateState& state, std::size_t i,
                              std::size_t j) {
    const std::size_t n = tenor.num_rates();
    if (i > n || j > n) throw std::out_of_range("discount: tenor index");
    const double ti = tenor.date(i);
    if (std::abs(state.t - ti) > 1e-12 * (1.0 + std::abs(ti)))
        throw std::invalid_argument("discount: state not observed at T_i");
    if (state.rates.size() < std::max(i, j))
        throw std::invalid_argument("discount: state missing fixings");
    double p = 1.0;
    if (i < j) {
        for (std::size_t k = i + 1; k <= j; ++k) {
            const double denom = 1.0 + tenor.tau(k) * state.rates[k - 1];
            if (denom <= 0.0) throw std::domain_error("discount: 1 + tau*R not positive");
            p /= denom;
        }
    } else if (i > j) {
        for (std::size_t k = j + 1; k <= i; ++k)
            p *= 1.0 + tenor.tau(k) * state.rates[k - 1];
    }
    return p;
}

// Same value through the single product formula P(T_i,T_j) = P(T_i,T_0) * prod_{k<=j} 1/(1+tau_k R_k(T_i)).
inline double discount_factor_abridged(const TenorStructure& tenor, const RateState& state,
                                       std::size_t i, std::size_t j) {
    double p = discount_factor(tenor, state, i, 0);
    for (std::size_t k = 1; k <= j; ++k) {
        const double denom = 1.0 + tenor.tau(k) * state.rates[k - 1];
        if (denom <= 0.0) throw std::domain_error("discount: 1 + tau*R not positive");
        p /= denom;
    }
    return p;
}

// Initial curve state: every rate at its time-0 forward.
inline RateState initial_state(const MarketData& md) {
    return RateState{0.0, md.initial_forwards};
}

// P(0, T_j) from the initial curve.
inline double initial_discount(const MarketData& md, std::size_t j) {
    return discount_factor(md.tenor, initial_state(md), 0, j);
}

// Annuity sum_{i=a+1}^{b} tau_i P(0, T_i).
inline double annuity(const MarketData& md, std::size_t a, std::size_t b) {
    if (!(a < b) || b > md.num_rates()) throw std::invalid_argument("annuity: need 0 <= a < b <= N");
    double s = 0.0;
    for (std::size_t i = a + 1; i <= b; ++i) s += md.tenor.tau(i) * initial_discount(md, i);
    return s;
}

// Par rate of the swap over [T_a, T_b]: the strike that zeroes the time-0 swap value.
inline double atm_strike(const MarketData& md, std::size_t a, std::size_t b) {
    if (!(a < b) || b > md.num_rates()) throw std::invalid_argument("atm: need 0 <= a < b <= N");
    double num = 0.0, den = 0.0;
    for (std::size_t i = a + 1; i <= b; ++i) {
        const double w = md.tenor.tau(i) * initial_discount(md, i);
        num += w * md.forward(i);
        den += w;
    }
    return num / den;
}

}  // namespace fmm
