#pragma once

#include <cstddef>
#include <vector>

#include "fmm/grid.hpp"
#include "fmm/market_data.hpp"

namespace fmm {

// Coefficients of the backward pricing equation in reversed time t (physical time
// terminal - t): lambda_k(t) = sigma_k * gamma_k evaluated at the physical time. The
// derivative is one-sided from inside the step interval (physical (t_phys - dt, t_phys]),
// so breakpoints at tenor dates stay consistent when steps align with them.
struct TimeCoefficients {
    const MarketData* md = nullptr;
    double terminal = 0.0;

    double lambda(std::size_t k, double t) const {
        const double tp = terminal - t;
        return md->sigma(k, tp) * gamma_decay(md->tenor, k, tp);
    }

    double lambda_dt(std::size_t k, double t) const {
        const double tp = terminal - t;
        const double t0 = md->tenor.date(k - 1), t1 = md->tenor.date(k);
        if (tp > t0 && tp <= t1) return md->sigma(k, tp) / (t1 - t0);
        return 0.0;
    }
};

// Constant tridiagonal factors of the directional split. For axis d (rate k = d+1):
//   a1: self advection tau_k x^2/(1+tau_k x) * d1 plus diffusion x^2/2 * d2, to be
//       scaled by lambda_k(t)^2;
//   a2: unit advection x * d1, to be scaled by lambda_k(t) * d_k(t, lower rates)
//       (absent for axis 0: rate 1 has no lower neighbours).
// First rows are null since every coefficient carries a factor x = 0 there.
struct Tridiag {
    std::vector<double> sub, diag, sup;
};

struct SplitOperators {
    std::vector<Tridiag> a1;             // per axis
    std::vector<Tridiag> a2;             // per axis; a2[0] empty
    std::vector<std::vector<double>> c;  // c[d][j] = tau_k x_j / (1 + tau_k x_j)
};

SplitOperators build_split_operators(const Grid& grid, const TenorStructure& tenor);

// Discretized right-hand side F(t, y) = sum_k F_k + F_0 of the reversed-time pricing
// equation, plus directional implicit solves for the splitting integrator. Mixed
// derivative terms are applied matrix-free. A per-step cache holds lambda_k(t) and the
// cross-drift profiles d_k, so repeated evaluations at one time level are cheap.
class PdeOperator {
public:
    PdeOperator(Grid grid, const MarketData& md, double terminal_time);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return grid_.size; }
    std::size_t dim() const { return grid_.dim(); }
    const TimeCoefficients& time_coeffs() const { return tc_; }
    const SplitOperators& split() const { return ops_; }

    // f = F(t, y)
    void apply_rhs(double t, const double* y, double* f) const;

    // f = F(t,y); alpha[d] = dF_{d+1}/dt(t,y); g = dF/dt(t,y) including the mixed part.
    void rhs_and_time_derivatives(double t, const double* y, double* f, double* g,
                                  std::vector<std::vector<double>>& alpha) const;

    // In-place solve of (I - w A_{d+1}(t)) z = y along axis d, every line independently.
    void solve_directional(std::size_t d, double t, double w, double* y) const;

private:
    struct StepCache {
        double t = -1.0;
        bool valid = false;
        std::vector<double> lambda, lambda_dt;       // per axis
        std::vector<std::vector<double>> dk, dkp;    // cross-drift profile per axis, size strides[d]
    };

    void refresh_cache(double t) const;
    void apply_directional(std::size_t d, const double* y, double* f, double* g,
                           double* alpha_d) const;
    void apply_mixed(const double* y, double* f, double* g) const;

    Grid grid_;
    const MarketData* md_;
    TimeCoefficients tc_;
    SplitOperators ops_;
    std::vector<StencilCoeffs> stencils_;
    mutable StepCache cache_;
    mutable std::vector<double> pivinv_;  // solver scratch, size of the largest slab
};

}  // namespace fmm
