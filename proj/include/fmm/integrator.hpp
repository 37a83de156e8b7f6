#pragma once

#include <cstddef>
#include <vector>

#include "fmm/operators.hpp"

namespace fmm {

// One exercise opportunity seen from the backward solver: at reversed time t the state
// is floored by the deflated exercise value.
struct JumpCondition {
    double t = 0.0;
    std::vector<double> floor;
};

struct IntegratorConfig {
    double dt = 0.0;
    double horizon = 0.0;
    double theta = 0.5;
    double kappa = 1.0;   // nu = kappa * N * theta for N >= 4
    double nu = 0.0;      // <= 0: derived from theta/kappa and the dimension
    std::vector<JumpCondition> jumps;  // strictly increasing reversed times in (0, horizon]
};

// Damping parameter of the stabilizing sweeps: theta for up to three dimensions,
// kappa * N * theta beyond.
inline double default_nu(std::size_t dim, double theta, double kappa) {
    return dim <= 3 ? theta : kappa * static_cast<double>(dim) * theta;
}

struct StageBuffers {
    std::vector<double> k0, kc, g, tmp;
    std::vector<std::vector<double>> alpha;

    void resize(std::size_t n) {
        k0.resize(n);
        kc.resize(n);
        g.resize(n);
        tmp.resize(n);
    }
};

// One step of the two-sweep approximate-matrix-factorization W-method:
//   K0 = dt F(t, Y)
//   (I - nu dt A_k) K^k = K^{k-1} + nu dt^2 alpha_k,           k = 1..N
//   Kt^0 = 2 K0 + theta dt^2 G - K^N + theta dt F(t, K^N)
//   (I - nu dt A_k) Kt^k = Kt^{k-1} + nu dt^2 alpha_k,         k = 1..N
//   Y <- Y + Kt^N
// with alpha_k = dF_k/dt and G = dF/dt, all evaluated at (t, Y). The A K^N product is
// realized as one extra right-hand-side evaluation; no full matrix is ever formed.
void amfr_w1_step(const PdeOperator& op, double t, double dt, double theta, double nu,
                  std::vector<double>& y, StageBuffers& buf);

// March y from reversed time 0 to horizon, applying exercise floors at their jump times.
// dt must divide the horizon and hit every jump time exactly.
void integrate(const PdeOperator& op, const IntegratorConfig& cfg, std::vector<double>& y);

}  // namespace fmm
