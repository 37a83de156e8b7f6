#include "fmm/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fmm {

void amfr_w1_step(const PdeOperator& op, double t, double dt, double theta, double nu,
                  std::vector<double>& y, StageBuffers& buf) {
    const std::size_t n = op.size();
    const std::size_t dim = op.dim();
    buf.resize(n);

    op.rhs_and_time_derivatives(t, y.data(), buf.tmp.data(), buf.g.data(), buf.alpha);

    double* k0 = buf.k0.data();
    double* kc = buf.kc.data();
    double* g = buf.g.data();
    double* tmp = buf.tmp.data();
    const double ndt2 = nu * dt * dt;

    for (std::size_t i = 0; i < n; ++i) k0[i] = dt * tmp[i];
    for (std::size_t i = 0; i < n; ++i) kc[i] = k0[i];
    for (std::size_t d = 0; d < dim; ++d) {
        const double* a = buf.alpha[d].data();
        for (std::size_t i = 0; i < n; ++i) kc[i] += ndt2 * a[i];
        op.solve_directional(d, t, nu * dt, kc);
    }

    op.apply_rhs(t, kc, tmp);  // tmp = A(t) K^N
    const double tdt2 = theta * dt * dt;
    for (std::size_t i = 0; i < n; ++i)
        k0[i] = 2.0 * k0[i] + tdt2 * g[i] - kc[i] + theta * dt * tmp[i];
    for (std::size_t d = 0; d < dim; ++d) {
        const double* a = buf.alpha[d].data();
        for (std::size_t i = 0; i < n; ++i) k0[i] += ndt2 * a[i];
        op.solve_directional(d, t, nu * dt, k0);
    }

    for (std::size_t i = 0; i < n; ++i) y[i] += k0[i];
}

void integrate(const PdeOperator& op, const IntegratorConfig& cfg, std::vector<double>& y) {
    if (y.size() != op.size()) throw std::invalid_argument("integrate: state size mismatch");
    if (!(cfg.dt > 0.0) || !(cfg.horizon > 0.0))
        throw std::invalid_argument("integrate: dt and horizon must be positive");
    const double steps_real = cfg.horizon / cfg.dt;
    const std::size_t steps = static_cast<std::size_t>(std::llround(steps_real));
    if (steps == 0 || std::abs(steps_real - static_cast<double>(steps)) > 1e-9)
        throw std::invalid_argument("integrate: dt must divide the horizon");
    const double nu = cfg.nu > 0.0 ? cfg.nu : default_nu(op.dim(), cfg.theta, cfg.kappa);

    const double jump_tol = 1e-9 * cfg.horizon;
    for (std::size_t q = 0; q < cfg.jumps.size(); ++q) {
        const double tj = cfg.jumps[q].t;
        if (q > 0 && !(tj > cfg.jumps[q - 1].t))
            throw std::invalid_argument("integrate: jump times must be increasing");
        if (tj <= 0.0 || tj > cfg.horizon + jump_tol)
            throw std::invalid_argument("integrate: jump time outside (0, horizon]");
        const double steps_to_jump = tj / cfg.dt;
        if (std::abs(steps_to_jump - std::llround(steps_to_jump)) > 1e-9)
            throw std::invalid_argument("integrate: jump time not on the step grid");
        if (cfg.jumps[q].floor.size() != op.size())
            throw std::invalid_argument("integrate: jump floor size mismatch");
    }

    StageBuffers buf;
    std::size_t next_jump = 0;
    for (std::size_t nstep = 0; nstep < steps; ++nstep) {
        const double t = cfg.dt * static_cast<double>(nstep);
        amfr_w1_step(op, t, cfg.dt, cfg.theta, nu, y, buf);
        const double t_next = cfg.dt * static_cast<double>(nstep + 1);
        while (next_jump < cfg.jumps.size() &&
               cfg.jumps[next_jump].t <= t_next + jump_tol) {
            const auto& floor = cfg.jumps[next_jump].floor;
            for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::max(y[i], floor[i]);
            ++next_jump;
        }
    }
}

}  // namespace fmm
