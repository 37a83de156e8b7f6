#include "fmm/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fmm {

SplitOperators build_split_operators(const Grid& grid, const TenorStructure& tenor) {
    const std::size_t dim = grid.dim();
    if (dim > tenor.num_rates())
        throw std::invalid_argument("split operators: grid wider than tenor");
    SplitOperators ops;
    ops.a1.resize(dim);
    ops.a2.resize(dim);
    ops.c.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        const Axis& ax = grid.axes[d];
        const StencilCoeffs st = make_stencils(ax);
        const double tau = tenor.tau(d + 1);
        const std::size_t m = ax.m;
        auto& a1 = ops.a1[d];
        a1.sub.assign(m + 1, 0.0);
        a1.diag.assign(m + 1, 0.0);
        a1.sup.assign(m + 1, 0.0);
        ops.c[d].assign(m + 1, 0.0);
        for (std::size_t j = 1; j <= m; ++j) {
            const double x = ax.x[j];
            const double q = tau * x * x / (1.0 + tau * x);  // self advection coefficient
            const double dd = 0.5 * x * x;                   // diffusion coefficient
            a1.sub[j] = q * st.d1_m[j] + dd * st.d2_m[j];
            a1.diag[j] = q * st.d1_0[j] + dd * st.d2_0[j];
            a1.sup[j] = q * st.d1_p[j] + dd * st.d2_p[j];
            ops.c[d][j] = tau * x / (1.0 + tau * x);
        }
        if (d > 0) {
            auto& a2 = ops.a2[d];
            a2.sub.assign(m + 1, 0.0);
            a2.diag.assign(m + 1, 0.0);
            a2.sup.assign(m + 1, 0.0);
            for (std::size_t j = 1; j <= m; ++j) {
                const double x = ax.x[j];
                a2.sub[j] = x * st.d1_m[j];
                a2.diag[j] = x * st.d1_0[j];
                a2.sup[j] = x * st.d1_p[j];
            }
        }
    }
    return ops;
}

PdeOperator::PdeOperator(Grid grid, const MarketData& md, double terminal_time)
    : grid_(std::move(grid)), md_(&md), tc_{&md, terminal_time} {
    if (md.spec.kind != VolSpec::Kind::lognormal)
        throw std::invalid_argument("pde operator: lognormal vol spec required");
    if (terminal_time <= 0.0 || terminal_time > md.tenor.horizon())
        throw std::invalid_argument("pde operator: terminal time outside tenor span");
    ops_ = build_split_operators(grid_, md.tenor);
    stencils_.reserve(grid_.dim());
    for (const Axis& ax : grid_.axes) stencils_.push_back(make_stencils(ax));
    cache_.lambda.assign(grid_.dim(), 0.0);
    cache_.lambda_dt.assign(grid_.dim(), 0.0);
    cache_.dk.resize(grid_.dim());
    cache_.dkp.resize(grid_.dim());
    std::size_t max_slab = 0;
    for (std::size_t d = 0; d < grid_.dim(); ++d)
        max_slab = std::max(max_slab, grid_.strides[d] * (grid_.axes[d].m + 1));
    pivinv_.resize(max_slab);
}

void PdeOperator::refresh_cache(double t) const {
    if (cache_.valid && cache_.t == t) return;
    const std::size_t dim = grid_.dim();
    for (std::size_t d = 0; d < dim; ++d) {
        cache_.lambda[d] = tc_.lambda(d + 1, t);
        cache_.lambda_dt[d] = tc_.lambda_dt(d + 1, t);
    }
    // cross-drift profiles d_k over the lower-rate lanes; lane order matches the memory
    // layout of axes 0..d-1
    for (std::size_t d = 1; d < dim; ++d) {
        const std::size_t lanes = grid_.strides[d];
        cache_.dk[d].assign(lanes, 0.0);
        cache_.dkp[d].assign(lanes, 0.0);
        std::vector<std::size_t> idx(d, 0);
        for (std::size_t lane = 0; lane < lanes; ++lane) {
            double s = 0.0, sp = 0.0;
            for (std::size_t e = 0; e < d; ++e) {
                const double ce = ops_.c[e][idx[e]];
                const double rho = md_->rho(e + 1, d + 1);
                s += cache_.lambda[e] * rho * ce;
                sp += cache_.lambda_dt[e] * rho * ce;
            }
            cache_.dk[d][lane] = s;
            cache_.dkp[d][lane] = sp;
            for (std::size_t e = 0; e < d; ++e) {
                if (++idx[e] <= grid_.axes[e].m) break;
                idx[e] = 0;
            }
        }
    }
    cache_.t = t;
    cache_.valid = true;
}

// Directional contribution F_{d+1}: f += lam^2 (A1 y) + lam d_k (A2 y); when alpha_d is
// given it receives dF_{d+1}/dt and g accumulates it.
void PdeOperator::apply_directional(std::size_t d, const double* y, double* f, double* g,
                                    double* alpha_d) const {
    const double lam = cache_.lambda[d];
    const double lam_dt = cache_.lambda_dt[d];
    const std::size_t m = grid_.axes[d].m;
    const Tridiag& a1 = ops_.a1[d];

    if (alpha_d) std::fill(alpha_d, alpha_d + grid_.size, 0.0);
    if (lam == 0.0 && lam_dt == 0.0) return;  // direction inactive and not activating

    const double c1 = lam * lam;
    const double c1t = 2.0 * lam * lam_dt;

    if (d == 0) {
        if (c1 == 0.0 && c1t == 0.0) return;
        const std::size_t len = m + 1;
        const std::size_t lines = grid_.size / len;
        for (std::size_t line = 0; line < lines; ++line) {
            const std::size_t base = line * len;
            for (std::size_t j = 1; j < m; ++j) {
                const std::size_t p = base + j;
                const double acc =
                    a1.sub[j] * y[p - 1] + a1.diag[j] * y[p] + a1.sup[j] * y[p + 1];
                f[p] += c1 * acc;
                if (alpha_d) {
                    alpha_d[p] = c1t * acc;
                    g[p] += alpha_d[p];
                }
            }
            const std::size_t p = base + m;
            const double acc = a1.sub[m] * y[p - 1] + a1.diag[m] * y[p];
            f[p] += c1 * acc;
            if (alpha_d) {
                alpha_d[p] = c1t * acc;
                g[p] += alpha_d[p];
            }
        }
        return;
    }

    const Tridiag& a2 = ops_.a2[d];
    const std::size_t lanes = grid_.strides[d];
    const std::size_t plane = lanes * (m + 1);
    const std::size_t slabs = grid_.size / plane;
    const double* dk = cache_.dk[d].data();
    const double* dkp = cache_.dkp[d].data();

    for (std::size_t s = 0; s < slabs; ++s) {
        const std::size_t base = s * plane;
        for (std::size_t j = 1; j <= m; ++j) {
            const double s1 = a1.sub[j], d1 = a1.diag[j], p1 = a1.sup[j];
            const double s2 = a2.sub[j], d2 = a2.diag[j], p2 = a2.sup[j];
            const std::size_t row = base + j * lanes;
            if (j < m) {
                for (std::size_t lane = 0; lane < lanes; ++lane) {
                    const std::size_t p = row + lane;
                    const double ym = y[p - lanes], y0 = y[p], yp = y[p + lanes];
                    const double acc1 = s1 * ym + d1 * y0 + p1 * yp;
                    const double acc2 = s2 * ym + d2 * y0 + p2 * yp;
                    f[p] += c1 * acc1 + lam * dk[lane] * acc2;
                    if (alpha_d) {
                        const double a = c1t * acc1 + (lam_dt * dk[lane] + lam * dkp[lane]) * acc2;
                        alpha_d[p] = a;
                        g[p] += a;
                    }
                }
            } else {
                for (std::size_t lane = 0; lane < lanes; ++lane) {
                    const std::size_t p = row + lane;
                    const double ym = y[p - lanes], y0 = y[p];
                    const double acc1 = s1 * ym + d1 * y0;
                    const double acc2 = s2 * ym + d2 * y0;
                    f[p] += c1 * acc1 + lam * dk[lane] * acc2;
                    if (alpha_d) {
                        const double a = c1t * acc1 + (lam_dt * dk[lane] + lam * dkp[lane]) * acc2;
                        alpha_d[p] = a;
                        g[p] += a;
                    }
                }
            }
        }
    }
}

// Mixed-derivative terms, matrix-free: for every pair d1 < d2,
//   f += rho lam_k lam_l x_k x_l * D^{(kl)} y,
// where D^{(kl)} composes the two folded first-derivative stencils. g gets the same with
// the time-differentiated coefficient.
void PdeOperator::apply_mixed(const double* y, double* f, double* g) const {
    const std::size_t dim = grid_.dim();
    for (std::size_t d2 = 1; d2 < dim; ++d2) {
        for (std::size_t d1 = 0; d1 < d2; ++d1) {
            const double rho = md_->rho(d1 + 1, d2 + 1);
            if (rho == 0.0) continue;
            const double l1 = cache_.lambda[d1], l2 = cache_.lambda[d2];
            const double cf = rho * l1 * l2;
            const double cg = g ? rho * (cache_.lambda_dt[d1] * l2 + l1 * cache_.lambda_dt[d2]) : 0.0;
            if (cf == 0.0 && cg == 0.0) continue;

            const Axis& ax1 = grid_.axes[d1];
            const Axis& ax2 = grid_.axes[d2];
            const StencilCoeffs& w1 = stencils_[d1];
            const StencilCoeffs& w2 = stencils_[d2];
            const std::size_t m1 = ax1.m, m2 = ax2.m;
            const std::size_t e1 = grid_.strides[d1], e2 = grid_.strides[d2];
            const std::size_t plane1 = e1 * (m1 + 1), plane2 = e2 * (m2 + 1);
            const std::size_t mids = e2 / plane1;
            const std::size_t slabs = grid_.size / plane2;

            for (std::size_t s = 0; s < slabs; ++s) {
                for (std::size_t j2 = 1; j2 <= m2; ++j2) {
                    const double v2m = w2.d1_m[j2], v20 = w2.d1_0[j2], v2p = w2.d1_p[j2];
                    const bool has_p2 = j2 < m2;
                    const double fx2 = cf * ax2.x[j2];
                    const double gx2 = cg * ax2.x[j2];
                    const std::size_t row2 = s * plane2 + j2 * e2;
                    for (std::size_t mid = 0; mid < mids; ++mid) {
                        const std::size_t base = row2 + mid * plane1;
                        for (std::size_t j1 = 1; j1 <= m1; ++j1) {
                            const double v1m = w1.d1_m[j1], v10 = w1.d1_0[j1], v1p = w1.d1_p[j1];
                            const bool has_p1 = j1 < m1;
                            const double fc = fx2 * ax1.x[j1];
                            const double gc = gx2 * ax1.x[j1];
                            const std::size_t row = base + j1 * e1;
                            for (std::size_t lane = 0; lane < e1; ++lane) {
                                const std::size_t p = row + lane;
                                double acc;
                                {
                                    const std::size_t q = p - e1;
                                    double inner = v2m * y[q - e2] + v20 * y[q];
                                    if (has_p2) inner += v2p * y[q + e2];
                                    acc = v1m * inner;
                                }
                                {
                                    double inner = v2m * y[p - e2] + v20 * y[p];
                                    if (has_p2) inner += v2p * y[p + e2];
                                    acc += v10 * inner;
                                }
                                if (has_p1) {
                                    const std::size_t q = p + e1;
                                    double inner = v2m * y[q - e2] + v20 * y[q];
                                    if (has_p2) inner += v2p * y[q + e2];
                                    acc += v1p * inner;
                                }
                                f[p] += fc * acc;
                                if (g) g[p] += gc * acc;
                            }
                        }
                    }
                }
            }
        }
    }
}

void PdeOperator::apply_rhs(double t, const double* y, double* f) const {
    refresh_cache(t);
    std::fill(f, f + grid_.size, 0.0);
    for (std::size_t d = 0; d < grid_.dim(); ++d) apply_directional(d, y, f, nullptr, nullptr);
    apply_mixed(y, f, nullptr);
}

void PdeOperator::rhs_and_time_derivatives(double t, const double* y, double* f, double* g,
                                           std::vector<std::vector<double>>& alpha) const {
    refresh_cache(t);
    alpha.resize(grid_.dim());
    for (auto& a : alpha) a.resize(grid_.size);
    std::fill(f, f + grid_.size, 0.0);
    std::fill(g, g + grid_.size, 0.0);
    for (std::size_t d = 0; d < grid_.dim(); ++d)
        apply_directional(d, y, f, g, alpha[d].data());
    apply_mixed(y, f, g);
}

void PdeOperator::solve_directional(std::size_t d, double t, double w, double* y) const {
    refresh_cache(t);
    const double lam = cache_.lambda[d];
    if (lam == 0.0) return;  // A_{d+1}(t) = 0: identity system

    const std::size_t m = grid_.axes[d].m;
    const Tridiag& a1 = ops_.a1[d];
    const double c1 = -w * lam * lam;

    if (d == 0) {
        // one factorization shared by every line
        std::vector<double> mfac(m + 1), pinv(m + 1), sup(m + 1);
        double piv = 1.0 + c1 * a1.diag[0];
        pinv[0] = 1.0 / piv;
        sup[0] = c1 * a1.sup[0];
        for (std::size_t j = 1; j <= m; ++j) {
            mfac[j] = c1 * a1.sub[j] * pinv[j - 1];
            piv = 1.0 + c1 * a1.diag[j] - mfac[j] * sup[j - 1];
            if (std::abs(piv) < 1e-300) throw std::domain_error("directional solve: zero pivot");
            pinv[j] = 1.0 / piv;
            sup[j] = c1 * a1.sup[j];
        }
        const std::size_t len = m + 1;
        const std::size_t lines = grid_.size / len;
        for (std::size_t line = 0; line < lines; ++line) {
            double* v = y + line * len;
            for (std::size_t j = 1; j <= m; ++j) v[j] -= mfac[j] * v[j - 1];
            v[m] *= pinv[m];
            for (std::size_t j = m; j-- > 0;) v[j] = (v[j] - sup[j] * v[j + 1]) * pinv[j];
        }
        return;
    }

    const Tridiag& a2 = ops_.a2[d];
    const double c2 = -w * lam;
    const std::size_t lanes = grid_.strides[d];
    const std::size_t plane = lanes * (m + 1);
    const std::size_t slabs = grid_.size / plane;
    const double* dk = cache_.dk[d].data();
    double* pinv = pivinv_.data();

    for (std::size_t s = 0; s < slabs; ++s) {
        double* v = y + s * plane;
        // j = 0: null operator rows leave the identity
        for (std::size_t lane = 0; lane < lanes; ++lane) pinv[lane] = 1.0;
        for (std::size_t j = 1; j <= m; ++j) {
            const double sb = c1 * a1.sub[j], db = c1 * a1.diag[j];
            const double sb2 = c2 * a2.sub[j], db2 = c2 * a2.diag[j];
            const double spm = c1 * a1.sup[j - 1], spm2 = c2 * a2.sup[j - 1];
            double* vj = v + j * lanes;
            double* vm = vj - lanes;
            double* pj = pinv + j * lanes;
            double* pm = pj - lanes;
            for (std::size_t lane = 0; lane < lanes; ++lane) {
                const double dkl = dk[lane];
                const double sub = sb + dkl * sb2;
                const double mfac = sub * pm[lane];
                const double piv = 1.0 + db + dkl * db2 - mfac * (spm + dkl * spm2);
                pj[lane] = 1.0 / piv;
                vj[lane] -= mfac * vm[lane];
            }
        }
        {
            double* vj = v + m * lanes;
            double* pj = pinv + m * lanes;
            for (std::size_t lane = 0; lane < lanes; ++lane) vj[lane] *= pj[lane];
        }
        for (std::size_t j = m; j-- > 0;) {
            const double sp = c1 * a1.sup[j], sp2 = c2 * a2.sup[j];
            double* vj = v + j * lanes;
            double* vp = vj + lanes;
            double* pj = pinv + j * lanes;
            for (std::size_t lane = 0; lane < lanes; ++lane)
                vj[lane] = (vj[lane] - (sp + dk[lane] * sp2) * vp[lane]) * pj[lane];
        }
    }
}

}  // namespace fmm
