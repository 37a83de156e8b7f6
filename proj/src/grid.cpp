#include "fmm/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace fmm {

Axis Axis::make_uniform(std::size_t m, double r_max) {
    if (m < 2) throw std::invalid_argument("axis: need at least 2 cells");
    if (!(r_max > 0.0)) throw std::invalid_argument("axis: r_max must be positive");
    Axis a;
    a.kind = AxisKind::uniform;
    a.m = m;
    a.r_max = r_max;
    a.x.resize(m + 1);
    a.h.assign(m + 1, 0.0);
    const double h = r_max / static_cast<double>(m);
    for (std::size_t j = 0; j <= m; ++j) a.x[j] = h * static_cast<double>(j);
    a.x[m] = r_max;
    for (std::size_t j = 1; j <= m; ++j) a.h[j] = a.x[j] - a.x[j - 1];
    return a;
}

Axis Axis::make_sinh(std::size_t m, double r_max, double center, double stretch) {
    if (m < 2) throw std::invalid_argument("axis: need at least 2 cells");
    if (!(r_max > 0.0)) throw std::invalid_argument("axis: r_max must be positive");
    if (!(center > 0.0 && center < r_max))
        throw std::invalid_argument("axis: center must lie inside (0, r_max)");
    if (!(stretch > 0.0)) throw std::invalid_argument("axis: stretch must be positive");
    Axis a;
    a.kind = AxisKind::sinh_stretched;
    a.m = m;
    a.r_max = r_max;
    a.center = center;
    a.stretch = stretch;
    const double xi_min = std::asinh(-center / stretch);
    const double xi_max = std::asinh((r_max - center) / stretch);
    a.x.resize(m + 1);
    a.h.assign(m + 1, 0.0);
    for (std::size_t j = 0; j <= m; ++j) {
        const double w = static_cast<double>(j) / static_cast<double>(m);
        const double xi = xi_min + w * (xi_max - xi_min);
        a.x[j] = center + stretch * std::sinh(xi);
    }
    a.x[0] = 0.0;      // endpoints exact, independent of asinh/sinh rounding
    a.x[m] = r_max;
    for (std::size_t j = 1; j <= m; ++j) {
        a.h[j] = a.x[j] - a.x[j - 1];
        if (!(a.h[j] > 0.0)) throw std::runtime_error("axis: nodes not strictly increasing");
    }
    return a;
}

std::array<double, 3> stencil_beta(const Axis& axis, std::size_t j) {
    if (j < 1 || j >= axis.m) throw std::out_of_range("stencil: interior node required");
    const double hm = axis.h[j], hp = axis.h[j + 1];
    return {-hp / (hm * (hm + hp)), (hp - hm) / (hm * hp), hm / (hp * (hm + hp))};
}

std::array<double, 3> stencil_eta(const Axis& axis, std::size_t j) {
    if (j < 1 || j >= axis.m) throw std::out_of_range("stencil: interior node required");
    const double hm = axis.h[j], hp = axis.h[j + 1];
    return {2.0 / (hm * (hm + hp)), -2.0 / (hm * hp), 2.0 / (hp * (hm + hp))};
}

StencilCoeffs make_stencils(const Axis& axis) {
    const std::size_t m = axis.m;
    StencilCoeffs s;
    s.d1_m.assign(m + 1, 0.0);
    s.d1_0.assign(m + 1, 0.0);
    s.d1_p.assign(m + 1, 0.0);
    s.d2_m.assign(m + 1, 0.0);
    s.d2_0.assign(m + 1, 0.0);
    s.d2_p.assign(m + 1, 0.0);
    for (std::size_t j = 1; j < m; ++j) {
        const auto b = stencil_beta(axis, j);
        const auto e = stencil_eta(axis, j);
        s.d1_m[j] = b[0];
        s.d1_0[j] = b[1];
        s.d1_p[j] = b[2];
        s.d2_m[j] = e[0];
        s.d2_0[j] = e[1];
        s.d2_p[j] = e[2];
    }
    // border row m: elimination of the virtual node under d2 = 0 leaves the one-sided
    // difference for d1 and annihilates d2, for any extrapolated spacing
    s.d1_m[m] = -1.0 / axis.h[m];
    s.d1_0[m] = 1.0 / axis.h[m];
    return s;
}

Grid::Grid(std::vector<Axis> axes_) : axes(std::move(axes_)) {
    if (axes.empty()) throw std::invalid_argument("grid: need at least one axis");
    strides.resize(axes.size());
    size = 1;
    for (std::size_t d = 0; d < axes.size(); ++d) {
        strides[d] = size;
        size *= axes[d].m + 1;
    }
}

std::vector<double> exercise_floor(const Grid& grid, const TenorStructure& tenor, std::size_t e,
                                   std::size_t b, double strike) {
    if (grid.dim() != b) throw std::invalid_argument("exercise floor: grid dimension must equal b");
    std::vector<double> values(grid.size);
    std::vector<double> x(b);
    std::vector<std::size_t> idx(b, 0);
    for (std::size_t d = 0; d < b; ++d) x[d] = grid.axes[d].x[0];
    for (std::size_t p = 0; p < grid.size; ++p) {
        values[p] = deflated_swap_value(tenor, x, e, b, strike);
        for (std::size_t d = 0; d < b; ++d) {
            if (++idx[d] <= grid.axes[d].m) {
                x[d] = grid.axes[d].x[idx[d]];
                break;
            }
            idx[d] = 0;
            x[d] = grid.axes[d].x[0];
        }
    }
    return values;
}

std::vector<double> smoothed_initial_condition(const Grid& grid, const TenorStructure& tenor,
                                               std::size_t a, std::size_t b, double strike) {
    if (grid.dim() != b) throw std::invalid_argument("initial condition: grid dimension must equal b");
    if (!(a >= 1 && a < b)) throw std::invalid_argument("initial condition: need 1 <= a < b");

    std::vector<double> u0 = exercise_floor(grid, tenor, a, b, strike);
    for (double& v : u0) v = std::max(v, 0.0);

    const std::size_t sa = a;  // smoothing axis (0-based) = rate a+1
    const Axis& axis = grid.axes[sa];
    const double tau_s = tenor.tau(a + 1);

    // iterate over slices of the trailing rates a+2..b
    std::vector<std::size_t> tail_dims;
    for (std::size_t d = sa + 1; d < b; ++d) tail_dims.push_back(d);
    std::vector<std::size_t> tail_idx(tail_dims.size(), 0);

    // iterate over the leading rates 1..a
    std::size_t lead_count = 1;
    for (std::size_t d = 0; d < sa; ++d) lead_count *= grid.axes[d].m + 1;

    bool tail_done = false;
    while (!tail_done) {
        // H = sum_{k=a+2}^{b} ( prod_{l=a+2}^{k} 1/(1+tau_l x_l) ) tau_k (x_k - K)
        double h_tail = 0.0, disc = 1.0;
        std::size_t tail_offset = 0;
        for (std::size_t q = 0; q < tail_dims.size(); ++q) {
            const std::size_t d = tail_dims[q];
            const double xl = grid.axes[d].x[tail_idx[q]];
            const std::size_t k = d + 1;  // rate index
            disc /= 1.0 + tenor.tau(k) * xl;
            h_tail += disc * tenor.tau(k) * (xl - strike);
            tail_offset += tail_idx[q] * grid.strides[d];
        }
        const double x_tilde = strike - h_tail / tau_s;

        if (x_tilde >= 0.0 && x_tilde <= axis.r_max) {
            std::size_t j_ind = 0;
            double best = std::abs(axis.x[0] - x_tilde);
            for (std::size_t j = 1; j <= axis.m; ++j) {
                const double dist = std::abs(axis.x[j] - x_tilde);
                if (dist < best) {
                    best = dist;
                    j_ind = j;
                }
            }
            const double x_lo = j_ind > 0 ? 0.5 * (axis.x[j_ind - 1] + axis.x[j_ind]) : axis.x[0];
            const double x_hi =
                j_ind < axis.m ? 0.5 * (axis.x[j_ind] + axis.x[j_ind + 1]) : axis.x[axis.m];
            const double cell = x_hi - x_lo;
            // exact average of max(g_a, 0) over the cell, x~ being the only kink:
            // (x_hi - x~ - (K + (1-H)/tau)*log((1+tau x_hi)/(1+tau x~))) / cell, times the
            // discounting of the leading rates
            const double core =
                (x_hi - x_tilde -
                 (strike + (1.0 - h_tail) / tau_s) *
                     std::log((1.0 + tau_s * x_hi) / (1.0 + tau_s * x_tilde))) /
                cell;

            // assign for every combination of the leading rates
            std::vector<std::size_t> lead_idx(sa, 0);
            for (std::size_t lp = 0; lp < lead_count; ++lp) {
                double lead_disc = 1.0;
                std::size_t lead_offset = 0;
                for (std::size_t d = 0; d < sa; ++d) {
                    lead_disc /= 1.0 + tenor.tau(d + 1) * grid.axes[d].x[lead_idx[d]];
                    lead_offset += lead_idx[d] * grid.strides[d];
                }
                u0[lead_offset + j_ind * grid.strides[sa] + tail_offset] = core * lead_disc;
                for (std::size_t d = 0; d < sa; ++d) {
                    if (++lead_idx[d] <= grid.axes[d].m) break;
                    lead_idx[d] = 0;
                }
            }
        }

        tail_done = true;
        for (std::size_t q = 0; q < tail_dims.size(); ++q) {
            if (++tail_idx[q] <= grid.axes[tail_dims[q]].m) {
                tail_done = false;
                break;
            }
            tail_idx[q] = 0;
        }
        if (tail_dims.empty()) break;
    }
    return u0;
}

double multilinear_interp(const Grid& grid, const std::vector<double>& values,
                          const std::vector<double>& point) {
    if (values.size() != grid.size) throw std::invalid_argument("interp: values size mismatch");
    if (point.size() != grid.dim()) throw std::invalid_argument("interp: point dimension mismatch");
    const std::size_t n = grid.dim();
    std::vector<std::size_t> base(n);
    std::vector<double> w(n);
    for (std::size_t d = 0; d < n; ++d) {
        const Axis& ax = grid.axes[d];
        const double q = point[d];
        if (q < ax.x.front() || q > ax.x.back())
            throw std::domain_error("interp: point outside grid");
        std::size_t j = 0;
        while (j + 1 < ax.m && ax.x[j + 1] < q) ++j;
        base[d] = j;
        w[d] = (q - ax.x[j]) / (ax.x[j + 1] - ax.x[j]);
    }
    double acc = 0.0;
    for (std::size_t corner = 0; corner < (1ULL << n); ++corner) {
        double weight = 1.0;
        std::size_t p = 0;
        for (std::size_t d = 0; d < n; ++d) {
            const bool hi = (corner >> d) & 1U;
            weight *= hi ? w[d] : 1.0 - w[d];
            p += (base[d] + (hi ? 1 : 0)) * grid.strides[d];
        }
        acc += weight * values[p];
    }
    return acc;
}

}  // namespace fmm
