#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "fmm/payoffs.hpp"
#include "fmm/tenor.hpp"

namespace fmm {

enum class AxisKind { uniform, sinh_stretched };

// One spatial axis 0 = x_0 < x_1 < ... < x_M = r_max. Sinh axes cluster nodes around
// `center` with scale `stretch`: x_j = center + stretch * sinh(xi_j), xi uniform.
struct Axis {
    AxisKind kind = AxisKind::uniform;
    std::size_t m = 0;       // highest node index; m+1 nodes
    double r_max = 0.0;
    double center = 0.0;     // sinh axes only
    double stretch = 0.0;    // sinh axes only
    std::vector<double> x;   // nodes, size m+1
    std::vector<double> h;   // spacings h[j] = x[j] - x[j-1] for j >= 1; h[0] = 0

    static Axis make_uniform(std::size_t m, double r_max);
    static Axis make_sinh(std::size_t m, double r_max, double center, double stretch);
};

// Non-uniform central difference weights at interior node j (spacings h_j, h_{j+1}):
// beta (first derivative) and eta (second derivative) triples on (j-1, j, j+1). Exact on
// quadratics. On a uniform axis beta reduces to (-1,0,1)/(2h) and eta to (1,-2,1)/h^2.
std::array<double, 3> stencil_beta(const Axis& axis, std::size_t j);
std::array<double, 3> stencil_eta(const Axis& axis, std::size_t j);

// Per-axis operational derivative rows. Boundary handling is folded in:
//  - row 0 is null: every use is multiplied by a coefficient vanishing at x = 0;
//  - row m encodes the zero-second-derivative border condition, which eliminates the
//    virtual node and turns the first derivative into the one-sided difference
//    (y_m - y_{m-1}) / h_m while the second derivative row vanishes.
struct StencilCoeffs {
    std::vector<double> d1_m, d1_0, d1_p;  // first derivative rows, size m+1
    std::vector<double> d2_m, d2_0, d2_p;  // second derivative rows, size m+1
};

StencilCoeffs make_stencils(const Axis& axis);

// Tensor-product grid over rates 1..N (axis index k-1 holds rate k).
struct Grid {
    std::vector<Axis> axes;
    std::vector<std::size_t> strides;  // strides[d] = prod_{e<d} (m_e + 1)
    std::size_t size = 0;

    explicit Grid(std::vector<Axis> axes_);

    std::size_t dim() const { return axes.size(); }

    std::size_t flatten(const std::vector<std::size_t>& idx) const {
        std::size_t p = 0;
        for (std::size_t d = 0; d < axes.size(); ++d) p += idx[d] * strides[d];
        return p;
    }

    std::vector<std::size_t> unflatten(std::size_t p) const {
        std::vector<std::size_t> idx(axes.size());
        for (std::size_t d = 0; d < axes.size(); ++d) {
            idx[d] = p % (axes[d].m + 1);
            p /= axes[d].m + 1;
        }
        return idx;
    }

    // node coordinates of flattened index p
    std::vector<double> node(std::size_t p) const {
        std::vector<double> xs(axes.size());
        for (std::size_t d = 0; d < axes.size(); ++d) {
            xs[d] = axes[d].x[p % (axes[d].m + 1)];
            p /= axes[d].m + 1;
        }
        return xs;
    }
};

// Terminal condition max(g_a, 0) sampled on the grid, then cell-averaged along axis a
// (rate a+1): in each slice of the remaining swap rates the kink location
//   x~ = K - H/tau_{a+1}
// is replaced, at its nearest node, by the exact cell average of the payoff, which keeps
// second-order convergence despite the initial non-smoothness. Slices whose kink falls
// outside the axis are left unsmoothed.
std::vector<double> smoothed_initial_condition(const Grid& grid, const TenorStructure& tenor,
                                               std::size_t a, std::size_t b, double strike);

// Exercise floor g_e sampled on the grid (no positive part, no smoothing).
std::vector<double> exercise_floor(const Grid& grid, const TenorStructure& tenor, std::size_t e,
                                   std::size_t b, double strike);

// Multilinear interpolation of grid data at a query point inside the domain.
double multilinear_interp(const Grid& grid, const std::vector<double>& values,
                          const std::vector<double>& point);

}  // namespace fmm
