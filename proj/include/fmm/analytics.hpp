#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fmm/black.hpp"
#include "fmm/grid.hpp"
#include "fmm/integrator.hpp"
#include "fmm/market_data.hpp"
#include "fmm/monte_carlo.hpp"
#include "fmm/payoffs.hpp"

namespace fmm {

// Spatial discretization request. Axis 1 is uniform; the remaining axes are
// sinh-stretched around the strike unless `uniform` asks for uniform meshes everywhere.
struct GridConfig {
    std::vector<std::size_t> resolution;  // per-axis cell count M_k; one entry broadcasts
    std::vector<double> r_max;            // per-axis; empty or 0 entries use the default rule
    bool uniform = false;
    double stretch = 0.0;  // sinh scale L_k; <= 0 means K/10

    std::size_t resolution_for(std::size_t d) const {
        if (resolution.empty()) throw std::invalid_argument("grid config: resolution missing");
        return resolution.size() == 1 ? resolution[0] : resolution.at(d);
    }
};

struct PdeConfig {
    GridConfig grid;
    double dt_divisor = 0.0;  // dt = tau_1 / dt_divisor; <= 0 means the 2*max(M_k) rule
    double theta = 0.5;
    double kappa = 1.0;
    double nu = 0.0;  // <= 0: derived
};

struct PriceReport {
    std::string method;
    std::size_t a = 0, b = 0;
    double strike = 0.0;
    double price = 0.0;
    std::optional<double> implied_vol;
    std::optional<CIEstimate> ci;
    double runtime_sec = 0.0;
};

// Default truncation bound 5 * K_atm shared by all axes of a product.
double default_r_max(const MarketData& md, std::size_t a, std::size_t b);

Grid build_grid(const MarketData& md, const SwaptionSpec& spec, const GridConfig& cfg);

struct PdeSolveResult {
    Grid grid;
    std::vector<double> solution;  // deflated value at reversed time = T_a (physical 0)
    double price = 0.0;            // multilinear interpolation at the initial forwards
    double dt = 0.0;
    double runtime_sec = 0.0;
};

// Backward splitting solve of the pricing problem for a (possibly multi-exercise)
// swaption; dimension equals b. Returns the full terminal field for error studies.
PdeSolveResult solve_swaption_pde(const MarketData& md, const SwaptionSpec& spec,
                                  const PdeConfig& cfg);

PriceReport price_swaption_pde(const MarketData& md, const SwaptionSpec& spec,
                               const PdeConfig& cfg);

PriceReport price_report_mc(const MarketData& md, const SwaptionSpec& spec, const MCConfig& cfg,
                            unsigned num_threads = 0);

// Implied Black volatility of a European swaption price under the par-rate/annuity
// convention with expiry T_a.
double swaption_implied_vol(const MarketData& md, std::size_t a, std::size_t b, double strike,
                            double price);

struct ConvergenceRow {
    std::size_t level = 0;      // cells per axis
    double price = 0.0;
    double l2_error = 0.0;      // RMS against the reference on the shared coarse nodes
    double linf_error = 0.0;
    double l2_order = 0.0;      // log2 ratio to the previous row; 0 for the first row
    double linf_order = 0.0;
    double runtime_sec = 0.0;
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    double ref_price = 0.0;  // interpolated price of the reference run
    double ref_runtime_sec = 0.0;
};

// Runs the solver at each level plus the reference level (all with the same dt) and
// measures errors on the coarse node set; meshes are nested so restriction is exact.
ConvergenceStudy convergence_study(const MarketData& md, const SwaptionSpec& spec,
                                   const std::vector<std::size_t>& levels, std::size_t ref_level,
                                   const PdeConfig& cfg);

}  // namespace fmm
