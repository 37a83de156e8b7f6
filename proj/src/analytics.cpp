#include "fmm/analytics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace fmm {

double default_r_max(const MarketData& md, std::size_t a, std::size_t b) {
    // Five strikes is ~20 standard deviations for quarterly lognormal rates, so the
    // truncation itself is invisible in the price. Keeping the bound tight also keeps
    // the outer sinh cells small: with a wide domain their size scales like R_max and
    // the r_max^2-weighted diffusion shows a slowly decaying error band there before
    // the asymptotic regime kicks in.
    return 5.0 * atm_strike(md, a, b);
}

Grid build_grid(const MarketData& md, const SwaptionSpec& spec, const GridConfig& cfg) {
    spec.validate(md.num_rates());
    const std::size_t dim = spec.b;
    const double rmax_default = default_r_max(md, spec.a, spec.b);
    std::vector<Axis> axes;
    axes.reserve(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        const std::size_t m = cfg.resolution_for(d);
        double rmax = rmax_default;
        if (!cfg.r_max.empty()) {
            const double r = cfg.r_max.size() == 1 ? cfg.r_max[0] : cfg.r_max.at(d);
            if (r > 0.0) rmax = r;
        }
        if (d == 0 || cfg.uniform) {
            axes.push_back(Axis::make_uniform(m, rmax));
        } else {
            const double stretch = cfg.stretch > 0.0 ? cfg.stretch : spec.strike / 10.0;
            axes.push_back(Axis::make_sinh(m, rmax, spec.strike, stretch));
        }
    }
    return Grid(std::move(axes));
}

PdeSolveResult solve_swaption_pde(const MarketData& md, const SwaptionSpec& spec,
                                  const PdeConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    spec.validate(md.num_rates());

    PdeSolveResult out{build_grid(md, spec, cfg.grid), {}, 0.0, 0.0, 0.0};
    const Grid& grid = out.grid;
    const double terminal = md.tenor.date(spec.a);

    std::size_t max_m = 0;
    for (const Axis& ax : grid.axes) max_m = std::max(max_m, ax.m);
    const double divisor =
        cfg.dt_divisor > 0.0 ? cfg.dt_divisor : 2.0 * static_cast<double>(max_m);
    const double dt = md.tenor.tau(1) / divisor;

    out.solution = smoothed_initial_condition(grid, md.tenor, spec.a, spec.b, spec.strike);

    IntegratorConfig icfg;
    icfg.dt = dt;
    icfg.horizon = terminal;
    icfg.theta = cfg.theta;
    icfg.kappa = cfg.kappa;
    icfg.nu = cfg.nu;
    if (!spec.european()) {
        // earlier exercise dates, seen at reversed times T_a - T_e, latest first
        for (std::size_t q = spec.exercise_dates.size() - 1; q-- > 0;) {
            const std::size_t e = spec.exercise_dates[q];
            JumpCondition jump;
            jump.t = terminal - md.tenor.date(e);
            jump.floor = exercise_floor(grid, md.tenor, e, spec.b, spec.strike);
            icfg.jumps.push_back(std::move(jump));
        }
    }

    PdeOperator op(grid, md, terminal);
    integrate(op, icfg, out.solution);

    std::vector<double> spot(spec.b);
    for (std::size_t d = 0; d < spec.b; ++d) spot[d] = md.forward(d + 1);
    out.price = multilinear_interp(grid, out.solution, spot);
    out.dt = dt;
    out.runtime_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

double swaption_implied_vol(const MarketData& md, std::size_t a, std::size_t b, double strike,
                            double price) {
    const double s0 = atm_strike(md, a, b);
    const double ann = annuity(md, a, b);
    return black_implied_vol(price, s0, strike, md.tenor.date(a), ann);
}

PriceReport price_swaption_pde(const MarketData& md, const SwaptionSpec& spec,
                               const PdeConfig& cfg) {
    const PdeSolveResult res = solve_swaption_pde(md, spec, cfg);
    PriceReport rep;
    rep.method = "pde";
    rep.a = spec.a;
    rep.b = spec.b;
    rep.strike = spec.strike;
    rep.price = res.price;
    rep.runtime_sec = res.runtime_sec;
    if (spec.european()) {
        try {
            rep.implied_vol = swaption_implied_vol(md, spec.a, spec.b, spec.strike, res.price);
        } catch (const std::exception&) {
            rep.implied_vol.reset();  // price outside the Black range (e.g. zero)
        }
    }
    return rep;
}

PriceReport price_report_mc(const MarketData& md, const SwaptionSpec& spec, const MCConfig& cfg,
                            unsigned num_threads) {
    const MCPriceResult res = price_swaption_mc(md, spec, cfg, num_threads);
    PriceReport rep;
    rep.method = "mc";
    rep.a = spec.a;
    rep.b = spec.b;
    rep.strike = spec.strike;
    rep.price = res.ci.mean;
    rep.ci = res.ci;
    rep.runtime_sec = res.runtime_sec;
    try {
        rep.implied_vol = swaption_implied_vol(md, spec.a, spec.b, spec.strike, res.ci.mean);
    } catch (const std::exception&) {
        rep.implied_vol.reset();
    }
    return rep;
}

ConvergenceStudy convergence_study(const MarketData& md, const SwaptionSpec& spec,
                                   const std::vector<std::size_t>& levels, std::size_t ref_level,
                                   const PdeConfig& cfg) {
    if (levels.empty()) throw std::invalid_argument("convergence study: no levels");
    for (std::size_t lv : levels)
        if (lv == 0 || ref_level % lv != 0 || lv >= ref_level)
            throw std::invalid_argument("convergence study: levels must divide the reference level");

    PdeConfig ref_cfg = cfg;
    ref_cfg.grid.resolution = {ref_level};
    if (cfg.dt_divisor <= 0.0) ref_cfg.dt_divisor = 2.0 * static_cast<double>(ref_level);
    const PdeSolveResult ref = solve_swaption_pde(md, spec, ref_cfg);

    ConvergenceStudy study;
    study.ref_price = ref.price;
    study.ref_runtime_sec = ref.runtime_sec;
    std::vector<ConvergenceRow>& rows = study.rows;
    rows.reserve(levels.size());
    for (std::size_t lv : levels) {
        PdeConfig run_cfg = ref_cfg;  // same dt as the reference: spatial error isolated
        run_cfg.grid.resolution = {lv};
        const PdeSolveResult run = solve_swaption_pde(md, spec, run_cfg);

        // nested meshes: coarse node j on each axis is fine node j * (ref/lv)
        const std::size_t factor = ref_level / lv;
        const std::size_t dim = run.grid.dim();
        std::vector<std::size_t> idx(dim, 0);
        double sum_sq = 0.0, max_abs = 0.0;
        for (std::size_t p = 0; p < run.grid.size; ++p) {
            std::size_t fine = 0;
            for (std::size_t d = 0; d < dim; ++d) fine += idx[d] * factor * ref.grid.strides[d];
            const double diff = std::abs(run.solution[p] - ref.solution[fine]);
            sum_sq += diff * diff;
            max_abs = std::max(max_abs, diff);
            for (std::size_t d = 0; d < dim; ++d) {
                if (++idx[d] <= run.grid.axes[d].m) break;
                idx[d] = 0;
            }
        }
        ConvergenceRow row;
        row.level = lv;
        row.price = run.price;
        row.l2_error = std::sqrt(sum_sq / static_cast<double>(run.grid.size));
        row.linf_error = max_abs;
        row.runtime_sec = run.runtime_sec;
        if (!rows.empty()) {
            row.l2_order = std::log2(rows.back().l2_error / row.l2_error);
            row.linf_order = std::log2(rows.back().linf_error / row.linf_error);
        }
        rows.push_back(row);
    }
    return study;
}

}  // namespace fmm
