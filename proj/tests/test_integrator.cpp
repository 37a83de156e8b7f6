#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fmm/grid.hpp"
#include "fmm/integrator.hpp"
#include "fmm/market_data.hpp"
#include "fmm/operators.hpp"
#include "test_helpers.hpp"

using namespace fmm;
using fmm::testing::make_market;

namespace {

MarketData frozen_market() {  // zero volatility: F == 0, stepping is the identity
    TenorStructure tenor({0.0, 0.25, 0.5});
    return MarketData(tenor, {0.01, 0.013}, {VolCurve(0.0), VolCurve(0.0)},
                      MarketData::flat_correlation(2, 0.5));
}

Grid small_grid() { return Grid({Axis::make_uniform(5, 0.3), Axis::make_uniform(4, 0.3)}); }

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("damping parameter switches at four dimensions") {
    CHECK(default_nu(1, 0.5, 1.0) == 0.5);
    CHECK(default_nu(2, 0.5, 1.0) == 0.5);
    CHECK(default_nu(3, 0.5, 1.0) == 0.5);
    CHECK(default_nu(4, 0.5, 1.0) == 2.0);
    CHECK(default_nu(5, 0.5, 0.8) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("a step of the frozen problem leaves the state untouched") {
    const auto md = frozen_market();
    const Grid grid = small_grid();
    PdeOperator op(grid, md, 0.25);
    std::vector<double> y(grid.size);
    for (std::size_t p = 0; p < grid.size; ++p) y[p] = 0.1 * static_cast<double>(p);
    const auto before = y;
    StageBuffers buf;
    amfr_w1_step(op, 0.0, 0.05, 0.5, 0.5, y, buf);
    CHECK(max_abs_diff(y, before) == 0.0);
}

TEST_CASE("exercise floors are applied at their jump times") {
    const auto md = frozen_market();
    const Grid grid = small_grid();
    PdeOperator op(grid, md, 0.25);

    std::vector<double> y(grid.size, 1.0);
    std::vector<double> lo(grid.size, 0.5), hi(grid.size, 0.5);
    hi[3] = 2.0;
    hi[17] = 1.5;

    IntegratorConfig cfg;
    cfg.dt = 0.25 / 8;
    cfg.horizon = 0.25;
    cfg.jumps = {JumpCondition{0.125, lo}, JumpCondition{0.25, hi}};
    integrate(op, cfg, y);

    // dynamics are frozen, so the result is the running maximum of state and floors
    for (std::size_t p = 0; p < grid.size; ++p) CHECK(y[p] == std::max(1.0, hi[p]));
}

TEST_CASE("integration rejects inconsistent step and jump layouts") {
    const auto md = frozen_market();
    const Grid grid = small_grid();
    PdeOperator op(grid, md, 0.25);
    std::vector<double> y(grid.size, 1.0);

    IntegratorConfig cfg;
    cfg.horizon = 0.25;

    cfg.dt = 0.06;  // does not divide 0.25
    CHECK_THROWS_AS(integrate(op, cfg, y), std::invalid_argument);

    cfg.dt = 0.025;
    cfg.jumps = {JumpCondition{0.11, std::vector<double>(grid.size, 0.0)}};
    CHECK_THROWS_AS(integrate(op, cfg, y), std::invalid_argument);  // off the step grid

    cfg.jumps = {JumpCondition{0.1, std::vector<double>(grid.size, 0.0)},
                 JumpCondition{0.05, std::vector<double>(grid.size, 0.0)}};
    CHECK_THROWS_AS(integrate(op, cfg, y), std::invalid_argument);  // not increasing

    cfg.jumps = {JumpCondition{0.1, std::vector<double>(3, 0.0)}};
    CHECK_THROWS_AS(integrate(op, cfg, y), std::invalid_argument);  // floor size mismatch

    cfg.jumps.clear();
    cfg.dt = 0.0;
    CHECK_THROWS_AS(integrate(op, cfg, y), std::invalid_argument);

    cfg.dt = 0.025;
    std::vector<double> bad(grid.size + 1, 0.0);
    CHECK_THROWS_AS(integrate(op, cfg, bad), std::invalid_argument);
}

TEST_CASE("step refinement converges on the pricing problem") {
    const auto md = make_market(2);
    const double terminal = md.tenor.date(1);
    const Grid grid({Axis::make_uniform(16, 0.39), Axis::make_sinh(16, 0.39, 0.013, 0.0013)});
    PdeOperator op(grid, md, terminal);
    const auto y0 = smoothed_initial_condition(grid, md.tenor, 1, 2, 0.013);

    auto run = [&](std::size_t steps) {
        IntegratorConfig cfg;
        cfg.dt = terminal / static_cast<double>(steps);
        cfg.horizon = terminal;
        auto y = y0;
        integrate(op, cfg, y);
        return y;
    };

    auto rms_diff = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
        return std::sqrt(s / static_cast<double>(a.size()));
    };
    const auto ref = run(64);
    const double e1 = rms_diff(run(4), ref);
    const double e2 = rms_diff(run(8), ref);
    const double e3 = rms_diff(run(16), ref);
    CHECK(e1 > e2);
    CHECK(e2 > e3);
    CHECK(e1 / e3 > 8.0);
    CHECK(ref[grid.flatten({0, 0})] == 0.0);  // absorbing corner keeps the zero payoff
}
