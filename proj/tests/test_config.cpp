#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "fmm/config.hpp"

using namespace fmm;

namespace {

// expects fn() to throw std::runtime_error whose message mentions the given fragment
template <typename Fn>
void check_parse_error(Fn&& fn, const std::string& fragment) {
    try {
        fn();
        FAIL_CHECK("expected a parse error mentioning '" << fragment << "'");
    } catch (const std::runtime_error& e) {
        const std::string what = e.what();
        CHECK_MESSAGE(what.find(fragment) != std::string::npos,
                      "message '" << what << "' does not mention '" << fragment << "'");
    }
}

const char* kMinimalMarket =
    "[market]\n"
    "rate = 0.25 0.010 0.20\n"
    "rate = 0.50 0.013 0.15\n";

}  // namespace

TEST_CASE("strike tokens") {
    StrikeSpec k = parse_strike_token("0.013");
    CHECK(k.value == 0.013);
    CHECK_FALSE(k.relative);
    CHECK(k.resolve(1.0) == 0.013);

    k = parse_strike_token("1.1x");
    CHECK(k.value == 1.1);
    CHECK(k.relative);
    CHECK(k.resolve(0.013) == doctest::Approx(0.0143).epsilon(1e-15));

    CHECK_THROWS_AS((void)parse_strike_token(""), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_strike_token("x"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_strike_token("1.1y"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_strike_token("-0.01"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_strike_token("0"), std::invalid_argument);
}

TEST_CASE("bundled sample configuration parses") {
    const RunConfig cfg = load_config("configs/quarterly.cfg");
    REQUIRE(cfg.maturities.size() == 5);
    CHECK(cfg.maturities == std::vector<double>{0.25, 0.5, 0.75, 1.0, 1.25});
    CHECK(cfg.forwards == std::vector<double>{0.01, 0.013, 0.014, 0.015, 0.016});
    CHECK(cfg.vols == std::vector<double>{0.2, 0.15, 0.25, 0.26, 0.27});
    CHECK(cfg.correlation == 0.5);
    CHECK(cfg.correlation_matrix.empty());
    CHECK(cfg.product.a == 1);
    CHECK(cfg.product.b == 2);
    REQUIRE(cfg.product.strikes.size() == 5);
    CHECK(cfg.product.strikes[0].value == 1.2);
    CHECK(cfg.product.strikes[0].relative);
    CHECK(cfg.product.strikes[4].value == 0.8);
    CHECK(cfg.mc.num_paths == 1000000);
    CHECK(cfg.mc.num_steps == 100);
    CHECK(cfg.mc.seed == 12345);
    CHECK_FALSE(cfg.mc.antithetic);
    CHECK(cfg.pde.grid.resolution == std::vector<std::size_t>{512});
    CHECK_FALSE(cfg.pde.grid.uniform);
    CHECK(cfg.pde.dt_divisor == 1024);
    CHECK(cfg.pde.theta == 0.5);

    const MarketData md = cfg.make_market();
    CHECK(md.num_rates() == 5);
    CHECK(md.rho(1, 2) == 0.5);
    CHECK(md.rho(3, 3) == 1.0);
    CHECK(md.sigma(2, 0.1) == 0.15);
}

TEST_CASE("serialization round trip") {
    RunConfig cfg;
    cfg.maturities = {0.25, 0.5, 0.75};
    cfg.forwards = {0.01, 0.013, 0.014};
    cfg.vols = {0.2, 0.15, 0.25};
    cfg.correlation_matrix = {1.0, 0.5, 0.25, 0.5, 1.0, 0.5, 0.25, 0.5, 1.0};
    cfg.product.a = 1;
    cfg.product.b = 3;
    cfg.product.strikes = {StrikeSpec{0.0135, false}, StrikeSpec{1.1, true}};
    cfg.product.exercise_dates = {1};
    cfg.mc.num_paths = 5000;
    cfg.mc.num_steps = 12;
    cfg.mc.seed = 99;
    cfg.mc.antithetic = true;
    cfg.pde.grid.resolution = {16, 24, 32};
    cfg.pde.grid.r_max = {0.5, 0.5, 0.7};
    cfg.pde.grid.uniform = true;
    cfg.pde.grid.stretch = 0.002;
    cfg.pde.dt_divisor = 64;
    cfg.pde.theta = 0.6;
    cfg.pde.kappa = 0.9;
    cfg.pde.nu = 1.25;

    const std::string text = serialize_config(cfg);
    const RunConfig back = parse_config(text);

    CHECK(back.maturities == cfg.maturities);
    CHECK(back.forwards == cfg.forwards);
    CHECK(back.vols == cfg.vols);
    CHECK(back.correlation_matrix == cfg.correlation_matrix);
    CHECK(back.product.a == cfg.product.a);
    CHECK(back.product.b == cfg.product.b);
    REQUIRE(back.product.strikes.size() == 2);
    CHECK(back.product.strikes[0].value == 0.0135);
    CHECK_FALSE(back.product.strikes[0].relative);
    CHECK(back.product.strikes[1].value == 1.1);
    CHECK(back.product.strikes[1].relative);
    CHECK(back.product.exercise_dates == cfg.product.exercise_dates);
    CHECK(back.mc.num_paths == cfg.mc.num_paths);
    CHECK(back.mc.num_steps == cfg.mc.num_steps);
    CHECK(back.mc.seed == cfg.mc.seed);
    CHECK(back.mc.antithetic == cfg.mc.antithetic);
    CHECK(back.pde.grid.resolution == cfg.pde.grid.resolution);
    CHECK(back.pde.grid.r_max == cfg.pde.grid.r_max);
    CHECK(back.pde.grid.uniform == cfg.pde.grid.uniform);
    CHECK(back.pde.grid.stretch == cfg.pde.grid.stretch);
    CHECK(back.pde.dt_divisor == cfg.pde.dt_divisor);
    CHECK(back.pde.theta == cfg.pde.theta);
    CHECK(back.pde.kappa == cfg.pde.kappa);
    CHECK(back.pde.nu == cfg.pde.nu);

    // canonical form is a fixed point of parse/serialize
    CHECK(serialize_config(parse_config(text)) == text);
}

TEST_CASE("parse errors name the offending line") {
    check_parse_error([] { (void)parse_config("[market]\nrate = 0.25 0.01\n"); }, "line 2");
    check_parse_error([] { (void)parse_config("rate = 0.25 0.01 0.2\n"); }, "line 1");
    check_parse_error(
        [] { (void)parse_config(std::string(kMinimalMarket) + "bogus = 1\n"); }, "line 4");
    check_parse_error(
        [] { (void)parse_config(std::string(kMinimalMarket) + "[nonsense]\nfoo = 1\n"); },
        "[nonsense]");
    check_parse_error(
        [] { (void)parse_config(std::string(kMinimalMarket) + "[product]\nstrikes = 1.1z\n"); },
        "line 5");
    check_parse_error(
        [] {
            (void)parse_config(std::string(kMinimalMarket) +
                               "[mc]\npaths = many\n");
        },
        "expected a non-negative integer");
    check_parse_error(
        [] {
            (void)parse_config(std::string(kMinimalMarket) +
                               "[correlation]\nrow = 1 0.5\nrow = 0.5 1 0\n");
        },
        "line 6");
    check_parse_error(
        [] {
            (void)parse_config(std::string(kMinimalMarket) +
                               "[correlation]\nrow = 1 0.5 0\nrow = 0.5 1 0\n");
        },
        "square");
    check_parse_error([] { (void)load_config("configs/does-not-exist.cfg"); }, "cannot open");
}

TEST_CASE("product resolution against a market") {
    RunConfig cfg = parse_config(std::string(kMinimalMarket) + "correlation = 0.5\n");
    const MarketData md = cfg.make_market();

    SUBCASE("defaults: single at-the-money European") {
        const auto specs = cfg.product.make_specs(md);
        REQUIRE(specs.size() == 1);
        CHECK(specs[0].a == 1);
        CHECK(specs[0].b == 2);
        CHECK(specs[0].strike == doctest::Approx(0.013).epsilon(1e-14));
        CHECK(specs[0].european());
    }

    SUBCASE("relative strikes scale the par rate") {
        cfg.product.strikes = {StrikeSpec{1.2, true}, StrikeSpec{0.02, false}};
        const auto specs = cfg.product.make_specs(md);
        REQUIRE(specs.size() == 2);
        CHECK(specs[0].strike == doctest::Approx(1.2 * 0.013).epsilon(1e-14));
        CHECK(specs[1].strike == 0.02);
    }

    SUBCASE("exercise schedule carries through") {
        RunConfig three = parse_config(
            "[market]\n"
            "rate = 0.25 0.010 0.20\n"
            "rate = 0.50 0.013 0.15\n"
            "rate = 0.75 0.014 0.25\n"
            "[product]\n"
            "a = 2\n"
            "b = 3\n"
            "exercise = 1 2\n");
        const auto specs = three.product.make_specs(three.make_market());
        REQUIRE(specs.size() == 1);
        CHECK_FALSE(specs[0].european());
        CHECK(specs[0].exercise_dates == std::vector<std::size_t>{1, 2});
    }

    SUBCASE("invalid product bounds surface as exceptions") {
        cfg.product.b = 7;  // beyond the two quoted rates
        CHECK_THROWS_AS((void)cfg.product.make_specs(md), std::invalid_argument);
    }
}
