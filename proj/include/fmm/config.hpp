#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fmm/analytics.hpp"
#include "fmm/market_data.hpp"
#include "fmm/monte_carlo.hpp"
#include "fmm/payoffs.hpp"

namespace fmm {

// One strike entry: an absolute rate level, or (with `relative`) a multiple of the
// at-the-money rate of the product being priced. Written as "0.013" / "1.1x" in files.
struct StrikeSpec {
    double value = 0.0;
    bool relative = false;

    double resolve(double atm) const { return relative ? value * atm : value; }
};

struct ProductConfig {
    std::size_t a = 1;                        // expiry index: option on R_{a+1..b}
    std::size_t b = 2;                        // terminal index
    std::vector<StrikeSpec> strikes;          // empty -> single ATM strike
    std::vector<std::size_t> exercise_dates;  // empty -> {a} (European)

    SwaptionSpec make_spec(const MarketData& md, const StrikeSpec& strike) const;
    std::vector<SwaptionSpec> make_specs(const MarketData& md) const;
};

// Full run description: market curve, product, and numerical settings. Parsed from an
// INI-style file; serialize_config() emits a form that parses back to the same values.
struct RunConfig {
    std::vector<double> maturities;          // T_1 < ... < T_N
    std::vector<double> forwards;            // R_k(0)
    std::vector<double> vols;                // sigma_k
    double correlation = 0.0;                // flat off-diagonal value ...
    std::vector<double> correlation_matrix;  // ... unless a full row-major matrix is given
    ProductConfig product;
    MCConfig mc;
    PdeConfig pde;

    MarketData make_market() const;
};

// Parses a strike token: "0.013" (absolute) or "1.1x" (multiple of ATM). Throws
// std::invalid_argument on anything else.
StrikeSpec parse_strike_token(const std::string& token);

// Parses configuration text. Throws std::runtime_error naming the offending line and
// key on malformed input.
RunConfig parse_config(const std::string& text);

// Reads and parses a configuration file.
RunConfig load_config(const std::string& path);

// Canonical text form; parse_config(serialize_config(c)) reproduces c exactly.
std::string serialize_config(const RunConfig& cfg);

}  // namespace fmm
