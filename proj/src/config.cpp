#include "fmm/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fmm {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    throw std::runtime_error("config line " + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> tokens(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

double parse_double(const std::string& tok, std::size_t line, const std::string& key) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        fail(line, "'" + key + "': expected a number, got '" + tok + "'");
    }
    if (pos != tok.size()) fail(line, "'" + key + "': trailing characters in '" + tok + "'");
    return v;
}

std::size_t parse_index(const std::string& tok, std::size_t line, const std::string& key) {
    std::size_t pos = 0;
    double v = -1.0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != tok.size() || v < 0.0 || v != std::floor(v))
        fail(line, "'" + key + "': expected a non-negative integer, got '" + tok + "'");
    return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& tok, std::size_t line, const std::string& key) {
    if (tok == "true" || tok == "yes" || tok == "1") return true;
    if (tok == "false" || tok == "no" || tok == "0") return false;
    fail(line, "'" + key + "': expected true/false, got '" + tok + "'");
}

std::vector<double> parse_doubles(const std::vector<std::string>& toks, std::size_t line,
                                  const std::string& key) {
    std::vector<double> out;
    out.reserve(toks.size());
    for (const auto& t : toks) out.push_back(parse_double(t, line, key));
    return out;
}

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(std::numeric_limits<double>::max_digits10);
    out << v;
    return out.str();
}

}  // namespace

StrikeSpec parse_strike_token(const std::string& token) {
    if (token.empty()) throw std::invalid_argument("strike: empty token");
    StrikeSpec k;
    std::string num = token;
    if (token.back() == 'x') {
        k.relative = true;
        num = token.substr(0, token.size() - 1);
    }
    std::size_t pos = 0;
    try {
        k.value = std::stod(num, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != num.size())
        throw std::invalid_argument("strike: expected a number or '<number>x', got '" + token + "'");
    if (k.value <= 0.0) throw std::invalid_argument("strike: must be positive, got '" + token + "'");
    return k;
}

SwaptionSpec ProductConfig::make_spec(const MarketData& md, const StrikeSpec& strike) const {
    SwaptionSpec spec;
    spec.a = a;
    spec.b = b;
    spec.strike = strike.resolve(atm_strike(md, a, b));
    spec.exercise_dates = exercise_dates.empty() ? std::vector<std::size_t>{a} : exercise_dates;
    spec.validate(md.num_rates());
    return spec;
}

std::vector<SwaptionSpec> ProductConfig::make_specs(const MarketData& md) const {
    std::vector<StrikeSpec> list = strikes;
    if (list.empty()) list.push_back({1.0, true});
    std::vector<SwaptionSpec> out;
    out.reserve(list.size());
    for (const auto& k : list) out.push_back(make_spec(md, k));
    return out;
}

MarketData RunConfig::make_market() const {
    const std::size_t n = maturities.size();
    if (n == 0) throw std::runtime_error("config: no market rates given");
    if (forwards.size() != n || vols.size() != n)
        throw std::runtime_error("config: rate rows have inconsistent lengths");
    std::vector<VolCurve> curves;
    curves.reserve(n);
    for (double s : vols) curves.push_back(VolCurve(s));
    std::vector<double> corr = correlation_matrix.empty()
                                   ? MarketData::flat_correlation(n, correlation)
                                   : correlation_matrix;
    std::vector<double> dates;
    dates.reserve(n + 1);
    dates.push_back(0.0);
    dates.insert(dates.end(), maturities.begin(), maturities.end());
    return MarketData(TenorStructure(std::move(dates)), forwards, std::move(curves),
                      std::move(corr));
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    std::size_t line = 0;
    std::size_t corr_rows = 0;

    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string s = trim(raw);
        if (s.empty()) continue;

        if (s.front() == '[') {
            if (s.back() != ']') fail(line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section != "market" && section != "correlation" && section != "product" &&
                section != "mc" && section != "pde")
                fail(line, "unknown section [" + section + "]");
            continue;
        }

        const auto eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) fail(line, "empty key");
        if (value.empty()) fail(line, "'" + key + "': empty value");
        const auto toks = tokens(value);

        if (section == "market") {
            if (key == "rate") {
                if (toks.size() != 3)
                    fail(line, "'rate': expected three numbers (maturity forward vol)");
                cfg.maturities.push_back(parse_double(toks[0], line, key));
                cfg.forwards.push_back(parse_double(toks[1], line, key));
                cfg.vols.push_back(parse_double(toks[2], line, key));
            } else if (key == "correlation") {
                if (toks.size() != 1) fail(line, "'correlation': expected one number");
                cfg.correlation = parse_double(toks[0], line, key);
            } else {
                fail(line, "unknown key '" + key + "' in section [market]");
            }
        } else if (section == "correlation") {
            if (key != "row") fail(line, "unknown key '" + key + "' in section [correlation]");
            const auto row = parse_doubles(toks, line, key);
            cfg.correlation_matrix.insert(cfg.correlation_matrix.end(), row.begin(), row.end());
            if (corr_rows == 0) corr_rows = row.size();
            else if (row.size() != corr_rows)
                fail(line, "'row': expected " + std::to_string(corr_rows) + " entries");
        } else if (section == "product") {
            if (key == "a") {
                cfg.product.a = parse_index(toks[0], line, key);
            } else if (key == "b") {
                cfg.product.b = parse_index(toks[0], line, key);
            } else if (key == "strikes") {
                cfg.product.strikes.clear();
                for (const auto& t : toks) {
                    try {
                        cfg.product.strikes.push_back(parse_strike_token(t));
                    } catch (const std::invalid_argument& e) {
                        fail(line, e.what());
                    }
                }
            } else if (key == "exercise") {
                cfg.product.exercise_dates.clear();
                for (const auto& t : toks)
                    cfg.product.exercise_dates.push_back(parse_index(t, line, key));
            } else {
                fail(line, "unknown key '" + key + "' in section [product]");
            }
        } else if (section == "mc") {
            if (key == "paths") cfg.mc.num_paths = parse_index(toks[0], line, key);
            else if (key == "steps") cfg.mc.num_steps = parse_index(toks[0], line, key);
            else if (key == "seed") cfg.mc.seed = parse_index(toks[0], line, key);
            else if (key == "antithetic") cfg.mc.antithetic = parse_bool(toks[0], line, key);
            else fail(line, "unknown key '" + key + "' in section [mc]");
        } else if (section == "pde") {
            if (key == "resolution") {
                cfg.pde.grid.resolution.clear();
                for (const auto& t : toks)
                    cfg.pde.grid.resolution.push_back(parse_index(t, line, key));
            } else if (key == "rmax") {
                cfg.pde.grid.r_max = parse_doubles(toks, line, key);
            } else if (key == "mesh") {
                if (toks[0] == "uniform") cfg.pde.grid.uniform = true;
                else if (toks[0] == "sinh") cfg.pde.grid.uniform = false;
                else fail(line, "'mesh': expected 'sinh' or 'uniform'");
            } else if (key == "stretch") {
                cfg.pde.grid.stretch = parse_double(toks[0], line, key);
            } else if (key == "dt_divisor") {
                cfg.pde.dt_divisor = parse_double(toks[0], line, key);
            } else if (key == "theta") {
                cfg.pde.theta = parse_double(toks[0], line, key);
            } else if (key == "kappa") {
                cfg.pde.kappa = parse_double(toks[0], line, key);
            } else if (key == "nu") {
                cfg.pde.nu = parse_double(toks[0], line, key);
            } else {
                fail(line, "unknown key '" + key + "' in section [pde]");
            }
        } else {
            fail(line, "'" + key + "' appears before any section header");
        }
    }

    if (!cfg.correlation_matrix.empty() && corr_rows * corr_rows != cfg.correlation_matrix.size())
        throw std::runtime_error("config: [correlation] rows do not form a square matrix");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "[market]\n";
    for (std::size_t i = 0; i < cfg.maturities.size(); ++i)
        out << "rate = " << fmt(cfg.maturities[i]) << ' ' << fmt(cfg.forwards[i]) << ' '
            << fmt(cfg.vols[i]) << '\n';
    out << "correlation = " << fmt(cfg.correlation) << '\n';
    if (!cfg.correlation_matrix.empty()) {
        const std::size_t n = cfg.maturities.size();
        out << "\n[correlation]\n";
        for (std::size_t i = 0; i < n; ++i) {
            out << "row =";
            for (std::size_t j = 0; j < n; ++j)
                out << ' ' << fmt(cfg.correlation_matrix[i * n + j]);
            out << '\n';
        }
    }
    out << "\n[product]\n";
    out << "a = " << cfg.product.a << '\n';
    out << "b = " << cfg.product.b << '\n';
    if (!cfg.product.strikes.empty()) {
        out << "strikes =";
        for (const auto& k : cfg.product.strikes)
            out << ' ' << fmt(k.value) << (k.relative ? "x" : "");
        out << '\n';
    }
    if (!cfg.product.exercise_dates.empty()) {
        out << "exercise =";
        for (std::size_t e : cfg.product.exercise_dates) out << ' ' << e;
        out << '\n';
    }
    out << "\n[mc]\n";
    out << "paths = " << cfg.mc.num_paths << '\n';
    out << "steps = " << cfg.mc.num_steps << '\n';
    out << "seed = " << cfg.mc.seed << '\n';
    out << "antithetic = " << (cfg.mc.antithetic ? "true" : "false") << '\n';
    out << "\n[pde]\n";
    if (!cfg.pde.grid.resolution.empty()) {
        out << "resolution =";
        for (std::size_t m : cfg.pde.grid.resolution) out << ' ' << m;
        out << '\n';
    }
    if (!cfg.pde.grid.r_max.empty()) {
        out << "rmax =";
        for (double r : cfg.pde.grid.r_max) out << ' ' << fmt(r);
        out << '\n';
    }
    out << "mesh = " << (cfg.pde.grid.uniform ? "uniform" : "sinh") << '\n';
    out << "stretch = " << fmt(cfg.pde.grid.stretch) << '\n';
    out << "dt_divisor = " << fmt(cfg.pde.dt_divisor) << '\n';
    out << "theta = " << fmt(cfg.pde.theta) << '\n';
    out << "kappa = " << fmt(cfg.pde.kappa) << '\n';
    out << "nu = " << fmt(cfg.pde.nu) << '\n';
    return out.str();
}

}  // namespace fmm
