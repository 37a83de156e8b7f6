#include "fmm/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "fmm/rng.hpp"

namespace fmm {

namespace {

// Two-sided 95% quantile of the standard normal, as conventionally rounded.
constexpr double kZ95 = 1.959964;
constexpr std::size_t kChunk = 4096;

struct KahanSum {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

// Uniform steps over [0, T_a] merged with the tenor dates in between, so every fixing
// date is a grid point and rates freeze exactly at their fixings.
std::vector<double> build_time_grid(const TenorStructure& tenor, std::size_t a,
                                    std::size_t num_steps) {
    const double ta = tenor.date(a);
    std::vector<double> grid;
    grid.reserve(num_steps + a + 1);
    for (std::size_t i = 0; i <= num_steps; ++i)
        grid.push_back(ta * static_cast<double>(i) / static_cast<double>(num_steps));
    for (std::size_t j = 1; j < a; ++j) grid.push_back(tenor.date(j));
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [ta](double x, double y) { return std::abs(x - y) <= 1e-14 * ta; }),
               grid.end());
    return grid;
}

}  // namespace

std::vector<double> cholesky_factor(const std::vector<double>& rho, std::size_t n) {
    if (rho.size() != n * n) throw std::invalid_argument("cholesky: size mismatch");
    std::vector<double> l(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double d = rho[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
        if (d < -1e-10) throw std::domain_error("cholesky: matrix not positive semi-definite");
        if (d <= 1e-14) {
            // semi-definite direction: column is zero
            continue;
        }
        const double root = std::sqrt(d);
        l[j * n + j] = root;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = rho[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
            l[i * n + j] = s / root;
        }
    }
    return l;
}

void log_euler_step(const MarketData& md, double t, double dt, const std::vector<double>& chol,
                    const double* z, std::vector<double>& rates) {
    if (md.spec.kind != VolSpec::Kind::lognormal)
        throw std::invalid_argument("log euler step: lognormal vol spec required");
    const auto& tenor = md.tenor;
    const std::size_t n = rates.size();
    if (n > 16) throw std::invalid_argument("log euler step: more than 16 rates");
    const std::size_t lo = std::max<std::size_t>(tenor.eta(t), 1);

    // s_i = tau_i sigma_i gamma_i R_i / (1 + tau_i R_i), shared across the drift sums
    double s[16], sg[16];
    for (std::size_t i = 1; i <= n; ++i) {
        const double g = gamma_decay(tenor, i, t);
        sg[i - 1] = g * md.sigma(i, t);
        const double denom = 1.0 + tenor.tau(i) * rates[i - 1];
        if (denom <= 0.0) throw std::domain_error("log euler step: 1 + tau*R not positive");
        s[i - 1] = tenor.tau(i) * sg[i - 1] * rates[i - 1] / denom;
    }

    const double sqdt = std::sqrt(dt);
    for (std::size_t k = 1; k <= n; ++k) {
        const double sgk = sg[k - 1];
        if (sgk == 0.0) continue;  // fixed rate: frozen at its fixing
        double drift = 0.0;
        for (std::size_t i = lo; i <= k; ++i) drift += md.rho(i, k) * s[i - 1];
        double dw = 0.0;
        for (std::size_t i = 1; i <= k; ++i) dw += chol[(k - 1) * n + (i - 1)] * z[i - 1];
        rates[k - 1] *= std::exp((sgk * drift - 0.5 * sgk * sgk) * dt + sgk * sqdt * dw);
    }
}

CIEstimate mc_deflated_expectation(const MarketData& md, std::size_t a,
                                   const std::function<double(const RateState&)>& payoff,
                                   const MCConfig& cfg, unsigned num_threads) {
    if (a < 1 || a > md.num_rates()) throw std::invalid_argument("mc: expiry index");
    if (cfg.num_paths == 0) throw std::invalid_argument("mc: need at least one path");
    if (cfg.antithetic && cfg.num_paths % 2 != 0)
        throw std::invalid_argument("mc: antithetic mode needs an even path count");

    const std::size_t n = md.num_rates();
    const auto grid = build_time_grid(md.tenor, a, cfg.num_steps);
    const auto chol = cholesky_factor(md.correlation, n);
    const std::size_t num_samples = cfg.antithetic ? cfg.num_paths / 2 : cfg.num_paths;
    const std::size_t num_chunks = (num_samples + kChunk - 1) / kChunk;

    std::vector<double> chunk_sum(num_chunks, 0.0), chunk_sq(num_chunks, 0.0);

    auto run_path = [&](PathRng& rng, bool flip, std::vector<double>& rates,
                        std::vector<double>& z) -> double {
        rates = md.initial_forwards;
        for (std::size_t s = 0; s + 1 < grid.size(); ++s) {
            for (std::size_t i = 0; i < n; ++i) z[i] = flip ? -rng.normal() : rng.normal();
            log_euler_step(md, grid[s], grid[s + 1] - grid[s], chol, z.data(), rates);
        }
        RateState terminal{grid.back(), rates};
        const double deflator = discount_factor(md.tenor, terminal, a, 0);
        return payoff(terminal) / deflator;
    };

    auto run_chunk = [&](std::size_t c) {
        std::vector<double> rates(n), z(n);
        KahanSum sum, sq;
        const std::size_t begin = c * kChunk;
        const std::size_t end = std::min(begin + kChunk, num_samples);
        for (std::size_t idx = begin; idx < end; ++idx) {
            double value;
            if (cfg.antithetic) {
                PathRng rng(cfg.seed, idx);
                const double up = run_path(rng, false, rates, z);
                PathRng rng2(cfg.seed, idx);
                const double dn = run_path(rng2, true, rates, z);
                value = 0.5 * (up + dn);
            } else {
                PathRng rng(cfg.seed, idx);
                value = run_path(rng, false, rates, z);
            }
            sum.add(value);
            sq.add(value * value);
        }
        chunk_sum[c] = sum.sum;
        chunk_sq[c] = sq.sum;
    };

    unsigned workers = num_threads ? num_threads : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, num_chunks));
    if (workers <= 1) {
        for (std::size_t c = 0; c < num_chunks; ++c) run_chunk(c);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t c = next.fetch_add(1); c < num_chunks; c = next.fetch_add(1))
                    run_chunk(c);
            });
        for (auto& th : pool) th.join();
    }

    // chunk partials combined in fixed (chunk-index) order: independent of thread count
    KahanSum total, total_sq;
    for (std::size_t c = 0; c < num_chunks; ++c) {
        total.add(chunk_sum[c]);
        total_sq.add(chunk_sq[c]);
    }

    const double m = static_cast<double>(num_samples);
    CIEstimate ci;
    ci.num_paths = cfg.num_paths;
    ci.mean = total.sum / m;
    const double var = std::max(0.0, (total_sq.sum - m * ci.mean * ci.mean) / (m - 1.0));
    ci.std_error = std::sqrt(var / m);
    ci.half_width = kZ95 * ci.std_error;
    return ci;
}

MCPriceResult price_swaption_mc(const MarketData& md, const SwaptionSpec& spec, const MCConfig& cfg,
                                unsigned num_threads) {
    spec.validate(md.num_rates());
    if (!spec.european())
        throw std::invalid_argument("mc: only European exercise is supported");
    const auto t0 = std::chrono::steady_clock::now();
    auto payoff = [&md, &spec](const RateState& st) {
        return swaption_payoff(md.tenor, st, spec.a, spec.b, spec.strike);
    };
    MCPriceResult out;
    out.ci = mc_deflated_expectation(md, spec.a, payoff, cfg, num_threads);
    out.runtime_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace fmm
