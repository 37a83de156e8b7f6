// fmmpde: prices backward-looking rate swaptions with a correlated Monte Carlo
// simulator and an N-dimensional finite-difference solver, and cross-checks the two.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fmm/analytics.hpp"
#include "fmm/config.hpp"

namespace {

std::string fe(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

std::string ft(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

void print_reports(const std::vector<fmm::PriceReport>& reports, bool csv) {
    if (csv) {
        std::cout << "method,a,b,strike,price,implied_vol,ci_lower,ci_upper,std_error,runtime_sec\n";
        for (const auto& r : reports) {
            std::cout << r.method << ',' << r.a << ',' << r.b << ',' << fe(r.strike) << ','
                      << fe(r.price) << ',' << (r.implied_vol ? fe(*r.implied_vol) : "") << ','
                      << (r.ci ? fe(r.ci->lower()) : "") << ',' << (r.ci ? fe(r.ci->upper()) : "")
                      << ',' << (r.ci ? fe(r.ci->std_error) : "") << ',' << ft(r.runtime_sec)
                      << '\n';
        }
        return;
    }
    std::printf("%-6s %3s %3s %14s %15s %12s %15s %15s %10s\n", "method", "a", "b", "strike",
                "price", "impl_vol", "ci_lower", "ci_upper", "runtime_s");
    for (const auto& r : reports) {
        std::printf("%-6s %3zu %3zu %14.6e %15.7e", r.method.c_str(), r.a, r.b, r.strike, r.price);
        if (r.implied_vol) std::printf(" %12.6f", *r.implied_vol);
        else std::printf(" %12s", "-");
        if (r.ci) std::printf(" %15.7e %15.7e", r.ci->lower(), r.ci->upper());
        else std::printf(" %15s %15s", "-", "-");
        std::printf(" %10.2f\n", r.runtime_sec);
    }
}

void print_convergence(const std::vector<fmm::ConvergenceRow>& rows, bool csv) {
    if (csv) {
        std::cout << "level,price,l2_error,linf_error,l2_order,linf_order,runtime_sec\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            std::cout << r.level << ',' << fe(r.price) << ',' << fe(r.l2_error) << ','
                      << fe(r.linf_error) << ',' << (i ? fe(r.l2_order) : "") << ','
                      << (i ? fe(r.linf_order) : "") << ',' << ft(r.runtime_sec) << '\n';
        }
        return;
    }
    std::printf("%6s %15s %13s %7s %13s %7s %10s\n", "L", "price", "l2_error", "order",
                "linf_error", "order", "runtime_s");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        std::printf("%6zu %15.7e %13.5e", r.level, r.price, r.l2_error);
        if (i) std::printf(" %7.3f", r.l2_order);
        else std::printf(" %7s", "-");
        std::printf(" %13.5e", r.linf_error);
        if (i) std::printf(" %7.3f", r.linf_order);
        else std::printf(" %7s", "-");
        std::printf(" %10.2f\n", r.runtime_sec);
    }
}

struct CrossRow {
    fmm::PriceReport pde;
    fmm::PriceReport mc;
    bool contained = false;
};

void print_cross(const std::vector<CrossRow>& rows, bool csv) {
    if (csv) {
        std::cout << "a,b,strike,pde_price,mc_mean,ci_lower,ci_upper,contained,"
                     "pde_runtime_sec,mc_runtime_sec\n";
        for (const auto& r : rows) {
            std::cout << r.pde.a << ',' << r.pde.b << ',' << fe(r.pde.strike) << ','
                      << fe(r.pde.price) << ',' << fe(r.mc.price) << ',' << fe(r.mc.ci->lower())
                      << ',' << fe(r.mc.ci->upper()) << ',' << (r.contained ? "PASS" : "FAIL")
                      << ',' << ft(r.pde.runtime_sec) << ',' << ft(r.mc.runtime_sec) << '\n';
        }
        return;
    }
    std::printf("%3s %3s %14s %15s %15s %15s %15s  %s\n", "a", "b", "strike", "pde_price",
                "mc_mean", "ci_lower", "ci_upper", "containment");
    bool all = true;
    for (const auto& r : rows) {
        std::printf("%3zu %3zu %14.6e %15.7e %15.7e %15.7e %15.7e  %s\n", r.pde.a, r.pde.b,
                    r.pde.strike, r.pde.price, r.mc.price, r.mc.ci->lower(), r.mc.ci->upper(),
                    r.contained ? "PASS" : "FAIL");
        all = all && r.contained;
    }
    std::printf("all strikes contained: %s\n", all ? "yes" : "no");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Backward-looking rate swaption pricer (Monte Carlo + finite differences)",
                 "fmmpde"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("-c,--config", config_path, "configuration file")
        ->envname("FMMPDE_CONFIG");
    bool csv = false;
    app.add_flag("--csv", csv, "emit CSV instead of an aligned table");
    unsigned threads = 0;
    app.add_option("--threads", threads, "simulation worker threads (0 = hardware)");

    // product overrides
    std::size_t opt_a = 0, opt_b = 0;
    std::vector<std::string> opt_strikes;
    std::vector<std::size_t> opt_exercise;
    auto* o_a = app.add_option("--a", opt_a, "expiry index");
    auto* o_b = app.add_option("--b", opt_b, "terminal index");
    auto* o_strikes =
        app.add_option("--strikes", opt_strikes, "strike ladder (absolute or '<m>x' of ATM)");
    auto* o_exercise = app.add_option("--exercise", opt_exercise, "exercise date indices");

    // monte carlo overrides
    std::size_t opt_paths = 0, opt_steps = 0, opt_seed = 0;
    bool opt_anti = false;
    auto* o_paths = app.add_option("--paths", opt_paths, "number of paths");
    auto* o_steps = app.add_option("--steps", opt_steps, "uniform time steps to expiry");
    auto* o_seed = app.add_option("--seed", opt_seed, "random seed");
    auto* o_anti = app.add_flag("--antithetic", opt_anti, "antithetic variates");

    // finite-difference overrides
    std::vector<std::size_t> opt_res;
    std::vector<double> opt_rmax;
    std::string opt_mesh;
    double opt_stretch = 0.0, opt_dtdiv = 0.0, opt_theta = 0.0, opt_kappa = 0.0, opt_nu = 0.0;
    auto* o_res = app.add_option("--resolution", opt_res, "cells per axis (one value or per-axis)");
    auto* o_rmax = app.add_option("--rmax", opt_rmax, "domain upper bound per axis (0 = auto)");
    auto* o_mesh =
        app.add_option("--mesh", opt_mesh, "mesh kind: sinh | uniform")->check(CLI::IsMember({"sinh", "uniform"}));
    auto* o_stretch = app.add_option("--stretch", opt_stretch, "sinh clustering scale (0 = K/10)");
    auto* o_dtdiv = app.add_option("--dt-divisor", opt_dtdiv, "time step = tau_1 / divisor");
    auto* o_theta = app.add_option("--theta", opt_theta, "splitting parameter theta");
    auto* o_kappa = app.add_option("--kappa", opt_kappa, "nu scale for 4+ factors");
    auto* o_nu = app.add_option("--nu", opt_nu, "implicit weight nu (overrides theta/kappa rule)");

    auto* cmd_mc = app.add_subcommand("price-mc", "simulate the configured strike ladder");
    auto* cmd_pde = app.add_subcommand("price-pde", "solve the ladder on the grid");
    auto* cmd_iv = app.add_subcommand("implied-vol", "Black implied vol of a price");
    double iv_price = -1.0;
    auto* o_iv_price =
        cmd_iv->add_option("--price", iv_price, "price to invert (default: solve the grid)");
    auto* cmd_conv = app.add_subcommand("converge", "grid refinement study");
    std::vector<std::size_t> conv_levels;
    std::size_t conv_ref = 0;
    cmd_conv->add_option("--levels", conv_levels, "resolutions, coarse to fine");
    cmd_conv->add_option("--ref-level", conv_ref, "reference resolution (default 2x finest)");
    auto* cmd_cross =
        app.add_subcommand("cross-validate", "check grid prices against simulation intervals");
    for (auto* sub : {cmd_mc, cmd_pde, cmd_iv, cmd_conv, cmd_cross}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    fmm::RunConfig cfg;
    std::optional<fmm::MarketData> md;
    std::vector<fmm::SwaptionSpec> specs;
    try {
        if (config_path.empty())
            throw std::runtime_error("no configuration given (use --config or FMMPDE_CONFIG)");
        cfg = fmm::load_config(config_path);
        if (*o_a) cfg.product.a = opt_a;
        if (*o_b) cfg.product.b = opt_b;
        if (*o_strikes) {
            cfg.product.strikes.clear();
            for (const auto& t : opt_strikes)
                cfg.product.strikes.push_back(fmm::parse_strike_token(t));
        }
        if (*o_exercise) cfg.product.exercise_dates = opt_exercise;
        if (*o_paths) cfg.mc.num_paths = opt_paths;
        if (*o_steps) cfg.mc.num_steps = opt_steps;
        if (*o_seed) cfg.mc.seed = opt_seed;
        if (*o_anti) cfg.mc.antithetic = true;
        if (*o_res) cfg.pde.grid.resolution = opt_res;
        if (*o_rmax) cfg.pde.grid.r_max = opt_rmax;
        if (*o_mesh) cfg.pde.grid.uniform = (opt_mesh == "uniform");
        if (*o_stretch) cfg.pde.grid.stretch = opt_stretch;
        if (*o_dtdiv) cfg.pde.dt_divisor = opt_dtdiv;
        if (*o_theta) cfg.pde.theta = opt_theta;
        if (*o_kappa) cfg.pde.kappa = opt_kappa;
        if (*o_nu) cfg.pde.nu = opt_nu;

        md.emplace(cfg.make_market());
        specs = cfg.product.make_specs(*md);

        if (app.got_subcommand(cmd_conv) && conv_levels.size() < 2)
            throw std::runtime_error("converge: need at least two --levels");
        if (app.got_subcommand(cmd_iv) && *o_iv_price && specs.size() != 1)
            throw std::runtime_error("implied-vol --price: configure exactly one strike");
    } catch (const std::exception& e) {
        std::cerr << "fmmpde: " << e.what() << '\n';
        return 2;
    }

    try {
        if (app.got_subcommand(cmd_mc)) {
            std::vector<fmm::PriceReport> reports;
            for (const auto& spec : specs) {
                std::cerr << "[fmmpde] mc a=" << spec.a << " b=" << spec.b
                          << " strike=" << spec.strike << " paths=" << cfg.mc.num_paths << '\n';
                reports.push_back(fmm::price_report_mc(*md, spec, cfg.mc, threads));
            }
            print_reports(reports, csv);
        } else if (app.got_subcommand(cmd_pde)) {
            std::vector<fmm::PriceReport> reports;
            for (const auto& spec : specs) {
                std::cerr << "[fmmpde] pde a=" << spec.a << " b=" << spec.b
                          << " strike=" << spec.strike << '\n';
                reports.push_back(fmm::price_swaption_pde(*md, spec, cfg.pde));
            }
            print_reports(reports, csv);
        } else if (app.got_subcommand(cmd_iv)) {
            std::vector<fmm::PriceReport> reports;
            for (const auto& spec : specs) {
                fmm::PriceReport rep;
                if (*o_iv_price) {
                    rep.method = "black";
                    rep.a = spec.a;
                    rep.b = spec.b;
                    rep.strike = spec.strike;
                    rep.price = iv_price;
                    rep.implied_vol =
                        fmm::swaption_implied_vol(*md, spec.a, spec.b, spec.strike, iv_price);
                } else {
                    std::cerr << "[fmmpde] pde a=" << spec.a << " b=" << spec.b
                              << " strike=" << spec.strike << '\n';
                    rep = fmm::price_swaption_pde(*md, spec, cfg.pde);
                }
                reports.push_back(rep);
            }
            print_reports(reports, csv);
        } else if (app.got_subcommand(cmd_conv)) {
            if (conv_ref == 0) conv_ref = 2 * *std::max_element(conv_levels.begin(), conv_levels.end());
            std::cerr << "[fmmpde] convergence study, reference L=" << conv_ref << '\n';
            const auto study =
                fmm::convergence_study(*md, specs.front(), conv_levels, conv_ref, cfg.pde);
            std::cerr << "[fmmpde] reference price " << study.ref_price << '\n';
            print_convergence(study.rows, csv);
        } else if (app.got_subcommand(cmd_cross)) {
            std::vector<CrossRow> rows;
            for (const auto& spec : specs) {
                std::cerr << "[fmmpde] cross-validate a=" << spec.a << " b=" << spec.b
                          << " strike=" << spec.strike << '\n';
                CrossRow row;
                row.pde = fmm::price_swaption_pde(*md, spec, cfg.pde);
                row.mc = fmm::price_report_mc(*md, spec, cfg.mc, threads);
                row.contained = row.mc.ci->contains(row.pde.price);
                rows.push_back(row);
            }
            print_cross(rows, csv);
        }
    } catch (const std::exception& e) {
        std::cerr << "fmmpde: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
