#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <sstream>
#include <vector>

#include "fmm/analytics.hpp"

namespace py = pybind11;

namespace {

fmm::TenorStructure make_tenor(const std::vector<double>& maturities) {
    std::vector<double> dates;
    dates.reserve(maturities.size() + 1);
    dates.push_back(0.0);
    dates.insert(dates.end(), maturities.begin(), maturities.end());
    return fmm::TenorStructure(std::move(dates));
}

fmm::MarketData make_market_flat(const std::vector<double>& maturities,
                                 std::vector<double> forwards, const std::vector<double>& vols,
                                 double correlation) {
    const std::size_t n = forwards.size();
    std::vector<fmm::VolCurve> curves;
    curves.reserve(vols.size());
    for (double s : vols) curves.emplace_back(s);
    return fmm::MarketData(make_tenor(maturities), std::move(forwards), std::move(curves),
                           fmm::MarketData::flat_correlation(n, correlation));
}

fmm::MarketData make_market_matrix(const std::vector<double>& maturities,
                                   std::vector<double> forwards, const std::vector<double>& vols,
                                   const std::vector<std::vector<double>>& correlation) {
    std::vector<fmm::VolCurve> curves;
    curves.reserve(vols.size());
    for (double s : vols) curves.emplace_back(s);
    std::vector<double> flat;
    flat.reserve(correlation.size() * correlation.size());
    for (const auto& row : correlation)
        flat.insert(flat.end(), row.begin(), row.end());
    return fmm::MarketData(make_tenor(maturities), std::move(forwards), std::move(curves),
                           std::move(flat));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Swaption pricing on backward-looking rates: Monte Carlo simulation and a "
              "directionally split finite-difference solver";

    py::class_<fmm::MarketData>(m, "MarketData")
        .def_property_readonly("num_rates", &fmm::MarketData::num_rates)
        .def("forward", &fmm::MarketData::forward, py::arg("k"))
        .def("rho", &fmm::MarketData::rho, py::arg("k"), py::arg("l"))
        .def("sigma", &fmm::MarketData::sigma, py::arg("k"), py::arg("t"))
        .def("__repr__", [](const fmm::MarketData& md) {
            std::ostringstream os;
            os << "<MarketData " << md.num_rates() << " rates, horizon " << md.tenor.horizon()
               << ">";
            return os.str();
        });

    py::class_<fmm::SwaptionSpec>(m, "SwaptionSpec")
        .def(py::init<std::size_t, std::size_t, double, std::vector<std::size_t>>(), py::arg("a"),
             py::arg("b"), py::arg("strike"), py::arg("exercise_dates") = std::vector<std::size_t>{})
        .def_readwrite("a", &fmm::SwaptionSpec::a)
        .def_readwrite("b", &fmm::SwaptionSpec::b)
        .def_readwrite("strike", &fmm::SwaptionSpec::strike)
        .def_readwrite("exercise_dates", &fmm::SwaptionSpec::exercise_dates)
        .def("european", &fmm::SwaptionSpec::european)
        .def("__repr__", [](const fmm::SwaptionSpec& s) {
            std::ostringstream os;
            os << "<SwaptionSpec a=" << s.a << " b=" << s.b << " strike=" << s.strike
               << (s.european() ? "" : " multi-exercise") << ">";
            return os.str();
        });

    py::class_<fmm::MCConfig>(m, "MCConfig")
        .def(py::init([](std::size_t paths, std::size_t steps, std::uint64_t seed,
                         bool antithetic) {
                 fmm::MCConfig c;
                 c.num_paths = paths;
                 c.num_steps = steps;
                 c.seed = seed;
                 c.antithetic = antithetic;
                 return c;
             }),
             py::arg("paths") = 100000, py::arg("steps") = 100, py::arg("seed") = 1,
             py::arg("antithetic") = false)
        .def_readwrite("num_paths", &fmm::MCConfig::num_paths)
        .def_readwrite("num_steps", &fmm::MCConfig::num_steps)
        .def_readwrite("seed", &fmm::MCConfig::seed)
        .def_readwrite("antithetic", &fmm::MCConfig::antithetic);

    py::class_<fmm::GridConfig>(m, "GridConfig")
        .def(py::init<>())
        .def_readwrite("resolution", &fmm::GridConfig::resolution)
        .def_readwrite("r_max", &fmm::GridConfig::r_max)
        .def_readwrite("uniform", &fmm::GridConfig::uniform)
        .def_readwrite("stretch", &fmm::GridConfig::stretch);

    py::class_<fmm::PdeConfig>(m, "PdeConfig")
        .def(py::init([](std::vector<std::size_t> resolution, std::vector<double> r_max,
                         bool uniform, double stretch, double dt_divisor, double theta,
                         double kappa, double nu) {
                 fmm::PdeConfig c;
                 c.grid.resolution = std::move(resolution);
                 c.grid.r_max = std::move(r_max);
                 c.grid.uniform = uniform;
                 c.grid.stretch = stretch;
                 c.dt_divisor = dt_divisor;
                 c.theta = theta;
                 c.kappa = kappa;
                 c.nu = nu;
                 return c;
             }),
             py::arg("resolution"), py::arg("r_max") = std::vector<double>{},
             py::arg("uniform") = false, py::arg("stretch") = 0.0, py::arg("dt_divisor") = 0.0,
             py::arg("theta") = 0.5, py::arg("kappa") = 1.0, py::arg("nu") = 0.0)
        .def_readwrite("grid", &fmm::PdeConfig::grid)
        .def_readwrite("dt_divisor", &fmm::PdeConfig::dt_divisor)
        .def_readwrite("theta", &fmm::PdeConfig::theta)
        .def_readwrite("kappa", &fmm::PdeConfig::kappa)
        .def_readwrite("nu", &fmm::PdeConfig::nu);

    py::class_<fmm::CIEstimate>(m, "CIEstimate")
        .def_readonly("mean", &fmm::CIEstimate::mean)
        .def_readonly("std_error", &fmm::CIEstimate::std_error)
        .def_readonly("half_width", &fmm::CIEstimate::half_width)
        .def_readonly("num_paths", &fmm::CIEstimate::num_paths)
        .def("lower", &fmm::CIEstimate::lower)
        .def("upper", &fmm::CIEstimate::upper)
        .def("contains", &fmm::CIEstimate::contains, py::arg("x"))
        .def("__repr__", [](const fmm::CIEstimate& ci) {
            std::ostringstream os;
            os << "<CIEstimate " << ci.mean << " +- " << ci.half_width << ">";
            return os.str();
        });

    py::class_<fmm::PriceReport>(m, "PriceReport")
        .def_readonly("method", &fmm::PriceReport::method)
        .def_readonly("a", &fmm::PriceReport::a)
        .def_readonly("b", &fmm::PriceReport::b)
        .def_readonly("strike", &fmm::PriceReport::strike)
        .def_readonly("price", &fmm::PriceReport::price)
        .def_readonly("implied_vol", &fmm::PriceReport::implied_vol)
        .def_readonly("ci", &fmm::PriceReport::ci)
        .def_readonly("runtime_sec", &fmm::PriceReport::runtime_sec)
        .def("__repr__", [](const fmm::PriceReport& r) {
            std::ostringstream os;
            os << "<PriceReport " << r.method << " a=" << r.a << " b=" << r.b
               << " strike=" << r.strike << " price=" << r.price << ">";
            return os.str();
        });

    py::class_<fmm::ConvergenceRow>(m, "ConvergenceRow")
        .def_readonly("level", &fmm::ConvergenceRow::level)
        .def_readonly("price", &fmm::ConvergenceRow::price)
        .def_readonly("l2_error", &fmm::ConvergenceRow::l2_error)
        .def_readonly("linf_error", &fmm::ConvergenceRow::linf_error)
        .def_readonly("l2_order", &fmm::ConvergenceRow::l2_order)
        .def_readonly("linf_order", &fmm::ConvergenceRow::linf_order)
        .def_readonly("runtime_sec", &fmm::ConvergenceRow::runtime_sec);

    py::class_<fmm::ConvergenceStudy>(m, "ConvergenceStudy")
        .def_readonly("rows", &fmm::ConvergenceStudy::rows)
        .def_readonly("ref_price", &fmm::ConvergenceStudy::ref_price)
        .def_readonly("ref_runtime_sec", &fmm::ConvergenceStudy::ref_runtime_sec);

    m.def("make_market", &make_market_flat, py::arg("maturities"), py::arg("forwards"),
          py::arg("vols"), py::arg("correlation") = 0.0,
          "Market description with flat volatilities and a flat correlation");
    m.def("make_market", &make_market_matrix, py::arg("maturities"), py::arg("forwards"),
          py::arg("vols"), py::arg("correlation"),
          "Market description with flat volatilities and a full correlation matrix");

    m.def("atm_strike", &fmm::atm_strike, py::arg("market"), py::arg("a"), py::arg("b"),
          "Par swap rate: the strike that makes the underlying swap worthless");
    m.def("annuity", &fmm::annuity, py::arg("market"), py::arg("a"), py::arg("b"));
    m.def("initial_discount", &fmm::initial_discount, py::arg("market"), py::arg("j"));
    m.def("default_r_max", &fmm::default_r_max, py::arg("market"), py::arg("a"), py::arg("b"));
    m.def("implied_vol", &fmm::swaption_implied_vol, py::arg("market"), py::arg("a"), py::arg("b"),
          py::arg("strike"), py::arg("price"),
          "Black volatility reproducing a European swaption price");

    m.def("price_mc", &fmm::price_report_mc, py::arg("market"), py::arg("spec"),
          py::arg("config") = fmm::MCConfig{}, py::arg("threads") = 0,
          py::call_guard<py::gil_scoped_release>(),
          "European swaption price by simulation, with a 95% confidence interval");
    m.def("price_pde", &fmm::price_swaption_pde, py::arg("market"), py::arg("spec"),
          py::arg("config"), py::call_guard<py::gil_scoped_release>(),
          "Swaption price from the backward finite-difference solve");
    m.def("convergence_study", &fmm::convergence_study, py::arg("market"), py::arg("spec"),
          py::arg("levels"), py::arg("ref_level"), py::arg("config"),
          py::call_guard<py::gil_scoped_release>(),
          "Mesh refinement study against a nested reference level");
}
