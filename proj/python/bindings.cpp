#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "regrowth/config.hpp"
#include "regrowth/euler.hpp"
#include "regrowth/io.hpp"
#include "regrowth/stationary.hpp"

namespace py = pybind11;
using namespace regrowth;

namespace {

py::dict solution_dict(const Solution& s) {
    py::dict d;
    d["x"] = s.value.grid.nodes();
    d["value"] = s.value.values;
    d["policy"] = s.policy.values;
    d["iterations"] = s.report.iterations;
    d["converged"] = s.report.converged;
    d["sup_w_deltas"] = s.report.sup_w_deltas;
    return d;
}

GriddedFunction field(const RunConfig& config, const Eigen::MatrixXd& values) {
    GriddedFunction f(config.grid(), static_cast<std::size_t>(values.cols()));
    if (values.rows() != static_cast<Eigen::Index>(f.grid.count())) {
        throw Error(ErrorCode::DomainError, "array rows must match the income grid");
    }
    f.values = values;
    return f;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Risk-sensitive regime-switching growth model";
    m.attr("__version__") = version();

    py::register_exception<Error>(m, "RegrowthError");

    py::class_<RunConfig>(m, "Config")
        .def(py::init<>())
        .def_static("parse", [](const std::string& text) { return parse_config(text, "<string>"); },
                    py::arg("text"))
        .def_static("load", &load_config, py::arg("path"))
        .def("text", &canonical_text)
        .def("hash", &config_hash)
        .def("validate", &RunConfig::validate)
        .def_property_readonly("grid", [](const RunConfig& c) { return c.grid().nodes(); });

    m.def("check", [](const RunConfig& c) {
        const AssumptionReport a = check_assumptions(c.model_spec());
        py::dict d;
        d["d"] = a.d;
        d["x_bar"] = a.x_bar;
        d["alpha"] = a.alpha;
        d["alpha_beta"] = a.alpha_beta;
        d["lambda2"] = a.lambda2;
        d["kappa2"] = a.kappa2;
        d["growth_holds"] = a.f2_holds();
        d["d1_holds"] = a.d1_holds();
        d["d2_holds"] = a.d2_holds();
        d["irreducible"] = a.d3_irreducible;
        d["minimal_r"] = minimal_weight_offset(c.model_spec());
        return d;
    }, py::arg("config"));

    m.def("stationary_distribution", [](const Eigen::MatrixXd& p) { return stationary_distribution(RegimeChain(p)); },
          py::arg("transition"));

    m.def("solve", [](const RunConfig& c, bool baseline) {
        const ModelSpec spec = baseline ? c.baseline_spec() : c.model_spec();
        py::gil_scoped_release release;
        Solution s = solve_value_function(spec, c.grid(), c.search(), c.rule(), c.stop());
        py::gil_scoped_acquire acquire;
        return solution_dict(s);
    }, py::arg("config"), py::arg("baseline") = false,
          "Value iteration. Returns x nodes, value and policy arrays (node x regime) and the sweep report.");

    m.def("euler_residuals", [](const RunConfig& c, const Eigen::MatrixXd& value, const Eigen::MatrixXd& policy) {
        const auto rows = euler_profile(field(c, value), field(c, policy), c.model_spec(), c.numerics.y_count,
                                        c.rule());
        std::vector<double> x, rel;
        std::vector<std::size_t> regime;
        for (const auto& r : rows) {
            x.push_back(r.x);
            regime.push_back(r.theta + 1);
            rel.push_back(r.relative);
        }
        py::dict d;
        d["x"] = x;
        d["regime"] = regime;
        d["relative"] = rel;
        d["median"] = median_relative_residual(rows);
        return d;
    }, py::arg("config"), py::arg("value"), py::arg("policy"));

    m.def("simulate", [](const RunConfig& c, const Eigen::MatrixXd& policy) {
        const SimulationPath path = simulate_chain(field(c, policy), c.model_spec(), c.simulation_config());
        std::vector<std::size_t> regime(path.theta.begin(), path.theta.end());
        for (auto& r : regime) ++r;
        py::dict d;
        d["x"] = path.x;
        d["regime"] = regime;
        return d;
    }, py::arg("config"), py::arg("policy"), "Simulated incomes and 1-based regimes.");

    m.def("drift", [](const RunConfig& c, const Eigen::MatrixXd& value, const Eigen::MatrixXd& policy) {
        const DriftReport r = drift_check(field(c, value), field(c, policy), c.model_spec(), c.numerics.y_count,
                                          c.rule());
        py::dict d;
        d["satisfied"] = r.satisfied;
        d["lambda_hat"] = r.lambda_hat;
        d["kappa_hat"] = r.kappa_hat;
        d["worst_x"] = r.worst_x;
        d["worst_regime"] = r.worst_theta + 1;
        return d;
    }, py::arg("config"), py::arg("value"), py::arg("policy"));

    m.def("certainty_equivalent",
          [](const std::vector<double>& outcomes, const std::vector<double>& p_row, const std::vector<double>& z,
             const std::vector<double>& weights, double gamma) {
              return certainty_equivalent(outcomes, p_row, QuadNodes{z, weights}, gamma);
          },
          py::arg("outcomes"), py::arg("p_row"), py::arg("z"), py::arg("weights"), py::arg("gamma"),
          "Outcomes are regime-major: outcomes[r * len(z) + i].");
}
