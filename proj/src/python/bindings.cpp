#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sopma/config.hpp"
#include "sopma/coupling.hpp"
#include "sopma/mabs.hpp"
#include "sopma/pipeline.hpp"
#include "sopma/sensor.hpp"
#include "sopma/stats.hpp"
#include "sopma/survey.hpp"
#include "sopma/sweep.hpp"

namespace py = pybind11;
using namespace sopma;

namespace {

py::dict model_dict(const survey::RegressionModel& m) {
    py::dict d;
    d["intercept"] = m.intercept;
    d["variable_ids"] = m.variable_ids;
    d["coefficients"] = m.coefficients;
    d["standard_errors"] = m.standard_errors;
    d["p_values"] = m.p_values;
    d["r_squared"] = m.r_squared;
    d["n"] = m.n;
    return d;
}

py::dict indices_dict(const mabs::PolicyIndices& idx) {
    py::dict d;
    d["cost"] = idx.cost_p;
    d["utilization"] = idx.utilization_u;
    d["circulation"] = idx.circulation_d;
    d["grid_purchase"] = idx.grid_purchase;
    d["annual_pv_kwh"] = idx.annual_pv_kwh;
    d["annual_hydro_kwh"] = idx.annual_hydro_kwh;
    d["curtailed_kwh"] = idx.curtailed_kwh;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Community energy policy toolkit: survey regression, sensor "
              "profiles, dispatch simulation, policy sweep and selection.";

    m.def(
        "pearson_r",
        [](const std::vector<double>& x, const std::vector<double>& y) {
            return stats::pearson_r(x, y);
        },
        py::arg("x"), py::arg("y"), "Pearson correlation of two equal-length samples.");
    m.def(
        "correlation_p_value",
        [](double r, size_t n) { return stats::correlation_p_value(r, n).p; },
        py::arg("r"), py::arg("n"),
        "Two-sided p-value of a sample correlation under the null of no "
        "association.");

    m.def(
        "fit_survey",
        [](const std::string& survey_csv, const std::string& items_json,
           const std::string& response, double r_min, double p_max) {
            auto schema = survey::load_item_schema(items_json);
            auto loaded = survey::load_survey(survey_csv, schema);
            auto matrix = survey::normalize_items(loaded.matrix);
            auto report = survey::extract_explanatory(matrix, response, r_min, p_max);
            auto model = survey::fit_ols(matrix, response, report.selected_ids());
            py::dict d = model_dict(model);
            d["n_respondents"] = matrix.n_respondents();
            d["dropped_rows"] = loaded.dropped_rows;
            return d;
        },
        py::arg("survey_csv"), py::arg("items_json"), py::arg("response") = "wb",
        py::arg("r_min") = 0.1, py::arg("p_max") = 0.05,
        "Screen survey items by correlation and fit the OLS model.");

    m.def(
        "simulate_policy",
        [](double pv_kw, double hydro_m, double battery_kwh,
           const std::vector<double>& pv_per_kw, const std::vector<double>& hydro_per_m,
           const std::vector<double>& demand, const std::string& config_path) {
            auto cfg = config::RunConfig::from_file(config_path);
            auto idx = mabs::simulate_year({pv_kw, hydro_m, battery_kwh, 0}, pv_per_kw,
                                           hydro_per_m, demand, cfg.agents);
            return indices_dict(idx);
        },
        py::arg("pv_kw"), py::arg("hydro_m"), py::arg("battery_kwh"), py::arg("pv_per_kw"),
        py::arg("hydro_per_m"), py::arg("demand"), py::arg("config_path"),
        "Simulate one year of hourly dispatch for a single policy.");

    m.def(
        "cost_modifier", &coupling::cost_modifier, py::arg("p"), py::arg("p0"),
        py::arg("s_elec") = 0.037);
    m.def("renewable_modifier", &coupling::renewable_modifier, py::arg("u"), py::arg("u0"));
    m.def("circulation_modifier", &coupling::circulation_modifier, py::arg("d"),
          py::arg("d0"));

    m.def(
        "run_pipeline",
        [](const std::string& config_path, const std::string& out_dir, int workers) {
            auto cfg = config::RunConfig::from_file(config_path);
            if (!out_dir.empty()) cfg.paths.out_dir = out_dir;
            if (workers > 0) cfg.workers = workers;
            pipeline::run(cfg);
            return cfg.paths.out_dir;
        },
        py::arg("config_path"), py::arg("out_dir") = "", py::arg("workers") = 0,
        "Run every pipeline stage and return the output directory.");

    m.def(
        "validate_config",
        [](const std::string& config_path) {
            auto cfg = config::RunConfig::from_file(config_path);
            py::list out;
            for (const auto& d : cfg.validate(true)) {
                py::dict e;
                e["key"] = d.key;
                e["message"] = d.message;
                out.append(e);
            }
            return out;
        },
        py::arg("config_path"), "List configuration violations; empty means valid.");

    py::register_exception<Error>(m, "ToolkitError");
}
