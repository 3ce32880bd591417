#include "sopma/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sopma/coupling.hpp"
#include "sopma/csv.hpp"
#include "sopma/errors.hpp"
#include "sopma/sensor.hpp"
#include "sopma/survey.hpp"

namespace sopma::pipeline {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot hash missing file: " + path);
    uint64_t h = 14695981039346656037ull;
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return out;
}

namespace {

std::string out_path(const config::RunConfig& cfg, const std::string& name) {
    return (fs::path(cfg.paths.out_dir) / name).string();
}

void ensure_out_dir(const config::RunConfig& cfg) {
    fs::create_directories(cfg.paths.out_dir);
}

void require_artifact(const config::RunConfig& cfg, const std::string& name,
                      const std::string& producer) {
    if (!fs::exists(out_path(cfg, name)))
        throw DependencyError("missing artifact '" + name + "'; run the '" + producer +
                              "' stage first");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

survey::SurveyMatrix load_normalized_survey(const config::RunConfig& cfg, size_t* dropped) {
    auto schema = survey::load_item_schema(cfg.paths.item_schema);
    auto loaded = survey::load_survey(cfg.paths.survey, schema);
    if (dropped) *dropped = loaded.dropped_rows;
    return survey::normalize_items(loaded.matrix);
}

sensor::SensorSeries ingest_series(const std::string& path, sensor::Kind kind,
                                   const std::string& donor_path, int year,
                                   sensor::CleansingReport* report) {
    auto raw = sensor::load_sensor_csv(path, kind);
    auto cleansed = sensor::cleanse(raw, sensor::default_rules(kind));
    if (report) *report = cleansed.report;
    if (donor_path.empty()) return cleansed.series;
    auto donor_raw = sensor::load_sensor_csv(donor_path, kind);
    auto donor = sensor::cleanse(donor_raw, sensor::default_rules(kind));
    auto filled = sensor::gap_fill(cleansed.series, donor.series, year);
    if (report) {
        size_t n_filled = 0;
        for (const auto& s : filled.samples) n_filled += s.filled ? 1 : 0;
        report->filled = n_filled;
    }
    return filled;
}

json cleansing_report_json(const sensor::CleansingReport& r) {
    return {{"input_samples", r.input_samples},
            {"retained", r.retained},
            {"dropped", r.dropped},
            {"filled", r.filled},
            {"dropped_missing", r.dropped_missing},
            {"dropped_out_of_range", r.dropped_out_of_range},
            {"dropped_spike", r.dropped_spike},
            {"dropped_nonfinite", r.dropped_nonfinite}};
}

struct LoadedProfiles {
    std::vector<double> pv;
    std::vector<double> hydro;
    std::vector<double> demand;
};

LoadedProfiles load_profiles(const config::RunConfig& cfg) {
    require_artifact(cfg, "solar_profile.csv", "ingest");
    require_artifact(cfg, "hydro_profile.csv", "ingest");
    require_artifact(cfg, "demand_profile.csv", "ingest");
    return {sensor::read_profile_csv(out_path(cfg, "solar_profile.csv")),
            sensor::read_profile_csv(out_path(cfg, "hydro_profile.csv")),
            sensor::read_profile_csv(out_path(cfg, "demand_profile.csv"))};
}

coupling::Baseline load_baseline(const config::RunConfig& cfg) {
    require_artifact(cfg, "baseline.json", "simulate");
    json doc = json::parse(read_file(out_path(cfg, "baseline.json")));
    return {doc.at("p0").get<double>(), doc.at("u0").get<double>(),
            doc.at("d0").get<double>()};
}

template <typename Fn>
void run_stage(const std::string& name, Fn&& fn) {
    try {
        fn();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

}  // namespace

void stage_survey_fit(const config::RunConfig& cfg) {
    run_stage("survey-fit", [&] {
        ensure_out_dir(cfg);
        size_t dropped = 0;
        auto matrix = load_normalized_survey(cfg, &dropped);
        auto report =
            survey::extract_explanatory(matrix, cfg.response_item, cfg.r_min, cfg.p_max);
        auto model = survey::fit_ols(matrix, cfg.response_item, report.selected_ids());

        json corr = json::parse(survey::correlation_report_to_json(report));
        corr["dropped_rows"] = dropped;
        corr["n_respondents"] = matrix.n_respondents();
        write_file(out_path(cfg, "correlation_report.json"), corr.dump(2) + "\n");
        write_file(out_path(cfg, "model.json"), survey::model_to_json(model));

        auto means = coupling::means_from_survey(matrix, model.variable_ids);
        json mj;
        mj["source"] = means.source;
        json vals = json::array();
        for (size_t i = 0; i < means.ids.size(); ++i)
            vals.push_back({{"id", means.ids[i]},
                            {"mean", means.values[i]},
                            {"anchored", static_cast<bool>(means.anchored[i])}});
        mj["means"] = std::move(vals);
        write_file(out_path(cfg, "means.json"), mj.dump(2) + "\n");
    });
}

void stage_ingest(const config::RunConfig& cfg) {
    run_stage("ingest", [&] {
        ensure_out_dir(cfg);
        json reports;

        sensor::CleansingReport irr_rep;
        auto irradiance =
            ingest_series(cfg.paths.irradiance, sensor::Kind::SolarIrradiance,
                          cfg.paths.irradiance_donor, cfg.year, &irr_rep);
        reports["irradiance"] = cleansing_report_json(irr_rep);
        auto solar = sensor::solar_profile(irradiance, cfg.solar, cfg.year);
        sensor::write_profile_csv(out_path(cfg, "solar_profile.csv"), solar.hourly);
        sensor::write_profile_sidecar(out_path(cfg, "solar_profile.json"), "kWh_per_kW",
                                      solar.annual_per_unit, solar.calibration_scale);

        sensor::CleansingReport lvl_rep;
        auto level = ingest_series(cfg.paths.water_level, sensor::Kind::WaterLevel,
                                   cfg.paths.water_level_donor, cfg.year, &lvl_rep);
        reports["water_level"] = cleansing_report_json(lvl_rep);
        auto flow = sensor::level_to_flow(level, cfg.rating_curve);
        auto hydro = sensor::hydro_profile(flow, cfg.hydro, cfg.year);
        sensor::write_profile_csv(out_path(cfg, "hydro_profile.csv"), hydro.hourly);
        sensor::write_profile_sidecar(out_path(cfg, "hydro_profile.json"),
                                      "kWh_per_m_drop", hydro.annual_per_unit,
                                      hydro.calibration_scale);

        sensor::CleansingReport tmp_rep;
        auto temperature = ingest_series(cfg.paths.temperature, sensor::Kind::AirTemperature,
                                         "", cfg.year, &tmp_rep);
        reports["temperature"] = cleansing_report_json(tmp_rep);
        auto demand = sensor::demand_profile(temperature, cfg.demand, cfg.year);
        sensor::write_profile_csv(out_path(cfg, "demand_profile.csv"), demand.hourly);
        sensor::write_profile_sidecar(out_path(cfg, "demand_profile.json"), "kWh",
                                      demand.annual, 1.0);

        write_file(out_path(cfg, "cleansing_report.json"), reports.dump(2) + "\n");
    });
}

void stage_simulate(const config::RunConfig& cfg) {
    run_stage("simulate", [&] {
        ensure_out_dir(cfg);
        auto profiles = load_profiles(cfg);
        mabs::PolicyParams zero{0, 0, 0, 0};
        auto now = mabs::simulate_year(zero, profiles.pv, profiles.hydro, profiles.demand,
                                       cfg.agents);
        json doc;
        doc["p0"] = now.cost_p;
        doc["u0"] = now.utilization_u;
        doc["d0"] = now.circulation_d;
        doc["grid_purchase"] = now.grid_purchase;
        write_file(out_path(cfg, "baseline.json"), doc.dump(2) + "\n");
    });
}

void stage_sweep(const config::RunConfig& cfg) {
    run_stage("sweep", [&] {
        ensure_out_dir(cfg);
        auto profiles = load_profiles(cfg);
        auto grid = sweep::generate_grid(cfg.grid);
        auto set = sweep::evaluate_all(grid, profiles.pv, profiles.hydro, profiles.demand,
                                       cfg.agents, cfg.workers);
        auto ternary = sweep::ternary_coords(set);
        sweep::write_candidates_csv(out_path(cfg, "candidates.csv"), set, ternary);
        sweep::write_ternary_svg(out_path(cfg, "ternary.svg"), ternary);
    });
}

void stage_couple(const config::RunConfig& cfg) {
    run_stage("couple", [&] {
        ensure_out_dir(cfg);
        require_artifact(cfg, "model.json", "survey-fit");
        require_artifact(cfg, "means.json", "survey-fit");
        require_artifact(cfg, "candidates.csv", "sweep");
        auto model = survey::model_from_json(read_file(out_path(cfg, "model.json")));
        auto baseline = load_baseline(cfg);
        auto set = sweep::read_candidates_csv(out_path(cfg, "candidates.csv"));

        coupling::MeanVector means;
        {
            json doc = json::parse(read_file(out_path(cfg, "means.json")));
            means.source = doc.value("source", "survey");
            for (const auto& e : doc.at("means")) {
                means.ids.push_back(e.at("id").get<std::string>());
                means.values.push_back(e.at("mean").get<double>());
                means.anchored.push_back(e.value("anchored", true));
            }
        }
        if (means.ids != model.variable_ids)
            throw DependencyError("means.json does not match model.json variables");

        auto presets = coupling::builtin_presets(model.variable_ids, cfg.s_elec);
        for (const auto& type_name : cfg.value_types) {
            auto it = std::find_if(presets.begin(), presets.end(),
                                   [&](const auto& p) { return p.name == type_name; });
            if (it == presets.end())
                throw ConfigError("unknown value type '" + type_name + "'");
            auto result = coupling::select_optimal(set, model, means, *it, baseline);
            write_file(out_path(cfg, "selection_" + type_name + ".json"),
                       coupling::result_to_json(result, baseline));
        }
    });
}

void stage_report(const config::RunConfig& cfg) {
    run_stage("report", [&] {
        ensure_out_dir(cfg);
        require_artifact(cfg, "candidates.csv", "sweep");
        auto set = sweep::read_candidates_csv(out_path(cfg, "candidates.csv"));
        auto ternary = sweep::ternary_coords(set);
        std::vector<long> highlight;
        for (const auto& type_name : cfg.value_types) {
            const auto sel = out_path(cfg, "selection_" + type_name + ".json");
            if (fs::exists(sel)) {
                json doc = json::parse(read_file(sel));
                highlight.push_back(doc.at("k_opt").get<long>());
            }
        }
        sweep::write_ternary_svg(out_path(cfg, "ternary.svg"), ternary, highlight);
    });
}

void write_manifest(const std::string& out_dir, bool complete, const std::string& error) {
    json doc;
    doc["complete"] = complete;
    if (!error.empty()) doc["error"] = error;
    json files;
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(out_dir)) {
        if (!entry.is_regular_file()) continue;
        const auto name = entry.path().filename().string();
        if (name == "manifest.json") continue;
        names.push_back(name);
    }
    std::sort(names.begin(), names.end());
    for (const auto& name : names)
        files[name] = file_hash((fs::path(out_dir) / name).string());
    doc["files"] = std::move(files);
    write_file((fs::path(out_dir) / "manifest.json").string(), doc.dump(2) + "\n");
}

void run(const config::RunConfig& cfg) {
    ensure_out_dir(cfg);
    try {
        stage_survey_fit(cfg);
        stage_ingest(cfg);
        stage_simulate(cfg);
        stage_sweep(cfg);
        stage_couple(cfg);
        stage_report(cfg);
    } catch (const StageError& e) {
        write_manifest(cfg.paths.out_dir, false, e.what());
        throw;
    }
    write_manifest(cfg.paths.out_dir, true);
}

}  // namespace sopma::pipeline
