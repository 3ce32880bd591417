#include "sopma/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sopma/csv.hpp"
#include "sopma/errors.hpp"

namespace sopma::config {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

}  // namespace

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path);
}

KeyValueFile KeyValueFile::parse_text(const std::string& text, const std::string& origin) {
    KeyValueFile kv;
    kv.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(origin + ": expected 'key = value'", lineno);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(origin + ": empty key", lineno);
        kv.entries_[key] = value;
    }
    return kv;
}

bool KeyValueFile::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string KeyValueFile::get_string(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError(origin_ + ": missing key '" + key + "'");
    return it->second;
}

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

double KeyValueFile::get_double(const std::string& key) const {
    auto v = csv::parse_double(get_string(key));
    if (!v) throw ConfigError(origin_ + ": key '" + key + "' is not numeric");
    return *v;
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return get_double(key);
}

long KeyValueFile::get_long(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    return static_cast<long>(get_double(key));
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get_string(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(origin_ + ": key '" + key + "' is not a boolean");
}

sensor::RatingCurve parse_rating_curve(const std::string& text) {
    std::vector<std::pair<double, double>> pts;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        auto colon = item.find(':');
        if (colon == std::string::npos)
            throw ConfigError("rating curve entry '" + item + "' is not 'level:flow'");
        auto l = csv::parse_double(trim(item.substr(0, colon)));
        auto q = csv::parse_double(trim(item.substr(colon + 1)));
        if (!l || !q) throw ConfigError("rating curve entry '" + item + "' is not numeric");
        pts.emplace_back(*l, *q);
    }
    return sensor::RatingCurve(pts);
}

RunConfig RunConfig::from_file(const std::string& path) {
    auto kv = KeyValueFile::parse_file(path);
    return from_kv(kv, fs::path(path).parent_path().string());
}

RunConfig RunConfig::from_kv(const KeyValueFile& kv, const std::string& base_dir) {
    RunConfig c;
    c.base_dir = base_dir;
    auto path = [&](const std::string& key) -> std::string {
        std::string p = kv.get_string(key, "");
        if (p.empty() || base_dir.empty() || fs::path(p).is_absolute()) return p;
        return (fs::path(base_dir) / p).string();
    };
    c.paths.survey = path("paths.survey");
    c.paths.item_schema = path("paths.item_schema");
    c.paths.irradiance = path("paths.irradiance");
    c.paths.irradiance_donor = path("paths.irradiance_donor");
    c.paths.water_level = path("paths.water_level");
    c.paths.water_level_donor = path("paths.water_level_donor");
    c.paths.temperature = path("paths.temperature");
    c.paths.out_dir = kv.get_string("paths.out_dir", "out");

    c.response_item = kv.get_string("survey.response_item", "wb");
    c.r_min = kv.get_double("survey.r_min", 0.1);
    c.p_max = kv.get_double("survey.p_max", 0.05);

    c.year = static_cast<int>(kv.get_long("ingest.year", 2021));
    c.solar.performance_ratio = kv.get_double("ingest.solar.performance_ratio", 0.8);
    c.solar.panel_efficiency = kv.get_double("ingest.solar.panel_efficiency", 1.0);
    if (kv.has("ingest.solar.annual_target_per_kw"))
        c.solar.annual_target = kv.get_double("ingest.solar.annual_target_per_kw");
    c.hydro.efficiency = kv.get_double("ingest.hydro.efficiency", 0.6);
    if (kv.has("ingest.hydro.annual_target_per_m"))
        c.hydro.annual_target = kv.get_double("ingest.hydro.annual_target_per_m");
    if (kv.has("ingest.rating_curve"))
        c.rating_curve = parse_rating_curve(kv.get_string("ingest.rating_curve"));

    c.demand.base_load = kv.get_double("demand.base_load", 0.0);
    c.demand.setpoint = kv.get_double("demand.setpoint", 24.0);
    c.demand.deadband = kv.get_double("demand.deadband", 1.0);
    c.demand.ac_coefficient = kv.get_double("demand.ac_coefficient", 0.0);
    if (kv.has("demand.annual_target"))
        c.demand.annual_target = kv.get_double("demand.annual_target");

    c.agents.pv_unit_cost = kv.get_double("agents.pv.unit_cost", 0.0);
    c.agents.pv_service_life = kv.get_double("agents.pv.service_life", 1.0);
    c.agents.pv_local = kv.get_bool("agents.pv.local", true);
    c.agents.hydro_unit_cost = kv.get_double("agents.hydro.unit_cost", 0.0);
    c.agents.hydro_service_life = kv.get_double("agents.hydro.service_life", 1.0);
    c.agents.hydro_local = kv.get_bool("agents.hydro.local", true);
    c.agents.battery_unit_cost = kv.get_double("agents.battery.unit_cost", 0.0);
    c.agents.battery_service_life = kv.get_double("agents.battery.service_life", 1.0);
    c.agents.battery_local = kv.get_bool("agents.battery.local", true);
    c.agents.battery_efficiency = kv.get_double("agents.battery.efficiency", 0.9);
    c.agents.grid_tariff = kv.get_double("agents.grid.tariff", 0.0);
    c.agents.consignment_charge = kv.get_double("agents.consignment.charge", 0.0);
    c.agents.consignment_applies_to_local =
        kv.get_bool("agents.consignment.applies_to_local", true);
    c.agents.consignment_local = kv.get_bool("agents.consignment.local", true);

    auto axis = [&](const std::string& name) {
        sweep::AxisSpec a;
        a.min = kv.get_double("sweep." + name + ".min", 0.0);
        a.max = kv.get_double("sweep." + name + ".max", 0.0);
        a.step = kv.get_double("sweep." + name + ".step", 1.0);
        return a;
    };
    c.grid.pv = axis("pv");
    c.grid.hydro = axis("hydro");
    c.grid.battery = axis("battery");
    c.grid.max_candidates = kv.get_long("sweep.max_candidates", 1'000'000);

    c.s_elec = kv.get_double("coupling.s_elec", 0.037);
    c.mean_default = kv.get_double("coupling.mean_default", 0.5);
    c.value_types.clear();
    {
        std::istringstream in(kv.get_string("coupling.types", "A,B,C"));
        std::string t;
        while (std::getline(in, t, ',')) {
            t = trim(t);
            if (!t.empty()) c.value_types.push_back(t);
        }
    }

    c.workers = static_cast<int>(kv.get_long("run.workers", 1));
    c.seed = static_cast<unsigned long>(kv.get_long("run.seed", 42));
    return c;
}

std::vector<Diagnostic> RunConfig::validate(bool check_paths) const {
    std::vector<Diagnostic> diags;
    auto bad = [&](const std::string& key, const std::string& msg) {
        diags.push_back({key, msg});
    };
    if (check_paths) {
        auto need = [&](const std::string& key, const std::string& p) {
            if (p.empty())
                bad(key, "path is required");
            else if (!fs::exists(p))
                bad(key, "path does not exist: " + p);
        };
        need("paths.survey", paths.survey);
        need("paths.item_schema", paths.item_schema);
        need("paths.irradiance", paths.irradiance);
        need("paths.water_level", paths.water_level);
        need("paths.temperature", paths.temperature);
    }
    if (r_min < -1 || r_min > 1) bad("survey.r_min", "must lie in [-1,1]");
    if (p_max <= 0 || p_max > 1) bad("survey.p_max", "must lie in (0,1]");
    if (solar.performance_ratio <= 0 || solar.performance_ratio > 1)
        bad("ingest.solar.performance_ratio", "must lie in (0,1]");
    if (solar.panel_efficiency <= 0 || solar.panel_efficiency > 1)
        bad("ingest.solar.panel_efficiency", "must lie in (0,1]");
    if (hydro.efficiency <= 0 || hydro.efficiency > 1)
        bad("ingest.hydro.efficiency", "must lie in (0,1]");
    if (demand.base_load < 0) bad("demand.base_load", "must be nonnegative");
    if (demand.ac_coefficient < 0) bad("demand.ac_coefficient", "must be nonnegative");
    if (demand.deadband < 0) bad("demand.deadband", "must be nonnegative");
    if (agents.grid_tariff < 0) bad("agents.grid.tariff", "must be nonnegative");
    if (agents.battery_efficiency <= 0 || agents.battery_efficiency > 1)
        bad("agents.battery.efficiency", "must lie in (0,1]");
    if (agents.pv_service_life <= 0) bad("agents.pv.service_life", "must be positive");
    if (agents.hydro_service_life <= 0) bad("agents.hydro.service_life", "must be positive");
    if (agents.battery_service_life <= 0)
        bad("agents.battery.service_life", "must be positive");
    auto check_axis = [&](const std::string& name, const sweep::AxisSpec& a) {
        if (a.step <= 0) bad("sweep." + name + ".step", "must be positive");
        if (a.max < a.min) bad("sweep." + name + ".max", "must be >= min");
        if (a.min < 0) bad("sweep." + name + ".min", "must be nonnegative");
    };
    check_axis("pv", grid.pv);
    check_axis("hydro", grid.hydro);
    check_axis("battery", grid.battery);
    if (grid.max_candidates < 1) bad("sweep.max_candidates", "must be positive");
    if (s_elec <= 0 || s_elec >= 1) bad("coupling.s_elec", "must lie in (0,1)");
    if (mean_default < 0 || mean_default > 1) bad("coupling.mean_default", "must lie in [0,1]");
    if (value_types.empty()) bad("coupling.types", "at least one value type required");
    if (workers < 1) bad("run.workers", "must be at least 1");
    return diags;
}

}  // namespace sopma::config
