#pragma once

#include <map>
#include <string>
#include <vector>

#include "sopma/coupling.hpp"
#include "sopma/mabs.hpp"
#include "sopma/sensor.hpp"
#include "sopma/sweep.hpp"

namespace sopma::config {

// Flat dotted-key = value text format; '#' starts a comment.
class KeyValueFile {
public:
    static KeyValueFile parse_file(const std::string& path);
    static KeyValueFile parse_text(const std::string& text, const std::string& origin = "<text>");

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
    std::string origin_;
};

struct Diagnostic {
    std::string key;
    std::string message;
};

struct Paths {
    std::string survey;
    std::string item_schema;
    std::string irradiance;
    std::string irradiance_donor;
    std::string water_level;
    std::string water_level_donor;
    std::string temperature;
    std::string out_dir = "out";
};

struct RunConfig {
    Paths paths;
    std::string response_item = "wb";
    double r_min = 0.1;
    double p_max = 0.05;

    int year = 2021;
    sensor::SolarParams solar;
    sensor::HydroParams hydro;
    sensor::RatingCurve rating_curve{{{0.0, 0.0}, {1.0, 1.0}}};
    sensor::DemandParams demand{0, 24.0, 1.0, 0, {}};

    mabs::AgentConfig agents;
    sweep::SweepGrid grid;

    double s_elec = 0.037;
    std::vector<std::string> value_types{"A", "B", "C"};
    double mean_default = 0.5;

    int workers = 1;
    unsigned long seed = 42;

    // path prefix applied to relative data paths (the config file's directory)
    std::string base_dir;

    static RunConfig from_file(const std::string& path);
    static RunConfig from_kv(const KeyValueFile& kv, const std::string& base_dir);

    // every violation listed with its dotted key; empty means valid
    std::vector<Diagnostic> validate(bool check_paths = true) const;
};

sensor::RatingCurve parse_rating_curve(const std::string& text);

}  // namespace sopma::config
