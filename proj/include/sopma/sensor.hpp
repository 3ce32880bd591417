#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sopma::sensor {

inline constexpr int kYearHours = 8760;

enum class Kind { SolarIrradiance, WaterLevel, WaterFlow, AirTemperature };

std::string kind_name(Kind k);

struct Sample {
    int64_t time;  // unix seconds, UTC
    double value;
    bool missing = false;  // quality flag "M" in the CSV
    bool filled = false;   // value substituted from a donor series
};

struct SensorSeries {
    Kind kind;
    std::string station;
    std::vector<Sample> samples;  // strictly increasing timestamps
};

// "YYYY-MM-DDTHH:MM:SS" -> unix seconds. Throws ParseError.
int64_t parse_iso8601(const std::string& text);
std::string format_iso8601(int64_t time);

// Unix seconds of hour h (0..8759) of the simulated non-leap year.
int64_t hour_timestamp(int year, int hour_index);

SensorSeries load_sensor_csv(const std::string& path, Kind kind,
                             const std::string& station = "");

struct CleansingRules {
    double physical_min;
    double physical_max;
    double spike_threshold;  // max |delta| between consecutive retained samples
};

CleansingRules default_rules(Kind kind);

struct CleansingReport {
    size_t input_samples = 0;
    size_t retained = 0;
    size_t dropped = 0;
    size_t filled = 0;
    size_t dropped_missing = 0;
    size_t dropped_out_of_range = 0;
    size_t dropped_spike = 0;
    size_t dropped_nonfinite = 0;
};

struct CleanseResult {
    SensorSeries series;
    CleansingReport report;
};

CleanseResult cleanse(const SensorSeries& series, const CleansingRules& rules);

// Fills every hour of the given year that is absent from `series` with the
// donor's sample at the same timestamp. Donor must already be cleansed.
SensorSeries gap_fill(const SensorSeries& series, const SensorSeries& donor, int year);

// Hour-of-year means; every hour must be covered.
std::vector<double> hourly_values(const SensorSeries& series, int year);

// Arithmetic (or weighted) mean across stations of the same kind.
std::vector<double> merge_stations(const std::vector<std::vector<double>>& hourly,
                                   const std::vector<double>& weights = {});

// Monotone piecewise-linear level -> flow table.
class RatingCurve {
public:
    explicit RatingCurve(std::vector<std::pair<double, double>> points);
    double flow(double level) const;  // clamped outside the table range
    const std::vector<std::pair<double, double>>& points() const { return points_; }

private:
    std::vector<std::pair<double, double>> points_;
};

SensorSeries level_to_flow(const SensorSeries& level, const RatingCurve& curve);

enum class ProfileUnit { PerKw, PerMeterDrop };

struct GenerationProfile {
    ProfileUnit unit;
    std::vector<double> hourly;  // kWh per unit, length 8760
    double annual_per_unit = 0;
    double calibration_scale = 1.0;
};

struct SolarParams {
    double panel_efficiency = 1.0;   // multiplier on the per-kW conversion
    double performance_ratio = 0.8;
    std::optional<double> annual_target;  // kWh/kW; sets the calibration scale
};

GenerationProfile solar_profile(const SensorSeries& irradiance, const SolarParams& params,
                                int year);

struct HydroParams {
    double efficiency = 0.6;
    std::optional<double> annual_target;  // kWh per meter of drop
};

GenerationProfile hydro_profile(const SensorSeries& flow, const HydroParams& params, int year);

struct DemandParams {
    double base_load;       // kWh/h
    double setpoint;        // degC
    double deadband = 1.0;  // degC
    double ac_coefficient;  // kWh per degree-hour
    std::optional<double> annual_target;  // kWh/yr; met by adjusting the base load
};

struct DemandProfile {
    std::vector<double> hourly;  // kWh, length 8760
    double annual = 0;
    double base_load = 0;        // after any calibration
};

DemandProfile demand_profile(const SensorSeries& temperature, const DemandParams& params,
                             int year);

void write_profile_csv(const std::string& path, const std::vector<double>& hourly);
// Sidecar with unit, annual total and calibration metadata.
void write_profile_sidecar(const std::string& path, const std::string& unit,
                           double annual_per_unit, double calibration_scale);
std::vector<double> read_profile_csv(const std::string& path);

}  // namespace sopma::sensor
