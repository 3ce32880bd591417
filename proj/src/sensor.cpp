#include "sopma/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "sopma/csv.hpp"
#include "sopma/errors.hpp"

namespace sopma::sensor {

using json = nlohmann::ordered_json;

std::string kind_name(Kind k) {
    switch (k) {
        case Kind::SolarIrradiance: return "solar_irradiance";
        case Kind::WaterLevel: return "water_level";
        case Kind::WaterFlow: return "water_flow";
        case Kind::AirTemperature: return "air_temperature";
    }
    return "unknown";
}

namespace {

// days since 1970-01-01 (Howard Hinnant's civil calendar algorithm)
int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int64_t era = (y >= 0 ? y : y - 399) / 400;
    const int yoe = static_cast<int>(y - era * 400);
    const int doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const int doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + doe - 719468;
}

void civil_from_days(int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const int doe = static_cast<int>(z - era * 146097);
    const int yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const int mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = static_cast<int>(yoe + era * 400) + (m <= 2);
}

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

}  // namespace

int64_t parse_iso8601(const std::string& text) {
    int y, mo, d, h, mi, s;
    char sep;
    if (std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep, &h, &mi, &s) != 7 ||
        (sep != 'T' && sep != ' '))
        throw ParseError("bad ISO-8601 timestamp: '" + text + "'");
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 ||
        s > 60)
        throw ParseError("out-of-range timestamp: '" + text + "'");
    return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

std::string format_iso8601(int64_t time) {
    int y, m, d;
    civil_from_days(time >= 0 ? time / 86400 : (time - 86399) / 86400, y, m, d);
    int64_t sod = time % 86400;
    if (sod < 0) sod += 86400;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02lld:%02lld:%02lld", y, m, d,
                  static_cast<long long>(sod / 3600), static_cast<long long>(sod / 60 % 60),
                  static_cast<long long>(sod % 60));
    return buf;
}

int64_t hour_timestamp(int year, int hour_index) {
    return days_from_civil(year, 1, 1) * 86400 + static_cast<int64_t>(hour_index) * 3600;
}

SensorSeries load_sensor_csv(const std::string& path, Kind kind, const std::string& station) {
    auto table = csv::read_table(path);
    auto col = [&](const std::string& name) -> int {
        auto it = std::find(table.header.begin(), table.header.end(), name);
        return it == table.header.end() ? -1 : static_cast<int>(it - table.header.begin());
    };
    const int tcol = col("timestamp");
    const int vcol = col("value");
    const int fcol = col("flag");
    if (tcol < 0 || vcol < 0)
        throw ParseError(path + ": sensor CSV needs 'timestamp' and 'value' columns");

    SensorSeries s{kind, station.empty() ? path : station, {}};
    int64_t prev = INT64_MIN;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const int line = table.line_numbers[r];
        Sample smp;
        smp.time = parse_iso8601(table.rows[r][tcol]);
        if (smp.time <= prev)
            throw ParseError(path + ": timestamps not strictly increasing", line);
        prev = smp.time;
        smp.missing = fcol >= 0 && table.rows[r][fcol] == "M";
        if (smp.missing) {
            smp.value = 0;
        } else {
            auto v = csv::parse_double(table.rows[r][vcol]);
            if (!v) {
                smp.missing = true;
                smp.value = 0;
            } else {
                smp.value = *v;
            }
        }
        s.samples.push_back(smp);
    }
    return s;
}

CleansingRules default_rules(Kind kind) {
    switch (kind) {
        case Kind::SolarIrradiance: return {0.0, 1500.0, 1200.0};
        case Kind::WaterLevel: return {0.0, 30.0, 5.0};
        case Kind::WaterFlow: return {0.0, 500.0, 100.0};
        case Kind::AirTemperature: return {-40.0, 50.0, 15.0};
    }
    return {0.0, 0.0, 0.0};
}

CleanseResult cleanse(const SensorSeries& series, const CleansingRules& rules) {
    CleanseResult out;
    out.series.kind = series.kind;
    out.series.station = series.station;
    out.report.input_samples = series.samples.size();
    const Sample* prev = nullptr;
    for (const auto& smp : series.samples) {
        if (smp.missing) {
            ++out.report.dropped_missing;
        } else if (!std::isfinite(smp.value)) {
            ++out.report.dropped_nonfinite;
        } else if (smp.value < rules.physical_min || smp.value > rules.physical_max) {
            ++out.report.dropped_out_of_range;
        } else if (prev != nullptr && rules.spike_threshold > 0 &&
                   std::abs(smp.value - prev->value) > rules.spike_threshold) {
            ++out.report.dropped_spike;
        } else {
            out.series.samples.push_back(smp);
            prev = &out.series.samples.back();
            continue;
        }
    }
    out.report.retained = out.series.samples.size();
    out.report.dropped = out.report.input_samples - out.report.retained;
    return out;
}

SensorSeries gap_fill(const SensorSeries& series, const SensorSeries& donor, int year) {
    if (donor.kind != series.kind)
        throw DomainError("gap_fill: donor kind " + kind_name(donor.kind) +
                          " does not match series kind " + kind_name(series.kind));
    std::map<int64_t, const Sample*> donor_at;
    for (const auto& smp : donor.samples)
        if (!smp.missing) donor_at[smp.time] = &smp;

    SensorSeries out = series;
    std::vector<Sample> added;
    std::vector<std::pair<int64_t, int64_t>> unfillable;
    size_t cursor = 0;
    for (int h = 0; h < kYearHours; ++h) {
        const int64_t t0 = hour_timestamp(year, h);
        const int64_t t1 = t0 + 3600;
        bool covered = false;
        while (cursor < series.samples.size() && series.samples[cursor].time < t0) ++cursor;
        if (cursor < series.samples.size() && series.samples[cursor].time < t1 &&
            !series.samples[cursor].missing)
            covered = true;
        if (covered) continue;
        auto it = donor_at.lower_bound(t0);
        if (it == donor_at.end() || it->first >= t1) {
            if (!unfillable.empty() && unfillable.back().second == t0)
                unfillable.back().second = t1;
            else
                unfillable.emplace_back(t0, t1);
            continue;
        }
        Sample filled = *it->second;
        filled.filled = true;
        added.push_back(filled);
    }
    if (!unfillable.empty()) {
        std::string msg = "gap_fill: donor does not cover intervals:";
        for (const auto& [a, b] : unfillable) {
            msg += " [" + format_iso8601(a) + ", " + format_iso8601(b) + ")";
            if (msg.size() > 400) {
                msg += " ...";
                break;
            }
        }
        throw DataError(msg);
    }
    out.samples.insert(out.samples.end(), added.begin(), added.end());
    std::sort(out.samples.begin(), out.samples.end(),
              [](const Sample& a, const Sample& b) { return a.time < b.time; });
    return out;
}

std::vector<double> hourly_values(const SensorSeries& series, int year) {
    const int64_t start = hour_timestamp(year, 0);
    std::vector<double> sum(kYearHours, 0.0);
    std::vector<int> count(kYearHours, 0);
    for (const auto& smp : series.samples) {
        if (smp.missing) continue;
        const int64_t off = smp.time - start;
        if (off < 0) continue;
        const int64_t h = off / 3600;
        if (h >= kYearHours) continue;  // leap-day spillover and later years ignored
        sum[h] += smp.value;
        ++count[h];
    }
    std::vector<double> out(kYearHours);
    for (int h = 0; h < kYearHours; ++h) {
        if (count[h] == 0)
            throw DataError("insufficient data: no samples for hour " +
                            format_iso8601(hour_timestamp(year, h)));
        out[h] = sum[h] / count[h];
    }
    return out;
}

std::vector<double> merge_stations(const std::vector<std::vector<double>>& hourly,
                                   const std::vector<double>& weights) {
    if (hourly.empty()) throw DomainError("merge_stations: no stations");
    std::vector<double> w = weights;
    if (w.empty()) w.assign(hourly.size(), 1.0);
    if (w.size() != hourly.size()) throw DomainError("merge_stations: weight count mismatch");
    double wsum = 0;
    for (double v : w) wsum += v;
    if (wsum <= 0) throw DomainError("merge_stations: nonpositive weight sum");
    std::vector<double> out(hourly[0].size(), 0.0);
    for (size_t s = 0; s < hourly.size(); ++s) {
        if (hourly[s].size() != out.size())
            throw DomainError("merge_stations: length mismatch");
        for (size_t h = 0; h < out.size(); ++h) out[h] += w[s] * hourly[s][h];
    }
    for (auto& v : out) v /= wsum;
    return out;
}

RatingCurve::RatingCurve(std::vector<std::pair<double, double>> points)
    : points_(std::move(points)) {
    if (points_.size() < 2) throw ConfigError("rating curve needs at least 2 points");
    for (size_t i = 1; i < points_.size(); ++i) {
        if (points_[i].first <= points_[i - 1].first ||
            points_[i].second < points_[i - 1].second)
            throw ConfigError("rating curve must be strictly increasing in level and "
                              "non-decreasing in flow");
    }
}

double RatingCurve::flow(double level) const {
    if (level <= points_.front().first) return points_.front().second;
    if (level >= points_.back().first) return points_.back().second;
    for (size_t i = 1; i < points_.size(); ++i) {
        if (level <= points_[i].first) {
            const auto& [l0, q0] = points_[i - 1];
            const auto& [l1, q1] = points_[i];
            return q0 + (q1 - q0) * (level - l0) / (l1 - l0);
        }
    }
    return points_.back().second;
}

SensorSeries level_to_flow(const SensorSeries& level, const RatingCurve& curve) {
    if (level.kind != Kind::WaterLevel)
        throw DomainError("level_to_flow: input series is not a water level");
    SensorSeries out = level;
    out.kind = Kind::WaterFlow;
    for (auto& smp : out.samples)
        if (!smp.missing) smp.value = curve.flow(smp.value);
    return out;
}

namespace {

GenerationProfile finish_profile(ProfileUnit unit, std::vector<double> hourly,
                                 const std::optional<double>& target) {
    GenerationProfile p;
    p.unit = unit;
    p.hourly = std::move(hourly);
    double annual = 0;
    for (double v : p.hourly) annual += v;
    if (target) {
        if (annual <= 0) throw DataError("profile calibration: annual sum is zero");
        p.calibration_scale = *target / annual;
        for (auto& v : p.hourly) v *= p.calibration_scale;
        annual = 0;
        for (double v : p.hourly) annual += v;
    }
    p.annual_per_unit = annual;
    return p;
}

}  // namespace

GenerationProfile solar_profile(const SensorSeries& irradiance, const SolarParams& params,
                                int year) {
    if (irradiance.kind != Kind::SolarIrradiance)
        throw DomainError("solar_profile: input series is not irradiance");
    if (params.performance_ratio <= 0 || params.performance_ratio > 1)
        throw DomainError("solar_profile: performance ratio outside (0,1]");
    if (params.panel_efficiency <= 0 || params.panel_efficiency > 1)
        throw DomainError("solar_profile: panel efficiency outside (0,1]");
    auto g = hourly_values(irradiance, year);
    std::vector<double> hourly(kYearHours);
    for (int h = 0; h < kYearHours; ++h)
        hourly[h] = g[h] / 1000.0 * params.performance_ratio * params.panel_efficiency;
    return finish_profile(ProfileUnit::PerKw, std::move(hourly), params.annual_target);
}

GenerationProfile hydro_profile(const SensorSeries& flow, const HydroParams& params, int year) {
    if (flow.kind != Kind::WaterFlow)
        throw DomainError("hydro_profile: input series is not a flow");
    if (params.efficiency <= 0 || params.efficiency > 1)
        throw DomainError("hydro_profile: efficiency outside (0,1]");
    auto q = hourly_values(flow, year);
    // rho * g / 3.6e6 converts m3/s per meter of head to kWh over one hour
    constexpr double kRhoG = 1000.0 * 9.8 / 3.6e6;
    std::vector<double> hourly(kYearHours);
    for (int h = 0; h < kYearHours; ++h) {
        if (q[h] < 0)
            throw DataError("hydro_profile: negative flow at hour " + std::to_string(h) +
                            "; series was not cleansed");
        hourly[h] = kRhoG * q[h] * params.efficiency * 3600.0;
    }
    return finish_profile(ProfileUnit::PerMeterDrop, std::move(hourly), params.annual_target);
}

DemandProfile demand_profile(const SensorSeries& temperature, const DemandParams& params,
                             int year) {
    if (temperature.kind != Kind::AirTemperature)
        throw DomainError("demand_profile: input series is not a temperature");
    if (params.base_load < 0 || params.ac_coefficient < 0 || params.deadband < 0)
        throw DomainError("demand_profile: negative parameter");
    auto t = hourly_values(temperature, year);
    DemandProfile p;
    p.base_load = params.base_load;
    p.hourly.resize(kYearHours);
    double ac_total = 0;
    for (int h = 0; h < kYearHours; ++h) {
        const double ac =
            params.ac_coefficient *
            std::max(0.0, std::abs(t[h] - params.setpoint) - params.deadband);
        p.hourly[h] = params.base_load + ac;
        ac_total += ac;
    }
    if (params.annual_target) {
        const double base = (*params.annual_target - ac_total) / kYearHours;
        if (base < 0)
            throw DataError("demand calibration: annual target below the AC component");
        const double shift = base - params.base_load;
        for (auto& v : p.hourly) v += shift;
        p.base_load = base;
    }
    p.annual = 0;
    for (double v : p.hourly) p.annual += v;
    return p;
}

void write_profile_csv(const std::string& path, const std::vector<double>& hourly) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "hour,kwh\n";
    for (size_t h = 0; h < hourly.size(); ++h)
        out << h << "," << csv::format_double(hourly[h]) << "\n";
}

void write_profile_sidecar(const std::string& path, const std::string& unit,
                           double annual_per_unit, double calibration_scale) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    json doc{{"unit", unit},
             {"annual_per_unit", annual_per_unit},
             {"calibration_scale", calibration_scale}};
    out << doc.dump(2) << "\n";
}

std::vector<double> read_profile_csv(const std::string& path) {
    auto table = csv::read_table(path);
    std::vector<double> out;
    out.reserve(table.rows.size());
    for (size_t r = 0; r < table.rows.size(); ++r) {
        auto v = csv::parse_double(table.rows[r][1]);
        if (!v) throw ParseError(path + ": bad value", table.line_numbers[r]);
        out.push_back(*v);
    }
    return out;
}

}  // namespace sopma::sensor
