#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "sopma/errors.hpp"
#include "sopma/sensor.hpp"

using namespace sopma;
using sensor::Kind;
using sensor::kYearHours;

namespace {

constexpr int kYear = 2021;

sensor::SensorSeries hourly_series(Kind kind, double value) {
    sensor::SensorSeries s{kind, "test", {}};
    for (int h = 0; h < kYearHours; ++h)
        s.samples.push_back({sensor::hour_timestamp(kYear, h), value});
    return s;
}

}  // namespace

TEST_CASE("iso8601 parse and format round trip") {
    const std::string text = "2021-06-15T13:45:00";
    CHECK(sensor::format_iso8601(sensor::parse_iso8601(text)) == text);
    CHECK(sensor::parse_iso8601("2021-01-01T01:00:00") -
              sensor::parse_iso8601("2021-01-01T00:00:00") ==
          3600);
    CHECK_THROWS_AS(sensor::parse_iso8601("yesterday"), ParseError);
    CHECK_THROWS_AS(sensor::parse_iso8601("2021-13-01T00:00:00"), ParseError);
}

TEST_CASE("cleanse drops out-of-range and missing samples") {
    auto s = hourly_series(Kind::SolarIrradiance, 400.0);
    s.samples[10].value = -5.0;      // below physical minimum
    s.samples[20].missing = true;
    auto res = sensor::cleanse(s, sensor::default_rules(Kind::SolarIrradiance));
    CHECK(res.report.input_samples == kYearHours);
    CHECK(res.report.dropped_out_of_range == 1);
    CHECK(res.report.dropped_missing == 1);
    CHECK(res.report.retained == kYearHours - 2);
    CHECK(res.report.dropped + res.report.retained == res.report.input_samples);
}

TEST_CASE("cleanse leaves clean series untouched and is idempotent") {
    auto s = hourly_series(Kind::AirTemperature, 21.0);
    const auto rules = sensor::default_rules(Kind::AirTemperature);
    auto once = sensor::cleanse(s, rules);
    CHECK(once.report.dropped == 0);
    CHECK(once.series.samples.size() == s.samples.size());
    auto twice = sensor::cleanse(once.series, rules);
    CHECK(twice.report.dropped == 0);
    CHECK(twice.series.samples.size() == once.series.samples.size());
}

TEST_CASE("cleanse drop count equals the injection count") {
    test_helpers::Rng rng(31);
    auto s = hourly_series(Kind::SolarIrradiance, 300.0);
    std::set<int> injected;
    while (injected.size() < kYearHours / 10) {
        const int h = static_cast<int>(rng.next() % kYearHours);
        if (injected.insert(h).second) s.samples[h].value = -10.0 - rng.uniform(0, 100);
    }
    auto res = sensor::cleanse(s, sensor::default_rules(Kind::SolarIrradiance));
    CHECK(res.report.dropped == injected.size());
    CHECK(res.report.dropped_out_of_range == injected.size());
}

TEST_CASE("gap_fill fills only the missing hours") {
    auto s = hourly_series(Kind::SolarIrradiance, 250.0);
    auto donor = hourly_series(Kind::SolarIrradiance, 412.0);

    auto untouched = sensor::gap_fill(s, donor, kYear);
    CHECK(untouched.samples.size() == s.samples.size());
    for (size_t i = 0; i < s.samples.size(); ++i) {
        CHECK(untouched.samples[i].value == s.samples[i].value);
        CHECK(!untouched.samples[i].filled);
    }

    auto gappy = s;
    gappy.samples.erase(gappy.samples.begin() + 100);
    auto filled = sensor::gap_fill(gappy, donor, kYear);
    REQUIRE(filled.samples.size() == kYearHours);
    CHECK(filled.samples[100].value == 412.0);
    CHECK(filled.samples[100].filled);
    CHECK(!filled.samples[99].filled);
}

TEST_CASE("gap_fill annual sum matches independent recomputation") {
    auto s = hourly_series(Kind::SolarIrradiance, 100.0);
    auto donor = hourly_series(Kind::SolarIrradiance, 700.0);
    // remove a full day
    s.samples.erase(s.samples.begin() + 48, s.samples.begin() + 72);
    auto filled = sensor::gap_fill(s, donor, kYear);
    double total = 0;
    for (const auto& smp : filled.samples) total += smp.value;
    CHECK(total == doctest::Approx((kYearHours - 24) * 100.0 + 24 * 700.0).epsilon(1e-12));
}

TEST_CASE("gap_fill reports unfillable intervals") {
    auto s = hourly_series(Kind::SolarIrradiance, 100.0);
    s.samples.erase(s.samples.begin() + 5, s.samples.begin() + 8);
    auto donor = hourly_series(Kind::SolarIrradiance, 1.0);
    donor.samples.erase(donor.samples.begin() + 6);
    CHECK_THROWS_WITH_AS(sensor::gap_fill(s, donor, kYear), doctest::Contains("does not cover"),
                         DataError);
    auto wrong_kind = hourly_series(Kind::AirTemperature, 1.0);
    CHECK_THROWS_AS(sensor::gap_fill(s, wrong_kind, kYear), DomainError);
}

TEST_CASE("irradiance fixture cleanses and gap-fills to full coverage") {
    auto raw = sensor::load_sensor_csv(test_helpers::data_path("irradiance_s1.csv"),
                                       Kind::SolarIrradiance, "s1");
    CHECK(raw.samples.size() == kYearHours);
    auto res = sensor::cleanse(raw, sensor::default_rules(Kind::SolarIrradiance));
    CHECK(res.report.dropped_out_of_range == 90);
    CHECK(res.report.dropped_missing == 90);
    auto donor_raw = sensor::load_sensor_csv(test_helpers::data_path("irradiance_donor.csv"),
                                             Kind::SolarIrradiance, "donor");
    auto donor = sensor::cleanse(donor_raw, sensor::default_rules(Kind::SolarIrradiance));
    auto filled = sensor::gap_fill(res.series, donor.series, kYear);
    CHECK(filled.samples.size() == kYearHours);
    size_t filled_count = 0;
    for (const auto& smp : filled.samples) filled_count += smp.filled ? 1 : 0;
    CHECK(filled_count == 180);
    CHECK_NOTHROW(sensor::hourly_values(filled, kYear));
}

TEST_CASE("solar profile under the standard test condition") {
    auto s = hourly_series(Kind::SolarIrradiance, 1000.0);
    auto p = sensor::solar_profile(s, {1.0, 1.0, {}}, kYear);
    REQUIRE(p.hourly.size() == kYearHours);
    for (int h = 0; h < kYearHours; h += 97) CHECK(p.hourly[h] == doctest::Approx(1.0));
    CHECK(p.annual_per_unit == doctest::Approx(8760.0).epsilon(1e-9));
}

TEST_CASE("solar profile of zero irradiance is all zero") {
    auto s = hourly_series(Kind::SolarIrradiance, 0.0);
    auto p = sensor::solar_profile(s, {1.0, 0.8, {}}, kYear);
    for (double v : p.hourly) CHECK(v == 0.0);
    CHECK(p.annual_per_unit == 0.0);
}

TEST_CASE("solar profile calibration hits the annual target") {
    auto s = hourly_series(Kind::SolarIrradiance, 321.0);
    auto p = sensor::solar_profile(s, {1.0, 0.8, 1051.453}, kYear);
    CHECK(p.annual_per_unit == doctest::Approx(1051.453).epsilon(1e-9));
    double sum = 0;
    for (double v : p.hourly) sum += v;
    CHECK(sum == doctest::Approx(p.annual_per_unit).epsilon(1e-6));
}

TEST_CASE("solar profile rejects incomplete coverage and bad params") {
    auto s = hourly_series(Kind::SolarIrradiance, 100.0);
    s.samples.resize(4000);
    CHECK_THROWS_WITH_AS(sensor::solar_profile(s, {1.0, 0.8, {}}, kYear),
                         doctest::Contains("insufficient data"), DataError);
    auto full = hourly_series(Kind::SolarIrradiance, 100.0);
    CHECK_THROWS_AS(sensor::solar_profile(full, {1.0, 1.5, {}}, kYear), DomainError);
}

TEST_CASE("hydro profile per-meter energy matches hand arithmetic") {
    const double q = 1.7;
    auto s = hourly_series(Kind::WaterFlow, q);
    auto p = sensor::hydro_profile(s, {1.0, {}}, kYear);
    const double expected = 9.8 * q * 1000.0 / 3.6e6 * 3600.0;  // kWh per meter per hour
    for (int h = 0; h < kYearHours; h += 131)
        CHECK(p.hourly[h] == doctest::Approx(expected).epsilon(1e-12));

    auto zero = hourly_series(Kind::WaterFlow, 0.0);
    auto pz = sensor::hydro_profile(zero, {0.6, {}}, kYear);
    CHECK(pz.annual_per_unit == 0.0);
}

TEST_CASE("hydro profile rejects negative flow") {
    auto s = hourly_series(Kind::WaterFlow, 1.0);
    s.samples[7].value = -0.5;
    CHECK_THROWS_WITH_AS(sensor::hydro_profile(s, {0.6, {}}, kYear),
                         doctest::Contains("not cleansed"), DataError);
}

TEST_CASE("rating curve interpolates monotonically and clamps") {
    sensor::RatingCurve curve({{0.0, 0.0}, {1.0, 2.0}, {2.0, 8.0}});
    CHECK(curve.flow(0.5) == doctest::Approx(1.0));
    CHECK(curve.flow(1.5) == doctest::Approx(5.0));
    CHECK(curve.flow(-1.0) == 0.0);
    CHECK(curve.flow(9.0) == 8.0);
    CHECK_THROWS_AS(sensor::RatingCurve({{0.0, 0.0}}), ConfigError);
    CHECK_THROWS_AS(sensor::RatingCurve({{0.0, 1.0}, {1.0, 0.5}}), ConfigError);

    auto level = hourly_series(Kind::WaterLevel, 0.5);
    auto flow = sensor::level_to_flow(level, curve);
    CHECK(flow.kind == Kind::WaterFlow);
    CHECK(flow.samples[0].value == doctest::Approx(1.0));
}

TEST_CASE("demand profile forms") {
    auto t = hourly_series(Kind::AirTemperature, 24.0);
    auto p = sensor::demand_profile(t, {5.0, 24.0, 1.0, 0.5, {}}, kYear);
    for (int h = 0; h < kYearHours; h += 211) CHECK(p.hourly[h] == doctest::Approx(5.0));
    CHECK(p.annual == doctest::Approx(5.0 * kYearHours).epsilon(1e-9));

    auto hot = hourly_series(Kind::AirTemperature, 33.0);
    auto flat = sensor::demand_profile(hot, {5.0, 24.0, 1.0, 0.0, {}}, kYear);
    for (int h = 0; h < kYearHours; h += 211) CHECK(flat.hourly[h] == doctest::Approx(5.0));

    auto ac = sensor::demand_profile(hot, {5.0, 24.0, 1.0, 0.5, {}}, kYear);
    CHECK(ac.hourly[0] == doctest::Approx(5.0 + 0.5 * (9.0 - 1.0)));
}

TEST_CASE("demand calibration adjusts the base load to the annual target") {
    auto t = hourly_series(Kind::AirTemperature, 30.0);
    const double target = 200000.0;
    auto p = sensor::demand_profile(t, {5.0, 24.0, 1.0, 0.5, target}, kYear);
    CHECK(p.annual == doctest::Approx(target).epsilon(1e-9));
    for (double v : p.hourly) CHECK(v >= 0.0);
}

TEST_CASE("merge_stations averages aligned hourly vectors") {
    std::vector<double> a(kYearHours, 2.0), b(kYearHours, 4.0);
    auto m = sensor::merge_stations({a, b});
    CHECK(m[0] == doctest::Approx(3.0));
    auto w = sensor::merge_stations({a, b}, {3.0, 1.0});
    CHECK(w[0] == doctest::Approx(2.5));
    CHECK_THROWS_AS(sensor::merge_stations({}), DomainError);
}

TEST_CASE("profile CSV round trip") {
    auto dir = test_helpers::temp_dir("profile_csv");
    std::vector<double> hourly(kYearHours);
    test_helpers::Rng rng(37);
    for (auto& v : hourly) v = rng.uniform();
    sensor::write_profile_csv(dir + "/p.csv", hourly);
    auto back = sensor::read_profile_csv(dir + "/p.csv");
    REQUIRE(back.size() == hourly.size());
    for (int h = 0; h < kYearHours; h += 503) CHECK(back[h] == hourly[h]);
}
