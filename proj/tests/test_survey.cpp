#include <doctest.h>

#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "sopma/errors.hpp"
#include "sopma/survey.hpp"

using namespace sopma;
using test_helpers::data_path;
using test_helpers::temp_dir;
using test_helpers::write_text;

namespace {

std::vector<survey::ItemDesc> fixture_schema() {
    return survey::load_item_schema(data_path("items.json"));
}

survey::SurveyMatrix make_matrix(const std::vector<std::string>& ids,
                                 const std::vector<std::vector<double>>& columns) {
    survey::SurveyMatrix m;
    for (const auto& id : ids) m.items.push_back({id, "", "Other"});
    m.raw_max.assign(ids.size(), 1.0);
    const size_t n = columns.at(0).size();
    m.rows.assign(n, std::vector<double>(ids.size()));
    for (size_t j = 0; j < ids.size(); ++j)
        for (size_t i = 0; i < n; ++i) m.rows[i][j] = columns[j][i];
    return m;
}

// x with an exact target correlation against y: r*yhat + sqrt(1-r^2)*zhat
// where zhat is z orthogonalized against y and both are standardized.
std::vector<double> planted_vector(const std::vector<double>& y, const std::vector<double>& z,
                                   double r) {
    const size_t n = y.size();
    auto center = [&](std::vector<double> v) {
        double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
        for (auto& e : v) e -= m;
        return v;
    };
    auto yc = center(y), zc = center(z);
    double yy = 0, zy = 0;
    for (size_t i = 0; i < n; ++i) {
        yy += yc[i] * yc[i];
        zy += zc[i] * yc[i];
    }
    std::vector<double> zo(n);
    double zz = 0;
    for (size_t i = 0; i < n; ++i) {
        zo[i] = zc[i] - zy / yy * yc[i];
        zz += zo[i] * zo[i];
    }
    std::vector<double> x(n);
    for (size_t i = 0; i < n; ++i)
        x[i] = r * yc[i] / std::sqrt(yy) + std::sqrt(1 - r * r) * zo[i] / std::sqrt(zz) + 10.0;
    return x;
}

}  // namespace

TEST_CASE("load_survey applies complete-case deletion to the fixture") {
    auto res = survey::load_survey(data_path("survey.csv"), fixture_schema());
    CHECK(res.matrix.n_respondents() == 421);
    CHECK(res.dropped_rows == 62);
    CHECK(res.matrix.items.size() == 9);
}

TEST_CASE("load_survey edge cases") {
    auto dir = temp_dir("survey_load");
    std::vector<survey::ItemDesc> schema{{"a", "", "Other"}, {"b", "", "Other"}};

    write_text(dir + "/complete.csv", "a,b\n1,2\n3,4\n");
    auto res = survey::load_survey(dir + "/complete.csv", schema);
    CHECK(res.dropped_rows == 0);
    CHECK(res.matrix.n_respondents() == 2);

    write_text(dir + "/allmiss.csv", "a,b\n1,\n3,\n");
    CHECK_THROWS_AS(survey::load_survey(dir + "/allmiss.csv", schema), DataError);

    write_text(dir + "/badnum.csv", "a,b\n1,x\n");
    CHECK_THROWS_AS(survey::load_survey(dir + "/badnum.csv", schema), ParseError);

    write_text(dir + "/badhdr.csv", "a,c\n1,2\n");
    CHECK_THROWS_AS(survey::load_survey(dir + "/badhdr.csv", schema), ParseError);
}

TEST_CASE("normalize_items divides by the per-item maximum") {
    auto m = make_matrix({"a"}, {{1, 3, 5}});
    auto norm = survey::normalize_items(m);
    CHECK(norm.rows[0][0] == doctest::Approx(0.2));
    CHECK(norm.rows[1][0] == doctest::Approx(0.6));
    CHECK(norm.rows[2][0] == doctest::Approx(1.0));
    CHECK(norm.raw_max[0] == doctest::Approx(5.0));

    auto already = make_matrix({"a"}, {{0.25, 1.0, 0.5}});
    auto same = survey::normalize_items(already);
    for (size_t i = 0; i < 3; ++i) CHECK(same.rows[i][0] == already.rows[i][0]);

    auto constant = make_matrix({"a"}, {{4, 4, 4}});
    auto c = survey::normalize_items(constant);
    for (size_t i = 0; i < 3; ++i) CHECK(c.rows[i][0] == doctest::Approx(1.0));

    auto zero = make_matrix({"a"}, {{0, 0, 0}});
    CHECK_THROWS_WITH_AS(survey::normalize_items(zero),
                         doctest::Contains("degenerate item 'a'"), DataError);
}

TEST_CASE("extract_explanatory screens and sorts") {
    test_helpers::Rng rng(11);
    std::vector<double> y, z1, z2, z3;
    for (int i = 0; i < 200; ++i) {
        y.push_back(rng.uniform());
        z1.push_back(rng.uniform());
        z2.push_back(rng.uniform());
        z3.push_back(rng.uniform());
    }
    auto m = make_matrix({"resp", "p1", "p2", "p3"},
                         {y, planted_vector(y, z1, 0.4), planted_vector(y, z2, 0.05),
                          planted_vector(y, z3, -0.3)});
    auto report = survey::extract_explanatory(m, "resp", 0.1, 0.05);
    REQUIRE(report.entries.size() == 3);
    CHECK(report.selected_ids() == std::vector<std::string>{"p1"});
    // sorted by descending r
    CHECK(report.entries[0].id == "p1");
    CHECK(report.entries[0].r == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(report.entries[2].id == "p3");
    CHECK(report.entries[2].r == doctest::Approx(-0.3).epsilon(1e-9));
}

TEST_CASE("extract_explanatory is invariant to item ordering") {
    auto m1 = make_matrix({"resp", "a", "b"},
                          {{1, 2, 3, 4, 6}, {1.1, 2, 3.2, 4, 5.5}, {4, 2, 5, 1, 3}});
    auto m2 = make_matrix({"b", "resp", "a"},
                          {{4, 2, 5, 1, 3}, {1, 2, 3, 4, 6}, {1.1, 2, 3.2, 4, 5.5}});
    auto r1 = survey::extract_explanatory(m1, "resp");
    auto r2 = survey::extract_explanatory(m2, "resp");
    REQUIRE(r1.entries.size() == r2.entries.size());
    for (size_t i = 0; i < r1.entries.size(); ++i) {
        CHECK(r1.entries[i].id == r2.entries[i].id);
        CHECK(r1.entries[i].r == doctest::Approx(r2.entries[i].r).epsilon(1e-12));
    }
}

TEST_CASE("extract_explanatory marks items at the thresholds") {
    test_helpers::Rng rng(13);
    std::vector<double> y, z;
    for (int i = 0; i < 400; ++i) {
        y.push_back(rng.uniform());
        z.push_back(rng.uniform());
    }
    // r = 0.09 fails r_min even though p would pass at this n
    auto m = make_matrix({"resp", "weak", "same"}, {y, planted_vector(y, z, 0.09), y});
    auto report = survey::extract_explanatory(m, "resp", 0.1, 0.05);
    for (const auto& e : report.entries) {
        if (e.id == "weak") CHECK(!e.selected);
        if (e.id == "same") {
            CHECK(e.selected);
            CHECK(e.r == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("extract_explanatory reports zero-variance items as unscorable") {
    auto m = make_matrix({"resp", "flat"}, {{1, 2, 3, 4}, {2, 2, 2, 2}});
    auto report = survey::extract_explanatory(m, "resp");
    REQUIRE(report.entries.size() == 1);
    CHECK(!report.entries[0].scorable);
    CHECK(!report.entries[0].selected);
}

TEST_CASE("fit_ols recovers a noiseless model exactly") {
    test_helpers::Rng rng(17);
    std::vector<double> x1, x2, y;
    for (int i = 0; i < 50; ++i) {
        x1.push_back(rng.uniform());
        x2.push_back(rng.uniform());
        y.push_back(0.5 + 2.0 * x1.back() - x2.back());
    }
    auto m = make_matrix({"y", "x1", "x2"}, {y, x1, x2});
    auto model = survey::fit_ols(m, "y", {"x1", "x2"});
    CHECK(model.intercept == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(model.coefficients[0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(model.coefficients[1] == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(model.r_squared == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("fit_ols residual identities") {
    test_helpers::Rng rng(19);
    std::vector<double> x1, x2, y;
    for (int i = 0; i < 80; ++i) {
        x1.push_back(rng.uniform());
        x2.push_back(rng.uniform());
        y.push_back(0.3 + 0.7 * x1.back() - 0.2 * x2.back() + 0.1 * rng.normal());
    }
    auto m = make_matrix({"y", "x1", "x2"}, {y, x1, x2});
    auto model = survey::fit_ols(m, "y", {"x1", "x2"});

    // residuals orthogonal to the constant and to each design column
    double sum = 0, dot1 = 0, dot2 = 0, sse = 0, sst = 0;
    const double ymean = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
    for (size_t i = 0; i < y.size(); ++i) {
        sum += model.residuals[i];
        dot1 += model.residuals[i] * x1[i];
        dot2 += model.residuals[i] * x2[i];
        sse += model.residuals[i] * model.residuals[i];
        sst += (y[i] - ymean) * (y[i] - ymean);
    }
    CHECK(std::abs(sum) < 1e-9);
    CHECK(std::abs(dot1) < 1e-9);
    CHECK(std::abs(dot2) < 1e-9);
    CHECK(model.r_squared == doctest::Approx(1.0 - sse / sst).epsilon(1e-9));
    CHECK(model.standard_errors.size() == 3);
    CHECK(model.p_values.size() == 3);
}

TEST_CASE("fit_ols reports collinearity and insufficient rows") {
    auto m = make_matrix({"y", "x1", "x2"},
                         {{1, 2, 3, 4, 5}, {1, 2, 3, 4, 5.5}, {2, 4, 6, 8, 11}});
    CHECK_THROWS_WITH_AS(survey::fit_ols(m, "y", {"x1", "x2"}),
                         doctest::Contains("rank-deficient"), DataError);
    auto tiny = make_matrix({"y", "x1"}, {{1, 2}, {3, 4}});
    CHECK_THROWS_AS(survey::fit_ols(tiny, "y", {"x1"}), DomainError);
}

namespace {

survey::RegressionModel reference_model() {
    survey::RegressionModel m;
    m.intercept = 0.12842;
    m.variable_ids = {"x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8"};
    m.coefficients = {0.394934, 0.158204,   0.107405,  -0.0259796,
                      0.00361494, -0.00477173, 0.0484335, 0.252739};
    m.standard_errors.assign(9, 0.05);
    m.t_stats.assign(9, 0.0);
    m.p_values.assign(9, 1.0);
    m.n = 421;
    m.r_squared = 0.37;
    return m;
}

}  // namespace

TEST_CASE("predict on the reference coefficient table") {
    auto m = reference_model();
    CHECK(survey::predict(m, {0, 0, 0, 0, 0, 0, 0, 0}) == doctest::Approx(0.12842));
    CHECK(survey::predict(m, {1, 0, 0, 0, 0, 0, 0, 0}) ==
          doctest::Approx(0.523354).epsilon(1e-9));
    // direct arithmetic over the coefficient column
    CHECK(survey::predict(m, {1, 1, 1, 1, 1, 1, 1, 1}) ==
          doctest::Approx(1.06299911).epsilon(1e-8));
    CHECK_THROWS_AS(survey::predict(m, {1, 2, 3}), DomainError);
}

TEST_CASE("predict is linear") {
    auto m = reference_model();
    test_helpers::Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x, z, combo;
        const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
        for (int i = 0; i < 8; ++i) {
            x.push_back(rng.uniform());
            z.push_back(rng.uniform());
            combo.push_back(a * x.back() + b * z.back());
        }
        const double lhs = survey::predict(m, combo);
        const double rhs = a * survey::predict(m, x) + b * survey::predict(m, z) +
                           (1 - a - b) * m.intercept;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("model JSON round trip") {
    auto m = reference_model();
    auto text = survey::model_to_json(m);
    auto back = survey::model_from_json(text);
    CHECK(back.intercept == m.intercept);
    CHECK(back.variable_ids == m.variable_ids);
    CHECK(back.coefficients == m.coefficients);
    CHECK(back.n == m.n);
    CHECK(back.r_squared == m.r_squared);
}
