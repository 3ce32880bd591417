#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "sopma/errors.hpp"
#include "sopma/stats.hpp"

using namespace sopma;

TEST_CASE("pearson r on perfectly correlated data") {
    std::vector<double> x{1, 2, 3, 4, 5};
    CHECK(stats::pearson_r(x, x) == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<double> y;
    for (double v : x) y.push_back(-v + 7.0);
    CHECK(stats::pearson_r(x, y) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("pearson r matches the hand-computed oracle") {
    // sums computed independently from the defining formula
    std::vector<double> x{1, 2, 3, 4};
    std::vector<double> y{1, 2, 3, 100};
    CHECK(stats::pearson_r(x, y) == doctest::Approx(0.7850264209630101).epsilon(1e-12));
}

TEST_CASE("pearson r symmetry and affine invariance") {
    test_helpers::Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x, y;
        for (int i = 0; i < 20; ++i) {
            x.push_back(rng.uniform());
            y.push_back(rng.uniform());
        }
        const double r = stats::pearson_r(x, y);
        CHECK(stats::pearson_r(y, x) == doctest::Approx(r).epsilon(1e-12));
        std::vector<double> xs;
        const double a = rng.uniform(0.1, 5.0), b = rng.uniform(-3, 3);
        for (double v : x) xs.push_back(a * v + b);
        CHECK(stats::pearson_r(xs, y) == doctest::Approx(r).epsilon(1e-12));
        CHECK(std::abs(r) <= 1.0);
    }
}

TEST_CASE("pearson r rejects bad input") {
    std::vector<double> c{2, 2, 2, 2};
    std::vector<double> x{1, 2, 3, 4};
    CHECK_THROWS_AS(stats::pearson_r(c, x), DomainError);
    CHECK_THROWS_AS(stats::pearson_r(std::vector<double>{1, 2}, std::vector<double>{1, 2}),
                    DomainError);
    CHECK_THROWS_AS(stats::pearson_r(x, std::vector<double>{1, 2, 3}), DomainError);
}

namespace {

struct PCase {
    double r;
    int n;
    double p;  // frozen from a numeric-integration oracle of the t density
};

// n = 4 cases have the closed form p = 1 - |r| on 2 degrees of freedom
const PCase kOracle[] = {
    {0.0, 4, 1.0},      {0.1, 4, 0.9},
    {0.5, 4, 0.5},      {0.9, 4, 0.1},
    {-0.5, 4, 0.5},     {-0.9, 4, 0.1},
    {0.0, 30, 1.0},     {0.1, 30, 0.599048021781},
    {0.5, 30, 0.00489993366707},
    {0.9, 30, 1.31660607003e-11},
    {-0.1, 30, 0.599048021781},
    {-0.5, 30, 0.00489993366707},
    {-0.9, 30, 1.31660607003e-11},
    {0.0, 421, 1.0},    {0.1, 421, 0.0402794894316},
    {0.5, 421, 5.17483930206e-28},
    {0.9, 421, 3.42748503413e-153},
    {-0.1, 421, 0.0402794894316},
    {-0.5, 421, 5.17483930206e-28},
    {-0.9, 421, 3.42748503413e-153},
};

}  // namespace

TEST_CASE("correlation p-value matches the numeric-integration oracle") {
    for (const auto& c : kOracle) {
        const double p = stats::correlation_p_value(c.r, c.n).p;
        const double err = std::abs(p - c.p);
        const bool ok = err <= 1e-6 || err <= 1e-6 * c.p;
        CHECK_MESSAGE(ok, "r=", c.r, " n=", c.n, " p=", p, " expected ", c.p);
    }
}

TEST_CASE("correlation p-value edge behavior") {
    CHECK(stats::correlation_p_value(0.0, 421).p == 1.0);
    auto exact = stats::correlation_p_value(1.0, 10);
    CHECK(exact.p == 0.0);
    CHECK(exact.exact);
    exact = stats::correlation_p_value(-1.0, 10);
    CHECK(exact.p == 0.0);
    CHECK(exact.exact);
    CHECK_THROWS_AS(stats::correlation_p_value(0.5, 2), DomainError);

    // monotone decreasing in |r| for fixed n
    double prev = 1.1;
    for (double r = 0.0; r < 0.999; r += 0.037) {
        const double p = stats::correlation_p_value(r, 50).p;
        CHECK(p < prev + 1e-15);
        prev = p;
    }
}

TEST_CASE("regularized incomplete beta endpoints and symmetry") {
    CHECK(stats::regularized_incomplete_beta(2, 3, 0) == 0.0);
    CHECK(stats::regularized_incomplete_beta(2, 3, 1) == 1.0);
    // I_x(a,b) = 1 - I_{1-x}(b,a)
    for (double x : {0.1, 0.35, 0.5, 0.8}) {
        const double lhs = stats::regularized_incomplete_beta(2.5, 4.0, x);
        const double rhs = 1 - stats::regularized_incomplete_beta(4.0, 2.5, 1 - x);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
    // I_x(1,1) = x
    CHECK(stats::regularized_incomplete_beta(1, 1, 0.42) ==
          doctest::Approx(0.42).epsilon(1e-12));
    CHECK_THROWS_AS(stats::regularized_incomplete_beta(-1, 1, 0.5), DomainError);
    CHECK_THROWS_AS(stats::regularized_incomplete_beta(1, 1, 1.5), DomainError);
}
