#include "sopma/stats.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "sopma/errors.hpp"

namespace sopma::stats {

double pearson_r(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DomainError("pearson_r: length mismatch");
    if (x.size() < 3) throw DomainError("pearson_r: need at least 3 samples");
    const auto n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0 || syy == 0) throw DomainError("pearson_r: zero-variance input");
    double r = sxy / std::sqrt(sxx * syy);
    if (r > 1) r = 1;
    if (r < -1) r = -1;
    return r;
}

namespace {

double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1;
    const double qam = a - 1;
    double c = 1;
    double d = 1 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1) < kEps) break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (a <= 0 || b <= 0) throw DomainError("incomplete beta: a, b must be positive");
    if (x < 0 || x > 1) throw DomainError("incomplete beta: x outside [0,1]");
    if (x == 0) return 0;
    if (x == 1) return 1;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1) / (a + b + 2)) return front * beta_cf(a, b, x) / a;
    return 1 - front * beta_cf(b, a, 1 - x) / b;
}

double student_t_two_sided_p(double t, double dof) {
    if (dof <= 0) throw DomainError("student t: dof must be positive");
    if (!std::isfinite(t)) return 0;
    const double x = dof / (dof + t * t);
    return regularized_incomplete_beta(dof / 2, 0.5, x);
}

CorrelationP correlation_p_value(double r, int n_samples) {
    if (n_samples < 3) throw DomainError("correlation_p_value: need n >= 3");
    if (std::abs(r) > 1) throw DomainError("correlation_p_value: |r| > 1");
    if (std::abs(r) == 1) return {0.0, true};
    if (r == 0) return {1.0, false};
    const double dof = n_samples - 2;
    const double t = r * std::sqrt(dof / (1 - r * r));
    return {student_t_two_sided_p(t, dof), false};
}

}  // namespace sopma::stats
