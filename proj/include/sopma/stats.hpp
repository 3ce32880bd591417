#pragma once

#include <span>

namespace sopma::stats {

// Pearson product-moment correlation. Requires equal lengths >= 3 and
// nonzero variance in both arguments.
double pearson_r(std::span<const double> x, std::span<const double> y);

// Regularized incomplete beta function I_x(a, b), continued fraction
// (modified Lentz) with the symmetry transform for convergence.
double regularized_incomplete_beta(double a, double b, double x);

// Two-sided tail probability of Student's t with `dof` degrees of freedom.
double student_t_two_sided_p(double t, double dof);

struct CorrelationP {
    double p;
    bool exact;  // true when |r| = 1 forced p = 0 exactly
};

// Two-sided significance of a Pearson r on n samples, via
// t = r * sqrt((n-2) / (1-r^2)) on n-2 degrees of freedom.
CorrelationP correlation_p_value(double r, int n_samples);

}  // namespace sopma::stats
