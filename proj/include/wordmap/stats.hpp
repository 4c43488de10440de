#pragma once

#include <cstddef>
#include <span>

namespace wordmap {

struct SummaryStats {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;  // sample standard deviation (n-1 denominator)
    double se = 0.0;  // sd / sqrt(n)
};

// n >= 1 required.
SummaryStats summarize(std::span<const double> samples);

struct TTestResult {
    double t = 0.0;
    double df = 0.0;
    double p_two_sided = 1.0;
    double p_one_sided = 1.0;  // upper tail, P(T >= t)
    bool significant_1pct = false;  // two-sided p < 0.01
    bool significant_5pct = false;  // two-sided p < 0.05
};

// t = (mean - mu0) / se with df = n - 1. Requires n >= 2 and sd > 0.
TTestResult one_sample_t(std::span<const double> samples, double mu0);

// One-sample t on the pairwise differences a[i] - b[i] against 0.
TTestResult paired_t(std::span<const double> a, std::span<const double> b);

// Regularized incomplete beta I_x(a, b), continued fraction evaluated to 1e-10.
double regularized_incomplete_beta(double a, double b, double x);

// CDF of Student's t distribution with df degrees of freedom.
double student_t_cdf(double t, double df);

}  // namespace wordmap
