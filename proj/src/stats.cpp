#include "wordmap/stats.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "wordmap/errors.hpp"

namespace wordmap {

SummaryStats summarize(std::span<const double> samples) {
    if (samples.empty()) throw_usage("summarize: need at least one sample");
    SummaryStats out;
    out.n = samples.size();
    double sum = 0.0;
    for (double v : samples) sum += v;
    out.mean = sum / static_cast<double>(out.n);
    if (out.n > 1) {
        double ss = 0.0;
        for (double v : samples) {
            double d = v - out.mean;
            ss += d * d;
        }
        out.sd = std::sqrt(ss / static_cast<double>(out.n - 1));
    }
    out.se = out.sd / std::sqrt(static_cast<double>(out.n));
    return out;
}

namespace {

// Continued fraction for I_x(a,b), modified Lentz.
double betacf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double tol = 1e-10;
    const int max_iter = 1000;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < tol) return h;
    }
    throw_runtime("incomplete beta continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw_usage("incomplete beta: a and b must be > 0");
    if (x < 0.0 || x > 1.0) throw_usage("incomplete beta: x must be in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                         a * std::log(x) + b * std::log1p(-x);
    const double bt = std::exp(ln_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
    if (!(df > 0.0)) throw_usage("student_t_cdf: df must be > 0");
    if (t == 0.0) return 0.5;
    const double x = df / (df + t * t);
    const double tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x);
    return t > 0.0 ? 1.0 - tail : tail;
}

TTestResult one_sample_t(std::span<const double> samples, double mu0) {
    if (samples.size() < 2) throw_usage("one_sample_t: need at least two samples");
    const SummaryStats s = summarize(samples);
    if (s.sd <= 0.0) throw_usage("one_sample_t: degenerate sample (sd = 0)");
    TTestResult r;
    r.t = (s.mean - mu0) / s.se;
    r.df = static_cast<double>(s.n - 1);
    const double x = r.df / (r.df + r.t * r.t);
    r.p_two_sided = regularized_incomplete_beta(r.df / 2.0, 0.5, x);
    r.p_one_sided = r.t >= 0.0 ? r.p_two_sided / 2.0 : 1.0 - r.p_two_sided / 2.0;
    r.significant_1pct = r.p_two_sided < 0.01;
    r.significant_5pct = r.p_two_sided < 0.05;
    return r;
}

TTestResult paired_t(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw_usage("paired_t: sample lengths differ (" + std::to_string(a.size()) +
                    " vs " + std::to_string(b.size()) + ")");
    std::vector<double> diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
    return one_sample_t(diff, 0.0);
}

}  // namespace wordmap
