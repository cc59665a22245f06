#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace gridft {

// Normal quantile (Acklam's rational approximation, |rel err| < 1.2e-9).
// Used to turn a confidence level into the z for Wilson intervals.
inline double normal_quantile(double q) {
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("normal_quantile: q in (0,1) required");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1.0 - plow;
    double x;
    if (q < plow) {
        double u = std::sqrt(-2.0 * std::log(q));
        x = (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
            ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
    } else if (q <= phigh) {
        double u = q - 0.5, t = u * u;
        x = (((((a[0] * t + a[1]) * t + a[2]) * t + a[3]) * t + a[4]) * t + a[5]) * u /
            (((((b[0] * t + b[1]) * t + b[2]) * t + b[3]) * t + b[4]) * t + 1.0);
    } else {
        double u = std::sqrt(-2.0 * std::log(1.0 - q));
        x = -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
            ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
    }
    return x;
}

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

// Binomial interval: Wilson score in the interior, exact (Clopper-Pearson
// style) bounds at k=0 and k=n so that a clean run of n trials certifies
// error <= -ln(1-conf)/n, the rule-of-three bound at 95%.
inline Interval binomial_interval(std::size_t k, std::size_t n, double confidence) {
    if (n == 0) return {0.0, 1.0};
    if (k > n) throw std::domain_error("binomial_interval: k > n");
    const double alpha = 1.0 - confidence;
    if (k == 0) return {0.0, 1.0 - std::pow(alpha, 1.0 / double(n))};
    if (k == n) return {std::pow(alpha, 1.0 / double(n)), 1.0};
    const double z = normal_quantile(1.0 - alpha / 2.0);
    const double nn = double(n), ph = double(k) / nn, z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (ph + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn)) / denom;
    double lo = center - half, hi = center + half;
    if (lo < 0.0) lo = 0.0;
    if (hi > 1.0) hi = 1.0;
    return {lo, hi};
}

inline double mean(const std::vector<double>& v) {
    if (v.empty()) throw std::domain_error("mean of empty vector");
    double s = 0.0;
    for (double x : v) s += x;
    return s / double(v.size());
}

// Sample standard deviation (n-1 denominator).
inline double sample_std(const std::vector<double>& v) {
    if (v.size() < 2) throw std::domain_error("sample_std needs >= 2 values");
    double m = mean(v), s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / double(v.size() - 1));
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 1.0;
    std::size_t n = 0;
};

// Ordinary least squares y = slope*x + intercept. r2 is 1 for a fit with
// <= 2 points or a degenerate (zero-variance) response.
inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::domain_error("linear_fit: need two equal-length samples, n >= 2");
    const std::size_t n = x.size();
    double mx = mean(x), my = mean(y), sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::domain_error("linear_fit: x has zero variance");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.n = n;
    if (syy > 0.0 && n > 2) {
        double ssres = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = y[i] - (f.slope * x[i] + f.intercept);
            ssres += r * r;
        }
        f.r2 = 1.0 - ssres / syy;
    }
    return f;
}

}  // namespace gridft
