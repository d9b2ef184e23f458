#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ldlab {

inline double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace detail {

// Continued fraction for the regularized incomplete beta, modified Lentz.
// Valid for x <= (a+1)/(a+b+2); the caller applies the symmetry switch.
inline double inc_beta_cf(double x, double a, double b) {
    constexpr double tiny = 1e-300;
    constexpr double rel_tol = 1e-12;
    constexpr int max_iter = 300;

    double c = 1.0;
    double d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
        d = 1.0 + num * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + num / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
        d = 1.0 + num * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + num / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < rel_tol) return h;
    }
    return h;  // converged to max_iter precision
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b) = P(Beta(a,b) <= x).
inline double regularized_incomplete_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("incomplete beta: a, b must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double front =
        std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * detail::inc_beta_cf(x, a, b) / a;
    }
    return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) - log_beta(a, b)) *
                     detail::inc_beta_cf(1.0 - x, b, a) / b;
}

// log of the Binomial(n, p) mass at k
inline double log_binomial_pmf(int k, int n, double p) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    const double log_choose = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                              std::lgamma(n - k + 1.0);
    double lp = 0.0;
    if (k > 0) lp += k * std::log(p);
    if (n - k > 0) lp += (n - k) * std::log1p(-p);
    return log_choose + lp;
}

}  // namespace ldlab
