#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "ldlab/measures.hpp"

namespace ldlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace detail {

// sum a_i log(a_i/b_i) with 0 log 0 = 0 log(0/0) = 0; +inf on support violation
inline double kl_raw(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        if (b[i] == 0.0) return kInf;
        s += a[i] * std::log(a[i] / b[i]);
    }
    return s < 0.0 ? 0.0 : s;  // clamp float noise at a == b
}

// Bhattacharyya coefficient over coordinates where both masses are positive
inline double bhattacharyya_raw(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > 0.0 && b[i] > 0.0) s += std::sqrt(a[i] * b[i]);
    return s;
}

}  // namespace detail

// Relative entropy H(a|b), natural log.
inline double kl(const SimplexVector& a, const SimplexVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("kl: length mismatch");
    return detail::kl_raw(a.coords(), b.coords());
}

inline double kl(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    const auto merged = detail::merge_support(a, b);
    return detail::kl_raw(merged.mass_a, merged.mass_b);
}

inline double sym_kl(const SimplexVector& a, const SimplexVector& b) {
    return kl(a, b) + kl(b, a);
}

inline double sym_kl(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    return kl(a, b) + kl(b, a);
}

// Variational lower bound on H(a|b): max over the supplied test vectors f of
// <a,f> - log <b,e^f>.  Never exceeds kl(a,b); equality at f = log(a/b).
inline double kl_variational_lb(const SimplexVector& a, const SimplexVector& b,
                                std::span<const std::vector<double>> test_values) {
    if (test_values.empty())
        throw std::invalid_argument("kl_variational_lb: empty test family");
    double best = -kInf;
    for (const auto& f : test_values) {
        if (f.size() != a.size())
            throw std::invalid_argument("kl_variational_lb: test vector length mismatch");
        double inner = 0.0;
        double fmax = -kInf;
        for (std::size_t i = 0; i < f.size(); ++i) {
            inner += a[i] * f[i];
            if (b[i] > 0.0 && f[i] > fmax) fmax = f[i];
        }
        double z = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            if (b[i] > 0.0) z += b[i] * std::exp(f[i] - fmax);
        best = std::max(best, inner - (fmax + std::log(z)));
    }
    return best;
}

// J(a,b) = inf over probability vectors v of kl(v,a) + kl(v,b).  The infimum
// is attained at v_i proportional to sqrt(a_i b_i), giving the closed form
// -2 log sum sqrt(a_i b_i); +inf iff the supports are disjoint.
inline double j_divergence(const SimplexVector& a, const SimplexVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("j_divergence: length mismatch");
    const double bc = detail::bhattacharyya_raw(a.coords(), b.coords());
    if (bc == 0.0) return kInf;
    const double v = -2.0 * std::log(bc);
    return v < 0.0 ? 0.0 : v;
}

inline double j_divergence(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    const auto merged = detail::merge_support(a, b);
    const double bc = detail::bhattacharyya_raw(merged.mass_a, merged.mass_b);
    if (bc == 0.0) return kInf;
    const double v = -2.0 * std::log(bc);
    return v < 0.0 ? 0.0 : v;
}

// Minimizer of L(p) = H((p,1-p)|(q,1-q)) + H((p,1-p)|(r,1-r)) over p.
struct BinaryMinimizer {
    double p_hat;
    double value;
};

inline BinaryMinimizer binary_reverse_minimizer(double q, double r) {
    if (q < 0.0 || q > 1.0 || r < 0.0 || r > 1.0)
        throw std::domain_error("binary_reverse_minimizer: q, r must lie in [0,1]");
    const bool q0 = q == 0.0, q1 = q == 1.0, r0 = r == 0.0, r1 = r == 1.0;
    if ((q0 && r1) || (q1 && r0)) return {q0 ? 0.0 : 1.0, kInf};  // disjoint supports
    if (q0 && r0) return {0.0, 0.0};
    if (q1 && r1) return {1.0, 0.0};
    if (q0) return {0.0, -std::log1p(-r)};
    if (r0) return {0.0, -std::log1p(-q)};
    if (q1) return {1.0, -std::log(r)};
    if (r1) return {1.0, -std::log(q)};
    const double s = std::sqrt((q * r) / ((1.0 - q) * (1.0 - r)));
    const double p_hat = s / (1.0 + s);
    const double value = -2.0 * std::log(std::sqrt((1.0 - q) * (1.0 - r)) + std::sqrt(q * r));
    return {p_hat, value < 0.0 ? 0.0 : value};
}

struct PinskerReport {
    double tv;
    double j;
    double slack;  // 4*j - tv^2
};

template <typename Kind>
PinskerReport pinsker_check(const Kind& a, const Kind& b) {
    const double tv = tv_distance(a, b);
    const double j = j_divergence(a, b);
    return {tv, j, 4.0 * j - tv * tv};
}

}  // namespace ldlab
