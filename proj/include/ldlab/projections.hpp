#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ldlab/divergences.hpp"
#include "ldlab/measures.hpp"

namespace ldlab {

// Mean of the exponentially tilted uniform distribution on [0,1]:
// F(lam) = e^lam/(e^lam - 1) - 1/lam, F(0) = 1/2.  Strictly increasing,
// F(-lam) + F(lam) = 1.
inline double big_f(double lam) {
    if (lam == 0.0) return 0.5;
    if (std::fabs(lam) < 1e-4) {
        // series avoids the 1/lam cancellation
        return 0.5 + lam / 12.0 - lam * lam * lam / 720.0;
    }
    return 1.0 / (-std::expm1(-lam)) - 1.0 / lam;
}

// Unique lam with big_f(lam) = u, bisection to 1e-12.
inline double big_f_inv(double u) {
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("big_f_inv: u must lie in (0,1)");
    double lo = -60.0, hi = 60.0;
    while (big_f(lo) > u) lo *= 2.0;
    while (big_f(hi) < u) hi *= 2.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = big_f(mid);
        if (fm == u) return mid;
        (fm < u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Rate function for the Dirichlet mean under the uniform base, closed form
// F^{-1}(u)(u-1) + log(1 + F^{-1}(u) u); +inf outside (0,1).
inline double rate_i1(double u) {
    if (!(u > 0.0 && u < 1.0)) return kInf;
    const double r = big_f_inv(u);
    const double v = r * (u - 1.0) + std::log1p(r * u);
    return v < 0.0 ? 0.0 : v;
}

namespace detail {

struct PositiveSupport {
    std::vector<double> x;
    std::vector<double> w;
};

inline PositiveSupport positive_support(const DiscreteMeasure& m) {
    PositiveSupport out;
    out.x.reserve(m.size());
    out.w.reserve(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m.mass()[i] > 0.0) {
            out.x.push_back(m.support()[i]);
            out.w.push_back(m.mass()[i]);
        }
    }
    return out;
}

inline void require_interior(const PositiveSupport& s, double u, const char* who) {
    if (s.x.size() < 2 || !(u > s.x.front() && u < s.x.back()))
        throw std::domain_error(std::string(who) +
                                ": target mean outside the open convex hull of the support");
}

// log sum_i w_i e^{r x_i}, stabilized
inline double log_tilt_normalizer(const PositiveSupport& s, double r) {
    double zmax = -kInf;
    for (double xi : s.x) zmax = std::max(zmax, r * xi);
    double acc = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i)
        acc += s.w[i] * std::exp(r * s.x[i] - zmax);
    return zmax + std::log(acc);
}

inline double tilted_mean(const PositiveSupport& s, double r) {
    double zmax = -kInf;
    for (double xi : s.x) zmax = std::max(zmax, r * xi);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double e = s.w[i] * std::exp(r * s.x[i] - zmax);
        num += s.x[i] * e;
        den += e;
    }
    return num / den;
}

}  // namespace detail

// Solution of the forward information projection: the exponential tilt
// mu(dx) = c e^{rx} base(dx) whose mean is the target.
struct TiltSolution {
    double r;
    double c;
    DiscreteMeasure minimizer;
    double value;  // kl(minimizer, base)
};

// Minimizes kl(mu, base) over probability measures with <mu, x> = u.  The
// tilted-mean map r -> <base, x e^{rx}>/<base, e^{rx}> is strictly increasing,
// so the tilt exponent is found by bracketed bisection.
inline TiltSolution forward_tilt(const DiscreteMeasure& base, double u) {
    const auto s = detail::positive_support(base);
    detail::require_interior(s, u, "forward_tilt");

    double lo = -1.0, hi = 1.0;
    while (detail::tilted_mean(s, lo) > u) lo *= 2.0;
    while (detail::tilted_mean(s, hi) < u) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::fabs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (detail::tilted_mean(s, mid) < u ? lo : hi) = mid;
    }
    const double r = 0.5 * (lo + hi);

    const double log_z = detail::log_tilt_normalizer(s, r);
    std::vector<double> tilted(s.w.size());
    for (std::size_t i = 0; i < s.w.size(); ++i)
        tilted[i] = s.w[i] * std::exp(r * s.x[i] - log_z);
    double value = r * u - log_z;
    if (value < 0.0) value = 0.0;
    return {r, std::exp(-log_z), DiscreteMeasure(s.x, std::move(tilted)), value};
}

// Forward-projection rate for an arbitrary discrete base; +inf outside the
// open convex hull.
inline double rate_i3(double u, const DiscreteMeasure& base) {
    const auto s = detail::positive_support(base);
    if (s.x.size() < 2 || !(u > s.x.front() && u < s.x.back())) return kInf;
    return forward_tilt(base, u).value;
}

// Forward-projection rate for the exact uniform base.  The tilted-mean map and
// the normalizer integral have closed forms, so no discretization enters; this
// is the independent route against which rate_i1 is checked.
inline double rate_i3(double u) {
    if (!(u > 0.0 && u < 1.0)) return kInf;
    const auto tilted_mean_uniform = [](double r) {
        if (std::fabs(r) < 1e-4) return 0.5 + r / 12.0 - r * r * r / 720.0;
        // int x e^{rx} dx / int e^{rx} dx = ((r-1)e^r + 1) / (r (e^r - 1))
        return ((r - 1.0) * std::expm1(r) + r) / (r * std::expm1(r));
    };
    double lo = -1.0, hi = 1.0;
    while (tilted_mean_uniform(lo) > u) lo *= 2.0;
    while (tilted_mean_uniform(hi) < u) hi *= 2.0;
    while (hi - lo > 1e-13 * std::max(1.0, std::fabs(lo))) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (tilted_mean_uniform(mid) < u ? lo : hi) = mid;
    }
    const double r = 0.5 * (lo + hi);
    if (std::fabs(r) < 1e-12) return 0.0;
    const double v = r * u - std::log(std::expm1(r) / r);
    return v < 0.0 ? 0.0 : v;
}

// Solution of the reverse information projection: the minimizer of
// kl(base, mu) over {<mu,x> = u} has masses base_i / (lambda1 + lambda2 x_i).
struct ReciprocalSolution {
    double lambda1;
    double lambda2;
    DiscreteMeasure minimizer;
    double value;  // kl(base, minimizer)
};

namespace detail {

struct ReciprocalSystem {
    const PositiveSupport& s;
    double u;

    // residuals of sum w/d - 1 and sum w x/d - u at d_i = l1 + l2 x_i
    bool residuals(double l1, double l2, double& f1, double& f2) const {
        f1 = -1.0;
        f2 = -u;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double d = l1 + l2 * s.x[i];
            if (!(d > 0.0)) return false;
            f1 += s.w[i] / d;
            f2 += s.w[i] * s.x[i] / d;
        }
        return true;
    }
};

}  // namespace detail

// Solves <base, 1/(l1+l2 x)> = 1, <base, x/(l1+l2 x)> = u by damped Newton
// with the positivity guard l1 + l2 x_i > 0; falls back to the monotone
// one-dimensional reduction along l1 = 1 - l2 u.
inline ReciprocalSolution reverse_projection(const DiscreteMeasure& base, double u) {
    const auto s = detail::positive_support(base);
    detail::require_interior(s, u, "reverse_projection");

    const detail::ReciprocalSystem sys{s, u};
    double l1 = 1.0, l2 = 0.0;
    double f1, f2;
    sys.residuals(l1, l2, f1, f2);
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
        if (std::fabs(f1) < 1e-13 && std::fabs(f2) < 1e-13) {
            converged = true;
            break;
        }
        double a11 = 0.0, a12 = 0.0, a22 = 0.0;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double d = l1 + l2 * s.x[i];
            const double g = s.w[i] / (d * d);
            a11 -= g;
            a12 -= g * s.x[i];
            a22 -= g * s.x[i] * s.x[i];
        }
        const double det = a11 * a22 - a12 * a12;
        if (det == 0.0 || !std::isfinite(det)) break;
        const double dl1 = (-f1 * a22 + f2 * a12) / det;
        const double dl2 = (-f2 * a11 + f1 * a12) / det;
        const double norm0 = std::fabs(f1) + std::fabs(f2);
        double step = 1.0;
        bool accepted = false;
        for (int halvings = 0; halvings < 60; ++halvings, step *= 0.5) {
            double g1, g2;
            if (!sys.residuals(l1 + step * dl1, l2 + step * dl2, g1, g2)) continue;
            if (std::fabs(g1) + std::fabs(g2) < norm0) {
                l1 += step * dl1;
                l2 += step * dl2;
                f1 = g1;
                f2 = g2;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }

    if (!converged) {
        // 1-D reduction: any solution satisfies l1 + l2 u = 1, so root-find
        // psi(l2) = sum w_i/(1 + l2 (x_i - u)) - 1 on the side of 0 fixed by
        // the sign of u - mean(base).  psi is convex with psi(0) = 0.
        const auto psi = [&](double t) {
            double acc = -1.0;
            for (std::size_t i = 0; i < s.x.size(); ++i)
                acc += s.w[i] / (1.0 + t * (s.x[i] - u));
            return acc;
        };
        double mean = 0.0;
        for (std::size_t i = 0; i < s.x.size(); ++i) mean += s.w[i] * s.x[i];
        if (std::fabs(u - mean) < 1e-15) {
            l1 = 1.0;
            l2 = 0.0;
        } else {
            double lo, hi;  // bracket with psi(lo) < 0 < psi(hi)
            if (u > mean) {
                hi = -(1.0 - 1e-14) / (s.x.back() - u);
                lo = -1e-8;
                while (psi(lo) >= 0.0 && lo > hi) lo *= 2.0;
            } else {
                hi = (1.0 - 1e-14) / (u - s.x.front());
                lo = 1e-8;
                while (psi(lo) >= 0.0 && lo < hi) lo *= 2.0;
            }
            for (int it = 0; it < 300; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid == lo || mid == hi) break;
                (psi(mid) < 0.0 ? lo : hi) = mid;
            }
            l2 = 0.5 * (lo + hi);
            l1 = 1.0 - l2 * u;
        }
        if (!sys.residuals(l1, l2, f1, f2) ||
            std::fabs(f1) > 1e-9 || std::fabs(f2) > 1e-9) {
            throw std::runtime_error(
                "reverse_projection: solver failed to converge (residuals " +
                std::to_string(f1) + ", " + std::to_string(f2) + " at u=" +
                std::to_string(u) + ")");
        }
    }

    std::vector<double> minimizer(s.x.size());
    double value = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double d = l1 + l2 * s.x[i];
        minimizer[i] = s.w[i] / d;
        value += s.w[i] * std::log(d);
    }
    if (value < 0.0) value = 0.0;
    return {l1, l2, DiscreteMeasure(s.x, std::move(minimizer)), value};
}

namespace detail {

struct BhattacharyyaDual {
    double c;
    double d;
    double value;
};

// Minimizes J(mu, base) subject to <mu, x> = u.  The optimal mu has masses
// w_i/(c + d x_i)^2; (c, d) solve sum w/(c+dx)^2 = 1, sum w x/(c+dx)^2 = u.
// Damped Newton from (1, 0), nested monotone bisection as fallback.
inline BhattacharyyaDual solve_mean_constrained_j(const PositiveSupport& s, double u) {
    const auto residuals = [&](double c, double d, double& f1, double& f2) {
        f1 = -1.0;
        f2 = -u;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double den = c + d * s.x[i];
            if (!(den > 0.0)) return false;
            const double g = s.w[i] / (den * den);
            f1 += g;
            f2 += g * s.x[i];
        }
        return true;
    };

    double c = 1.0, d = 0.0;
    double f1, f2;
    residuals(c, d, f1, f2);
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
        if (std::fabs(f1) < 1e-13 && std::fabs(f2) < 1e-13) {
            converged = true;
            break;
        }
        double a11 = 0.0, a12 = 0.0, a22 = 0.0;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double den = c + d * s.x[i];
            const double g = -2.0 * s.w[i] / (den * den * den);
            a11 += g;
            a12 += g * s.x[i];
            a22 += g * s.x[i] * s.x[i];
        }
        const double det = a11 * a22 - a12 * a12;
        if (det == 0.0 || !std::isfinite(det)) break;
        const double dc = (-f1 * a22 + f2 * a12) / det;
        const double dd = (-f2 * a11 + f1 * a12) / det;
        const double norm0 = std::fabs(f1) + std::fabs(f2);
        double step = 1.0;
        bool accepted = false;
        for (int halvings = 0; halvings < 60; ++halvings, step *= 0.5) {
            double g1, g2;
            if (!residuals(c + step * dc, d + step * dd, g1, g2)) continue;
            if (std::fabs(g1) + std::fabs(g2) < norm0) {
                c += step * dc;
                d += step * dd;
                f1 = g1;
                f2 = g2;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }

    if (!converged) {
        // inner: for fixed d, sum w/(c+dx)^2 is strictly decreasing in c
        const auto c_of = [&](double dd) {
            const auto mass = [&](double cc) {
                double acc = 0.0;
                for (std::size_t i = 0; i < s.x.size(); ++i) {
                    const double den = cc + dd * s.x[i];
                    acc += s.w[i] / (den * den);
                }
                return acc;
            };
            double cmin = -dd * s.x.front();
            for (double xi : s.x) cmin = std::max(cmin, -dd * xi);
            double lo = cmin + 1e-14 * std::max(1.0, std::fabs(cmin));
            double hi = std::max(1.0, cmin + 1.0);
            while (mass(hi) > 1.0) hi = cmin + 2.0 * (hi - cmin);
            for (int it = 0; it < 300; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid == lo || mid == hi) break;
                (mass(mid) > 1.0 ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        };
        // outer: mean of the normalized family is decreasing in d
        const auto mean_at = [&](double dd) {
            const double cc = c_of(dd);
            double acc = 0.0;
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                const double den = cc + dd * s.x[i];
                acc += s.w[i] * s.x[i] / (den * den);
            }
            return acc;
        };
        double lo = -1.0, hi = 1.0;
        while (mean_at(lo) < u) lo *= 2.0;
        while (mean_at(hi) > u) hi *= 2.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            (mean_at(mid) > u ? lo : hi) = mid;
        }
        d = 0.5 * (lo + hi);
        c = c_of(d);
        if (!residuals(c, d, f1, f2) || std::fabs(f1) > 1e-8 || std::fabs(f2) > 1e-8)
            throw std::runtime_error("rate_i2: dual solver failed to converge");
    }

    double bc = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) bc += s.w[i] / (c + d * s.x[i]);
    double value = -2.0 * std::log(bc);
    if (value < 0.0) value = 0.0;
    return {c, d, value};
}

}  // namespace detail

// Rate function I2: inf of J(mu, base) over measures with mean u.  +inf
// outside the open convex hull of the base support.
inline double rate_i2(double u, const DiscreteMeasure& base) {
    const auto s = detail::positive_support(base);
    if (s.x.size() < 2 || !(u > s.x.front() && u < s.x.back())) {
        if (s.x.size() == 1 && u == s.x.front()) return 0.0;
        return kInf;
    }
    return detail::solve_mean_constrained_j(s, u).value;
}

}  // namespace ldlab
