#pragma once

// Brute-force reference computations used to gate the closed-form and dual
// solver routes.  Everything here minimizes the defining objective directly
// over a grid (with zoom refinement on convex objectives) and stays
// independent of the implementation paths it checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ldlab/divergences.hpp"
#include "ldlab/measures.hpp"

namespace ldlab::oracle {

namespace detail {

inline double entropy_term(double v, double ref) {
    if (v == 0.0) return 0.0;
    if (ref == 0.0) return kInf;
    return v * std::log(v / ref);
}

// kl(v,a) + kl(v,b) for a binary v = (t, 1-t)
inline double binary_joint(double t, const std::vector<double>& a,
                           const std::vector<double>& b) {
    return entropy_term(t, a[0]) + entropy_term(1.0 - t, a[1]) +
           entropy_term(t, b[0]) + entropy_term(1.0 - t, b[1]);
}

inline double ternary_joint(double o1, double o2, const std::vector<double>& a,
                            const std::vector<double>& b) {
    const double o3 = 1.0 - o1 - o2;
    if (o3 < 0.0) return kInf;
    return entropy_term(o1, a[0]) + entropy_term(o2, a[1]) + entropy_term(o3, a[2]) +
           entropy_term(o1, b[0]) + entropy_term(o2, b[1]) + entropy_term(o3, b[2]);
}

}  // namespace detail

// Grid minimization of kl(v,a) + kl(v,b) over the simplex, refined around the
// coarse minimizer (the objective is convex, so zooming is safe).  Supports
// 2- and 3-cell vectors.
inline double brute_force_j(const SimplexVector& a, const SimplexVector& b,
                            double coarse_step = 1e-4) {
    const auto& av = a.coords();
    const auto& bv = b.coords();
    if (a.size() != b.size()) throw std::invalid_argument("brute_force_j: length mismatch");
    if (a.size() == 2) {
        double best_t = 0.0, best = kInf;
        auto scan = [&](double lo, double hi, double step) {
            for (double t = lo; t <= hi + 0.5 * step; t += step) {
                const double tt = std::clamp(t, 0.0, 1.0);
                const double v = detail::binary_joint(tt, av, bv);
                if (v < best) {
                    best = v;
                    best_t = tt;
                }
            }
        };
        double step = coarse_step;
        scan(0.0, 1.0, step);
        for (int round = 0; round < 2; ++round) {
            const double lo = std::max(0.0, best_t - 2.0 * step);
            const double hi = std::min(1.0, best_t + 2.0 * step);
            step /= 50.0;
            scan(lo, hi, step);
        }
        return best;
    }
    if (a.size() == 3) {
        double b1 = 1.0 / 3, b2 = 1.0 / 3, best = kInf;
        auto scan = [&](double lo1, double hi1, double lo2, double hi2, double step) {
            for (double o1 = lo1; o1 <= hi1 + 0.5 * step; o1 += step) {
                const double c1 = std::clamp(o1, 0.0, 1.0);
                for (double o2 = lo2; o2 <= std::min(hi2, 1.0 - c1) + 0.5 * step; o2 += step) {
                    const double c2 = std::clamp(o2, 0.0, 1.0 - c1);
                    const double v = detail::ternary_joint(c1, c2, av, bv);
                    if (v < best) {
                        best = v;
                        b1 = c1;
                        b2 = c2;
                    }
                }
            }
        };
        double step = 4e-3;
        scan(0.0, 1.0, 0.0, 1.0, step);
        for (int round = 0; round < 4; ++round) {
            const double lo1 = std::max(0.0, b1 - 2.0 * step);
            const double hi1 = std::min(1.0, b1 + 2.0 * step);
            const double lo2 = std::max(0.0, b2 - 2.0 * step);
            const double hi2 = std::min(1.0, b2 + 2.0 * step);
            step /= 8.0;
            scan(lo1, hi1, lo2, hi2, step);
        }
        return best;
    }
    throw std::invalid_argument("brute_force_j: only 2- and 3-cell vectors supported");
}

// Direct minimization of J(mu, base) over the feasible segment
// {mu >= 0, sum mu = 1, sum mu x = u} of a 3-point instance.
inline double brute_force_mean_constrained_j(double u, const std::vector<double>& x,
                                             const std::vector<double>& w) {
    if (x.size() != 3 || w.size() != 3)
        throw std::invalid_argument("brute_force_mean_constrained_j: needs 3 points");
    // vertices of the feasible segment: one coordinate pinned to zero
    std::vector<std::array<double, 3>> verts;
    const auto try_vertex = [&](int zero) {
        const int i = (zero + 1) % 3, j = (zero + 2) % 3;
        const double den = x[j] - x[i];
        if (den == 0.0) return;
        const double mj = (u - x[i]) / den;
        const double mi = 1.0 - mj;
        if (mi < -1e-12 || mj < -1e-12) return;
        std::array<double, 3> v{0.0, 0.0, 0.0};
        v[i] = std::max(mi, 0.0);
        v[j] = std::max(mj, 0.0);
        verts.push_back(v);
    };
    for (int z = 0; z < 3; ++z) try_vertex(z);
    if (verts.empty())
        throw std::invalid_argument("brute_force_mean_constrained_j: infeasible mean");
    const auto& v0 = verts.front();
    const auto& v1 = verts.back();

    const auto j_at = [&](double s) {
        double bc = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double mu = (1.0 - s) * v0[i] + s * v1[i];
            if (mu > 0.0 && w[i] > 0.0) bc += std::sqrt(mu * w[i]);
        }
        return bc > 0.0 ? -2.0 * std::log(bc) : kInf;
    };

    double best_s = 0.0, best = kInf;
    auto scan = [&](double lo, double hi, double step) {
        for (double s = lo; s <= hi + 0.5 * step; s += step) {
            const double ss = std::clamp(s, 0.0, 1.0);
            const double v = j_at(ss);
            if (v < best) {
                best = v;
                best_s = ss;
            }
        }
    };
    double step = 1e-4;
    scan(0.0, 1.0, step);
    for (int round = 0; round < 2; ++round) {
        const double lo = std::max(0.0, best_s - 2.0 * step);
        const double hi = std::min(1.0, best_s + 2.0 * step);
        step /= 50.0;
        scan(lo, hi, step);
    }
    return best;
}

}  // namespace ldlab::oracle
