#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "ldlab/divergences.hpp"
#include "ldlab/measures.hpp"
#include "ldlab/oracles.hpp"
#include "ldlab/projections.hpp"
#include "ldlab/rng.hpp"

using Catch::Approx;
using namespace ldlab;

TEST_CASE("big_f basics") {
    CHECK(big_f(0.0) == 0.5);
    const double e = std::exp(1.0);
    CHECK(big_f(1.0) == Approx(e / (e - 1.0) - 1.0).epsilon(1e-14));
    for (double lam : {0.5, 1.0, 5.0})
        CHECK(big_f(lam) + big_f(-lam) == Approx(1.0).margin(1e-14));

    SECTION("series region joins the direct formula smoothly") {
        CHECK(big_f(9.9e-5) == Approx(big_f(1.01e-4)).margin(1e-9));
        CHECK(big_f(-9.9e-5) == Approx(big_f(-1.01e-4)).margin(1e-9));
    }
    SECTION("strictly increasing") {
        double prev = -1.0;
        for (double lam = -40.0; lam <= 40.0; lam += 0.8) {
            const double v = big_f(lam);
            CHECK(v > prev);
            CHECK((v > 0.0 && v < 1.0));
            prev = v;
        }
    }
}

TEST_CASE("big_f_inv") {
    CHECK(big_f_inv(0.5) == 0.0);
    CHECK(big_f_inv(big_f(2.3)) == Approx(2.3).margin(1e-10));
    CHECK(big_f_inv(big_f(1.0)) == Approx(1.0).margin(1e-10));
    CHECK_THROWS_AS(big_f_inv(0.0), std::domain_error);
    CHECK_THROWS_AS(big_f_inv(1.0), std::domain_error);

    SECTION("round trip over [-30, 30]") {
        double worst = 0.0;
        for (double lam = -30.0; lam <= 30.0; lam += 0.25)
            worst = std::max(worst, std::fabs(big_f_inv(big_f(lam)) - lam));
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("rate_i1 closed form") {
    CHECK(rate_i1(0.5) == 0.0);
    CHECK(std::isinf(rate_i1(0.0)));
    CHECK(std::isinf(rate_i1(1.0)));
    CHECK(std::isinf(rate_i1(-0.2)));
    SECTION("symmetric about one half") {
        for (double u = 0.05; u < 0.5; u += 0.05)
            CHECK(rate_i1(u) == Approx(rate_i1(1.0 - u)).epsilon(1e-10));
    }
}

TEST_CASE("rate_i1 equals the forward-projection route") {
    for (double u = 0.1; u < 0.95; u += 0.1)
        CHECK(std::fabs(rate_i1(u) - rate_i3(u)) <= 1e-8);
}

TEST_CASE("forward tilt") {
    const auto grid = DiscreteMeasure::grid(4096);
    SECTION("no tilt at the base mean") {
        const auto sol = forward_tilt(grid, 0.5);
        CHECK(sol.r == Approx(0.0).margin(1e-10));
        CHECK(sol.c == Approx(1.0).margin(1e-10));
        CHECK(sol.value == Approx(0.0).margin(1e-12));
    }
    SECTION("recovers the analytic tilt of the uniform base") {
        const auto sol = forward_tilt(grid, big_f(1.0));
        CHECK(sol.r == Approx(1.0).margin(1e-4));
    }
    SECTION("binary base is exact") {
        const auto sol = forward_tilt(DiscreteMeasure({0.0, 1.0}, {0.5, 0.5}), 0.75);
        CHECK(sol.r == Approx(std::log(3.0)).margin(1e-10));
        CHECK(sol.minimizer.mass()[0] == Approx(0.25).margin(1e-10));
        CHECK(sol.minimizer.mass()[1] == Approx(0.75).margin(1e-10));
        CHECK(sol.value == Approx(0.1308122689990961).margin(1e-10));
        CHECK(sol.value == Approx(kl(sol.minimizer, DiscreteMeasure({0.0, 1.0}, {0.5, 0.5})))
                                .margin(1e-10));
    }
    SECTION("infeasible targets throw") {
        CHECK_THROWS_AS(forward_tilt(DiscreteMeasure({0.2, 0.6}, {0.5, 0.5}), 0.7),
                        std::domain_error);
        CHECK_THROWS_AS(forward_tilt(DiscreteMeasure({0.2, 0.6}, {0.5, 0.5}), 0.6),
                        std::domain_error);
    }
    SECTION("constraints satisfied on random targets") {
        RngStream rng(31, 0);
        const auto base = DiscreteMeasure::grid(512);
        for (int i = 0; i < 20; ++i) {
            const double u = 0.05 + 0.9 * rng.uniform();
            const auto sol = forward_tilt(base, u);
            double mass = 0.0;
            for (double w : sol.minimizer.mass()) mass += w;
            CHECK(std::fabs(mass - 1.0) <= 1e-10);
            CHECK(std::fabs(sol.minimizer.mean() - u) <= 1e-8);
        }
    }
}

TEST_CASE("rate_i3 on grids") {
    const auto grid = DiscreteMeasure::grid(2048);
    CHECK(rate_i3(0.5, grid) == Approx(0.0).margin(1e-12));
    for (double u : {0.3, 0.5, 0.7})
        CHECK(rate_i3(u, grid) == Approx(rate_i1(u)).margin(1e-6));
    CHECK(std::isinf(rate_i3(0.9999, DiscreteMeasure({0.2, 0.6}, {0.5, 0.5}))));

    SECTION("convex in u") {
        std::vector<double> vals;
        for (double u = 0.05; u <= 0.951; u += 0.05) vals.push_back(rate_i3(u));
        for (std::size_t i = 1; i + 1 < vals.size(); ++i)
            CHECK(vals[i + 1] - 2.0 * vals[i] + vals[i - 1] >= -1e-9);
    }
}

TEST_CASE("reverse projection") {
    SECTION("identity at the base mean") {
        const auto sol = reverse_projection(DiscreteMeasure::grid(256), 0.5);
        CHECK(sol.lambda1 == Approx(1.0).margin(1e-10));
        CHECK(sol.lambda2 == Approx(0.0).margin(1e-9));
        CHECK(sol.value == Approx(0.0).margin(1e-12));
    }
    SECTION("matches the closed-form rate on a fine grid") {
        const auto sol = reverse_projection(DiscreteMeasure::grid(4096), 0.7);
        CHECK(sol.value == Approx(rate_i1(0.7)).margin(2e-6));
    }
    SECTION("binary base pins the minimizer") {
        const auto base = DiscreteMeasure({0.0, 1.0}, {0.5, 0.5});
        const auto sol = reverse_projection(base, 0.75);
        CHECK(sol.minimizer.mass()[0] == Approx(0.25).margin(1e-9));
        CHECK(sol.minimizer.mass()[1] == Approx(0.75).margin(1e-9));
        CHECK(sol.value == Approx(0.1438410362258905).margin(1e-9));
    }
    SECTION("constraints and local optimality") {
        RngStream rng(32, 0);
        const auto base = DiscreteMeasure::grid(128);
        for (double u : {0.2, 0.45, 0.8}) {
            const auto sol = reverse_projection(base, u);
            double mass = 0.0;
            for (double w : sol.minimizer.mass()) mass += w;
            CHECK(std::fabs(mass - 1.0) <= 1e-10);
            CHECK(std::fabs(sol.minimizer.mean() - u) <= 1e-8);

            // random feasible perturbations never beat the solver value
            const auto& x = base.support();
            const auto& mstar = sol.minimizer.mass();
            for (int trial = 0; trial < 100; ++trial) {
                std::vector<double> g(x.size());
                for (auto& v : g) v = rng.uniform() - 0.5;
                // project g onto {sum g = 0, sum g x = 0}
                double s0 = 0.0, s1 = 0.0, xx = 0.0, xbar = 0.0;
                for (std::size_t i = 0; i < x.size(); ++i) xbar += x[i];
                xbar /= static_cast<double>(x.size());
                for (std::size_t i = 0; i < x.size(); ++i) {
                    s0 += g[i];
                    s1 += g[i] * (x[i] - xbar);
                    xx += (x[i] - xbar) * (x[i] - xbar);
                }
                for (std::size_t i = 0; i < x.size(); ++i)
                    g[i] -= s0 / static_cast<double>(x.size()) + s1 * (x[i] - xbar) / xx;
                // scale to keep positivity
                double limit = 1.0;
                for (std::size_t i = 0; i < x.size(); ++i)
                    if (g[i] < 0.0) limit = std::min(limit, -0.5 * mstar[i] / g[i]);
                std::vector<double> mu(x.size());
                for (std::size_t i = 0; i < x.size(); ++i)
                    mu[i] = mstar[i] + limit * g[i];
                const double objective = kl(base, DiscreteMeasure(x, mu));
                CHECK(sol.value <= objective + 1e-10);
            }
        }
    }
    SECTION("infeasible targets throw") {
        CHECK_THROWS_AS(reverse_projection(DiscreteMeasure::grid(64), 1.2), std::domain_error);
    }
}

TEST_CASE("rate_i2 mean-constrained J") {
    const auto uniform512 = DiscreteMeasure::grid(512);
    CHECK(rate_i2(0.5, uniform512) == Approx(0.0).margin(1e-12));
    CHECK(std::isinf(rate_i2(1.5, uniform512)));

    SECTION("below both one-sided rates") {
        for (double u = 0.2; u <= 0.81; u += 0.1) {
            const double i2 = rate_i2(u, uniform512);
            CHECK(i2 <= rate_i1(u) + 1e-9);
            CHECK(i2 <= rate_i3(u, uniform512) + 1e-9);
            CHECK(i2 <= reverse_projection(uniform512, u).value + 1e-9);
            if (std::fabs(u - 0.5) > 1e-12) CHECK(i2 > 0.0);
        }
    }
    SECTION("binary base pins the minimizer") {
        const double v = rate_i2(0.75, DiscreteMeasure({0.0, 1.0}, {0.5, 0.5}));
        CHECK(v == Approx(j_divergence(SimplexVector({0.25, 0.75}),
                                       SimplexVector({0.5, 0.5}))).margin(1e-9));
    }
    SECTION("matches the segment brute force on 3-point instances") {
        RngStream rng(33, 0);
        for (int i = 0; i < 20; ++i) {
            std::vector<double> x = {0.05 + 0.2 * rng.uniform(), 0.4 + 0.2 * rng.uniform(),
                                     0.75 + 0.2 * rng.uniform()};
            std::vector<double> w(3);
            double total = 0.0;
            for (auto& v : w) {
                v = 0.1 + rng.exponential();
                total += v;
            }
            for (auto& v : w) v /= total;
            const double u = x[0] + (x[2] - x[0]) * (0.2 + 0.6 * rng.uniform());
            const double solved = rate_i2(u, DiscreteMeasure(x, w));
            const double brute = oracle::brute_force_mean_constrained_j(u, x, w);
            CHECK(solved == Approx(brute).margin(1e-6));
        }
    }
}
