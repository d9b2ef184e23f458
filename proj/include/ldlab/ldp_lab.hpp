#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ldlab/divergences.hpp"
#include "ldlab/measures.hpp"
#include "ldlab/random_measures.hpp"
#include "ldlab/rng.hpp"
#include "ldlab/special.hpp"

namespace ldlab {

// Finite-dimensional rate function of the empirical family (Sanov direction).
inline double multinomial_rate(const SimplexVector& q, const SimplexVector& p) {
    return kl(q, p);
}

// Finite-dimensional rate function of the Dirichlet-process family; the
// arguments enter the entropy in the reversed order.
inline double dirichlet_rate(const SimplexVector& q, const SimplexVector& p) {
    return kl(p, q);
}

// Joint rate of the (W_n, L_n) pair: o is the empirical-component target,
// q the weighted-measure target, p the base.
inline double joint_rate(const SimplexVector& o, const SimplexVector& q,
                         const SimplexVector& p) {
    const double a = kl(o, q);
    if (a == kInf) return kInf;
    const double b = kl(o, p);
    if (b == kInf) return kInf;
    return a + b;
}

// Exact probability that the projected binary W_n lies in the open
// partition-distance ball of radius delta around (q, 1-q).  Conditional on
// the atom count k in the first cell, the cell mass is Beta(k, n-k), with the
// k = 0 and k = n boundary cases degenerate at 0 and 1.
inline double exact_ball_probability_binary(double base_p, double target_q, double delta,
                                            int n) {
    if (!(base_p > 0.0 && base_p < 1.0))
        throw std::invalid_argument("exact_ball_probability_binary: base_p must lie in (0,1)");
    if (!(target_q >= 0.0 && target_q <= 1.0))
        throw std::invalid_argument("exact_ball_probability_binary: target_q must lie in [0,1]");
    if (!(delta > 0.0))
        throw std::invalid_argument("exact_ball_probability_binary: delta must be positive");
    if (n < 1) throw std::invalid_argument("exact_ball_probability_binary: n must be positive");
    if (delta >= 2.0) return 1.0;  // ball covers the simplex

    const double half = 0.5 * delta;  // |x - q| + |(1-x) - (1-q)| < delta
    const double lo = target_q - half;
    const double hi = target_q + half;
    double total = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double pk = std::exp(log_binomial_pmf(k, n, base_p));
        double inner;
        if (k == 0) {
            inner = std::fabs(0.0 - target_q) < half ? 1.0 : 0.0;
        } else if (k == n) {
            inner = std::fabs(1.0 - target_q) < half ? 1.0 : 0.0;
        } else {
            const double a = static_cast<double>(k), b = static_cast<double>(n - k);
            const double upper = hi >= 1.0 ? 1.0 : regularized_incomplete_beta(hi, a, b);
            const double lower = lo <= 0.0 ? 0.0 : regularized_incomplete_beta(lo, a, b);
            inner = upper - lower;
            if (inner < 0.0) inner = 0.0;
        }
        total += pk * inner;
    }
    return total > 1.0 ? 1.0 : total;
}

enum class Family { empirical, wn, dp };

inline const char* to_string(Family f) {
    switch (f) {
        case Family::empirical: return "empirical";
        case Family::wn: return "wn";
        case Family::dp: return "dp";
    }
    return "?";
}

inline Family family_from_string(const std::string& s) {
    if (s == "empirical") return Family::empirical;
    if (s == "wn") return Family::wn;
    if (s == "dp") return Family::dp;
    throw std::invalid_argument("unknown family: " + s);
}

// Theoretical decay rate of the family's projected ball probabilities at the
// ball center.
inline double theoretical_rate(Family family, const SimplexVector& target,
                               const SimplexVector& base_cells) {
    switch (family) {
        case Family::empirical: return multinomial_rate(target, base_cells);
        case Family::dp: return dirichlet_rate(target, base_cells);
        case Family::wn: return j_divergence(target, base_cells);
    }
    return kInf;
}

struct BallProbability {
    double prob;
    double std_err;
    std::uint64_t hits;
    std::uint64_t replicates;
    bool zero_hits;
};

// Monte Carlo estimate of P(projected sample within partition_distance < delta
// of target).  Replicates are split across workers, each on its own
// RngStream substream; the result is a deterministic function of
// (seed, stream_id, replicates, workers).
inline BallProbability mc_ball_probability(Family family, const DiscreteMeasure& base,
                                           const Partition& partition,
                                           const SimplexVector& target, double delta,
                                           int n, std::uint64_t replicates,
                                           const RngStream& rng, unsigned workers = 0) {
    if (replicates < 1000)
        throw std::invalid_argument("mc_ball_probability: needs at least 1000 replicates");
    if (target.size() != partition.cell_count())
        throw std::invalid_argument("mc_ball_probability: target/partition size mismatch");
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    if (workers > replicates) workers = static_cast<unsigned>(replicates);

    const MeasureSampler sampler(base);
    const int truncation = default_dp_truncation(static_cast<double>(n));
    std::vector<std::uint64_t> worker_hits(workers, 0);

    const auto run_chunk = [&](unsigned widx, std::uint64_t count) {
        RngStream stream(rng.seed(), rng.stream_id() * 0x100000000ULL + widx);
        std::uint64_t hits = 0;
        for (std::uint64_t i = 0; i < count; ++i) {
            WeightedAtoms w;
            switch (family) {
                case Family::empirical: w = sample_empirical(sampler, n, stream); break;
                case Family::wn: w = sample_wn(sampler, n, stream); break;
                case Family::dp:
                    w = sample_dp(sampler, static_cast<double>(n), truncation, stream);
                    break;
            }
            if (partition_distance(project(w, partition), target) < delta) ++hits;
        }
        worker_hits[widx] = hits;
    };

    const std::uint64_t chunk = replicates / workers;
    const std::uint64_t rem = replicates % workers;
    if (workers == 1) {
        run_chunk(0, replicates);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(run_chunk, w, chunk + (w < rem ? 1 : 0));
        for (auto& t : pool) t.join();
    }

    std::uint64_t hits = 0;
    for (auto h : worker_hits) hits += h;
    const double p = static_cast<double>(hits) / static_cast<double>(replicates);
    const double se = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(replicates));
    return {p, se, hits, replicates, hits == 0};
}

// Per-n ball probabilities with their log-rate transforms and the theoretical
// rate they are compared against.
struct RateEstimate {
    Family family = Family::wn;
    std::string method;  // "monte_carlo" or "exact_binary"
    std::vector<int> n_values;
    std::vector<double> probs;
    std::vector<double> std_errs;
    std::vector<double> log_rates;  // -(1/n) log prob; +inf where prob == 0
    std::vector<bool> zero_hits;
    double theory = 0.0;
    // scenario metadata
    std::vector<double> cuts;
    std::vector<double> target;
    double delta = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t replicates = 0;
    unsigned workers = 1;
};

inline RateEstimate estimate_rate_mc(Family family, const DiscreteMeasure& base,
                                     const Partition& partition, const SimplexVector& target,
                                     double delta, const std::vector<int>& n_values,
                                     std::uint64_t replicates, const RngStream& rng,
                                     unsigned workers = 0) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    RateEstimate est;
    est.family = family;
    est.method = "monte_carlo";
    est.theory = theoretical_rate(family, target, project(base, partition));
    est.cuts = partition.cuts();
    est.target = target.coords();
    est.delta = delta;
    est.seed = rng.seed();
    est.replicates = replicates;
    est.workers = workers;
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        const int n = n_values[i];
        // distinct substream block per n so runs are reproducible point-wise
        RngStream point_rng(rng.seed(), rng.stream_id() + i + 1);
        const auto ball = mc_ball_probability(family, base, partition, target, delta, n,
                                              replicates, point_rng, workers);
        est.n_values.push_back(n);
        est.probs.push_back(ball.prob);
        est.std_errs.push_back(ball.std_err);
        est.log_rates.push_back(ball.zero_hits ? kInf : -std::log(ball.prob) / n);
        est.zero_hits.push_back(ball.zero_hits);
    }
    return est;
}

inline RateEstimate estimate_rate_exact_binary(double base_p, double target_q, double delta,
                                               const std::vector<int>& n_values) {
    RateEstimate est;
    est.family = Family::wn;
    est.method = "exact_binary";
    est.theory = j_divergence(SimplexVector({target_q, 1.0 - target_q}),
                              SimplexVector({base_p, 1.0 - base_p}));
    est.cuts = {};
    est.target = {target_q, 1.0 - target_q};
    est.delta = delta;
    for (int n : n_values) {
        const double p = exact_ball_probability_binary(base_p, target_q, delta, n);
        est.n_values.push_back(n);
        est.probs.push_back(p);
        est.std_errs.push_back(0.0);
        est.log_rates.push_back(p > 0.0 ? -std::log(p) / n : kInf);
        est.zero_hits.push_back(p == 0.0);
    }
    return est;
}

struct FitResult {
    double slope;      // empirical rate: log P fitted as -slope * n + intercept
    double intercept;
    double residual;   // root mean squared fit residual
};

// Least-squares fit of log P against n over the finite points.
inline FitResult fit_rate(const RateEstimate& est) {
    std::vector<double> ns, ys;
    for (std::size_t i = 0; i < est.n_values.size(); ++i) {
        if (est.probs[i] > 0.0 && std::isfinite(est.log_rates[i])) {
            ns.push_back(static_cast<double>(est.n_values[i]));
            ys.push_back(std::log(est.probs[i]));
        }
    }
    if (ns.size() < 3)
        throw std::runtime_error("fit_rate: needs at least 3 finite (n, log P) points");
    const double count = static_cast<double>(ns.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        sx += ns[i];
        sy += ys[i];
        sxx += ns[i] * ns[i];
        sxy += ns[i] * ys[i];
    }
    const double denom = count * sxx - sx * sx;
    const double b = (count * sxy - sx * sy) / denom;  // d(log P)/dn
    const double a = (sy - b * sx) / count;
    double rss = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double r = ys[i] - (a + b * ns[i]);
        rss += r * r;
    }
    return {-b, a, std::sqrt(rss / count)};
}

}  // namespace ldlab
