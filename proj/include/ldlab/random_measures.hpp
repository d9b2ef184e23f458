#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ldlab/measures.hpp"
#include "ldlab/rng.hpp"

namespace ldlab {

// Atomic random measure: atoms need not be distinct or sorted; weights sum
// to one.
struct WeightedAtoms {
    std::vector<double> atoms;
    std::vector<double> weights;
};

// Draws support points of a DiscreteMeasure proportional to mass.  Detects
// equal-mass supports (grids) and samples those by direct indexing.
class MeasureSampler {
  public:
    explicit MeasureSampler(const DiscreteMeasure& m) : measure_(m) {
        const auto& w = m.mass();
        equal_mass_ = true;
        for (double v : w)
            if (std::fabs(v - w.front()) > 1e-15) {
                equal_mass_ = false;
                break;
            }
        if (!equal_mass_) {
            cumulative_.resize(w.size());
            double acc = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) {
                acc += w[i];
                cumulative_[i] = acc;
            }
            cumulative_.back() = 1.0;
        }
    }

    const DiscreteMeasure& measure() const { return measure_; }

    double draw(RngStream& rng) const {
        const double u = rng.uniform();
        std::size_t idx;
        if (equal_mass_) {
            idx = std::min(static_cast<std::size_t>(u * measure_.size()),
                           measure_.size() - 1);
        } else {
            idx = static_cast<std::size_t>(
                std::lower_bound(cumulative_.begin(), cumulative_.end(), u) -
                cumulative_.begin());
        }
        return measure_.support()[idx];
    }

  private:
    DiscreteMeasure measure_;
    bool equal_mass_;
    std::vector<double> cumulative_;
};

// Empirical measure: n i.i.d. atoms, weight 1/n each.
inline WeightedAtoms sample_empirical(const MeasureSampler& base, int n, RngStream& rng) {
    if (n < 1) throw std::invalid_argument("sample_empirical: n must be positive");
    WeightedAtoms out;
    out.atoms.resize(n);
    out.weights.assign(n, 1.0 / n);
    for (auto& a : out.atoms) a = base.draw(rng);
    return out;
}

inline WeightedAtoms sample_empirical(const DiscreteMeasure& base, int n, RngStream& rng) {
    return sample_empirical(MeasureSampler(base), n, rng);
}

// Finite Dirichlet weighted measure: i.i.d. atoms with flat Dirichlet weights,
// realized as normalized unit-rate exponentials.
inline WeightedAtoms sample_wn(const MeasureSampler& base, int n, RngStream& rng) {
    if (n < 1) throw std::invalid_argument("sample_wn: n must be positive");
    WeightedAtoms out;
    out.atoms.resize(n);
    out.weights.resize(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        out.atoms[i] = base.draw(rng);
        out.weights[i] = rng.exponential();
        total += out.weights[i];
    }
    for (auto& w : out.weights) w /= total;
    return out;
}

inline WeightedAtoms sample_wn(const DiscreteMeasure& base, int n, RngStream& rng) {
    return sample_wn(MeasureSampler(base), n, rng);
}

inline int default_dp_truncation(double theta) {
    return static_cast<int>(std::ceil(10.0 * (theta + 1.0)));
}

// Truncated stick-breaking Dirichlet process.  K Beta(1,theta) sticks; the
// leftover mass prod(1-U_i) goes to one extra atom so the weights sum to one
// exactly.
inline WeightedAtoms sample_dp(const MeasureSampler& base, double theta, int truncation,
                               RngStream& rng) {
    if (!(theta > 0.0)) throw std::invalid_argument("sample_dp: theta must be positive");
    if (truncation < 1) throw std::invalid_argument("sample_dp: truncation must be >= 1");
    WeightedAtoms out;
    out.atoms.resize(truncation + 1);
    out.weights.resize(truncation + 1);
    double stick = 1.0;
    for (int k = 0; k < truncation; ++k) {
        const double u = rng.beta_one_theta(theta);
        out.weights[k] = stick * u;
        out.atoms[k] = base.draw(rng);
        stick *= 1.0 - u;
    }
    out.weights[truncation] = stick;
    out.atoms[truncation] = base.draw(rng);
    return out;
}

inline WeightedAtoms sample_dp(const DiscreteMeasure& base, double theta, int truncation,
                               RngStream& rng) {
    return sample_dp(MeasureSampler(base), theta, truncation, rng);
}

// Normalized random mixture sum X_i Z_i of n independent component draws with
// positive random weights.
inline WeightedAtoms sample_wn_general(
    const std::function<WeightedAtoms(RngStream&)>& component_sampler,
    const std::function<double(RngStream&)>& weight_sampler, int n, RngStream& rng) {
    if (n < 1) throw std::invalid_argument("sample_wn_general: n must be positive");
    std::vector<WeightedAtoms> parts;
    std::vector<double> raw(n);
    parts.reserve(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        raw[i] = weight_sampler(rng);
        if (!(raw[i] > 0.0))
            throw std::invalid_argument("sample_wn_general: weights must be positive");
        total += raw[i];
        parts.push_back(component_sampler(rng));
    }
    WeightedAtoms out;
    std::size_t atom_count = 0;
    for (const auto& p : parts) atom_count += p.atoms.size();
    out.atoms.reserve(atom_count);
    out.weights.reserve(atom_count);
    for (int i = 0; i < n; ++i) {
        const double scale = raw[i] / total;
        for (std::size_t k = 0; k < parts[i].atoms.size(); ++k) {
            out.atoms.push_back(parts[i].atoms[k]);
            out.weights.push_back(scale * parts[i].weights[k]);
        }
    }
    return out;
}

// Dirichlet posterior draw given observations: Beta(theta, n) mixture of a
// fresh DP draw and a flat-Dirichlet-weighted measure on the observations.
inline WeightedAtoms sample_posterior(const MeasureSampler& base, double theta,
                                      const std::vector<double>& observations,
                                      int truncation, RngStream& rng) {
    if (observations.empty())
        throw std::invalid_argument("sample_posterior: needs at least one observation");
    const int n = static_cast<int>(observations.size());
    const double u = rng.beta(theta, static_cast<double>(n));
    WeightedAtoms dp_part = sample_dp(base, theta, truncation, rng);

    std::vector<double> obs_w(observations.size());
    double total = 0.0;
    for (auto& w : obs_w) {
        w = rng.exponential();
        total += w;
    }

    WeightedAtoms out;
    out.atoms.reserve(dp_part.atoms.size() + observations.size());
    out.weights.reserve(dp_part.atoms.size() + observations.size());
    for (std::size_t k = 0; k < dp_part.atoms.size(); ++k) {
        out.atoms.push_back(dp_part.atoms[k]);
        out.weights.push_back(u * dp_part.weights[k]);
    }
    for (std::size_t k = 0; k < observations.size(); ++k) {
        out.atoms.push_back(observations[k]);
        out.weights.push_back((1.0 - u) * obs_w[k] / total);
    }
    return out;
}

inline WeightedAtoms sample_posterior(const DiscreteMeasure& base, double theta,
                                      const std::vector<double>& observations,
                                      int truncation, RngStream& rng) {
    return sample_posterior(MeasureSampler(base), theta, observations, truncation, rng);
}

inline double mean_functional(const WeightedAtoms& w) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.atoms.size(); ++i) s += w.weights[i] * w.atoms[i];
    return s;
}

template <typename F>
double mean_functional(const WeightedAtoms& w, F&& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.atoms.size(); ++i) s += w.weights[i] * f(w.atoms[i]);
    return s;
}

inline SimplexVector project(const WeightedAtoms& w, const Partition& partition) {
    std::vector<double> cells(partition.cell_count(), 0.0);
    for (std::size_t i = 0; i < w.atoms.size(); ++i)
        cells[partition.cell_of(w.atoms[i])] += w.weights[i];
    return SimplexVector(std::move(cells));
}

struct SampleRow {
    std::uint64_t replicate;
    int n;
    double value;
};

inline void write_samples_csv(std::ostream& os, const std::vector<SampleRow>& rows) {
    os << "replicate_id,n,functional_value\n";
    for (const auto& r : rows)
        os << r.replicate << ',' << r.n << ',' << r.value << '\n';
}

}  // namespace ldlab
