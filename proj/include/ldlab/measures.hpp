#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ldlab {

inline constexpr double kInputSumTolerance = 1e-9;   // accepted on construction
inline constexpr double kUnitSumTolerance = 1e-12;   // after renormalization
inline constexpr double kCutMatchTolerance = 1e-12;  // cut/atom coincidence

namespace detail {

inline void normalize_unit_sum(std::vector<double>& w, const char* what) {
    double total = 0.0;
    for (double v : w) {
        if (v < 0.0) throw std::invalid_argument(std::string(what) + ": negative weight");
        total += v;
    }
    if (std::fabs(total - 1.0) > kInputSumTolerance)
        throw std::invalid_argument(std::string(what) + ": weights must sum to 1");
    for (double& v : w) v /= total;
}

}  // namespace detail

// Probability vector on a finite index set: the image of a measure under a
// finite partition.
class SimplexVector {
  public:
    explicit SimplexVector(std::vector<double> coords) : coords_(std::move(coords)) {
        if (coords_.empty()) throw std::invalid_argument("SimplexVector: empty");
        detail::normalize_unit_sum(coords_, "SimplexVector");
    }

    std::size_t size() const { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    const std::vector<double>& coords() const { return coords_; }

  private:
    std::vector<double> coords_;
};

// Finite probability measure on [0,1]: strictly increasing support points with
// nonnegative masses summing to one.  Continuous measures enter as equal-mass
// grids (see grid()).
class DiscreteMeasure {
  public:
    DiscreteMeasure(std::vector<double> support, std::vector<double> mass)
        : support_(std::move(support)), mass_(std::move(mass)) {
        if (support_.empty() || support_.size() != mass_.size())
            throw std::invalid_argument("DiscreteMeasure: support/mass size mismatch");
        for (std::size_t i = 0; i < support_.size(); ++i) {
            if (support_[i] < 0.0 || support_[i] > 1.0)
                throw std::invalid_argument("DiscreteMeasure: support point outside [0,1]");
            if (i > 0 && !(support_[i] > support_[i - 1]))
                throw std::invalid_argument("DiscreteMeasure: support not strictly increasing");
        }
        detail::normalize_unit_sum(mass_, "DiscreteMeasure");
    }

    // Equal-mass midpoint discretization of Lebesgue measure on [0,1].
    static DiscreteMeasure grid(std::size_t n) {
        if (n == 0) throw std::invalid_argument("grid: n must be positive");
        std::vector<double> x(n), w(n, 1.0 / static_cast<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            x[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        return DiscreteMeasure(std::move(x), std::move(w));
    }

    static DiscreteMeasure point_mass(double x) {
        return DiscreteMeasure({x}, {1.0});
    }

    // Builds a measure from unordered, possibly repeated weighted points.
    // Points closer than the cut-match tolerance are merged.
    static DiscreteMeasure from_points(std::vector<std::pair<double, double>> pts) {
        if (pts.empty()) throw std::invalid_argument("from_points: empty");
        std::sort(pts.begin(), pts.end());
        std::vector<double> x, w;
        x.reserve(pts.size());
        w.reserve(pts.size());
        for (const auto& [p, m] : pts) {
            if (!x.empty() && p - x.back() <= kCutMatchTolerance) {
                w.back() += m;
            } else {
                x.push_back(p);
                w.push_back(m);
            }
        }
        return DiscreteMeasure(std::move(x), std::move(w));
    }

    std::size_t size() const { return support_.size(); }
    const std::vector<double>& support() const { return support_; }
    const std::vector<double>& mass() const { return mass_; }

    double mean() const {
        double m = 0.0;
        for (std::size_t i = 0; i < support_.size(); ++i) m += mass_[i] * support_[i];
        return m;
    }

    double min_support() const { return support_.front(); }
    double max_support() const { return support_.back(); }

  private:
    std::vector<double> support_;
    std::vector<double> mass_;
};

// Ordered interior cut points 0 < t_1 < ... < t_m < 1.  Induces the m+1 cells
// [0,t_1), [t_1,t_2), ..., [t_m,1]; an atom exactly at a cut belongs to the
// cell on its right.
class Partition {
  public:
    explicit Partition(std::vector<double> cuts) : cuts_(std::move(cuts)) {
        if (cuts_.empty()) throw std::invalid_argument("Partition: needs at least one cut");
        for (std::size_t i = 0; i < cuts_.size(); ++i) {
            if (!(cuts_[i] > 0.0 && cuts_[i] < 1.0))
                throw std::invalid_argument("Partition: cuts must lie in (0,1)");
            if (i > 0 && !(cuts_[i] > cuts_[i - 1]))
                throw std::invalid_argument("Partition: cuts not strictly increasing");
        }
    }

    std::size_t cut_count() const { return cuts_.size(); }
    std::size_t cell_count() const { return cuts_.size() + 1; }
    const std::vector<double>& cuts() const { return cuts_; }

    // Index of the cell containing x.
    std::size_t cell_of(double x) const {
        return static_cast<std::size_t>(
            std::upper_bound(cuts_.begin(), cuts_.end(), x) - cuts_.begin());
    }

  private:
    std::vector<double> cuts_;
};

inline SimplexVector project(const DiscreteMeasure& measure, const Partition& partition) {
    std::vector<double> cells(partition.cell_count(), 0.0);
    for (std::size_t i = 0; i < measure.size(); ++i)
        cells[partition.cell_of(measure.support()[i])] += measure.mass()[i];
    return SimplexVector(std::move(cells));
}

// true iff every cut of `coarse` appears among the cuts of `fine`
inline bool refine(const Partition& coarse, const Partition& fine) {
    for (double t : coarse.cuts()) {
        auto it = std::lower_bound(fine.cuts().begin(), fine.cuts().end(),
                                   t - kCutMatchTolerance);
        if (it == fine.cuts().end() || std::fabs(*it - t) > kCutMatchTolerance)
            return false;
    }
    return true;
}

namespace detail {

// Aligns two measures on the union of their supports; points within the
// cut-match tolerance are identified.
struct MergedSupport {
    std::vector<double> points;
    std::vector<double> mass_a;
    std::vector<double> mass_b;
};

inline MergedSupport merge_support(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    MergedSupport out;
    const auto &xa = a.support(), &xb = b.support();
    const auto &wa = a.mass(), &wb = b.mass();
    std::size_t i = 0, j = 0;
    while (i < xa.size() || j < xb.size()) {
        if (j == xb.size() || (i < xa.size() && xa[i] < xb[j] - kCutMatchTolerance)) {
            out.points.push_back(xa[i]);
            out.mass_a.push_back(wa[i]);
            out.mass_b.push_back(0.0);
            ++i;
        } else if (i == xa.size() || xb[j] < xa[i] - kCutMatchTolerance) {
            out.points.push_back(xb[j]);
            out.mass_a.push_back(0.0);
            out.mass_b.push_back(wb[j]);
            ++j;
        } else {
            out.points.push_back(xa[i]);
            out.mass_a.push_back(wa[i]);
            out.mass_b.push_back(wb[j]);
            ++i;
            ++j;
        }
    }
    return out;
}

inline double l1_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
    return s;
}

}  // namespace detail

// Total variation in the L1 convention: rho_tv = sum |a_i - b_i|, range [0,2].
inline double tv_distance(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    const auto merged = detail::merge_support(a, b);
    return detail::l1_diff(merged.mass_a, merged.mass_b);
}

inline double tv_distance(const SimplexVector& a, const SimplexVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("tv_distance: length mismatch");
    return detail::l1_diff(a.coords(), b.coords());
}

// Sum of absolute cell-probability differences of two projected measures.
inline double partition_distance(const SimplexVector& a, const SimplexVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("partition_distance: length mismatch");
    return detail::l1_diff(a.coords(), b.coords());
}

}  // namespace ldlab
