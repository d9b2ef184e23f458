#pragma once

#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ldlab/ldp_lab.hpp"
#include "ldlab/measures.hpp"

namespace ldlab {

// Measure file schema:
//   {"kind":"discrete","support":[x...],"mass":[w...]}
//   {"kind":"grid","n":N}   -- uniform N-point discretization of Lebesgue
inline DiscreteMeasure measure_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "grid") {
        const auto n = j.at("n").get<std::int64_t>();
        if (n < 1) throw std::invalid_argument("measure file: grid n must be positive");
        return DiscreteMeasure::grid(static_cast<std::size_t>(n));
    }
    if (kind == "discrete") {
        return DiscreteMeasure(j.at("support").get<std::vector<double>>(),
                               j.at("mass").get<std::vector<double>>());
    }
    throw std::invalid_argument("measure file: unknown kind '" + kind + "'");
}

inline nlohmann::json measure_to_json(const DiscreteMeasure& m) {
    return {{"kind", "discrete"}, {"support", m.support()}, {"mass", m.mass()}};
}

inline DiscreteMeasure load_measure(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open measure file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("malformed measure file " + path + ": " + e.what());
    }
    return measure_from_json(j);
}

inline nlohmann::json rate_estimate_header(const RateEstimate& est) {
    return {{"family", to_string(est.family)}, {"method", est.method},
            {"theory", est.theory},           {"cuts", est.cuts},
            {"target", est.target},           {"delta", est.delta},
            {"seed", est.seed},               {"replicates", est.replicates},
            {"workers", est.workers}};
}

// CSV with a one-line JSON header comment carrying the scenario.
inline void write_rate_csv(std::ostream& os, const RateEstimate& est) {
    os << "# " << rate_estimate_header(est).dump() << '\n';
    os << "n,prob,std_err,log_rate\n";
    os.precision(17);
    for (std::size_t i = 0; i < est.n_values.size(); ++i) {
        os << est.n_values[i] << ',' << est.probs[i] << ',' << est.std_errs[i] << ',';
        if (est.zero_hits[i])
            os << "nan";
        else
            os << est.log_rates[i];
        os << '\n';
    }
}

}  // namespace ldlab
