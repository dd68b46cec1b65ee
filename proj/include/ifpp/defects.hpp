#pragma once

// Randomly placed columnar defects: each column is defected independently
// with probability eps, and the defected columns (plus horizontal edges
// joining two defected columns) carry F0 instead of F. Both layers are
// resampled per replication.

#include <cstdint>
#include <optional>
#include <vector>

#include "ifpp/dist.hpp"
#include "ifpp/env.hpp"
#include "ifpp/estimate.hpp"
#include "ifpp/fpp.hpp"

namespace ifpp {

/// Monte Carlo mean of T_eta(0, n e2) / n.
inline Estimate defect_estimate(const Dist& f, const Dist& f0, double eps, std::int64_t n, std::int64_t reps,
                                std::uint64_t seed, const EstimateOptions& opt = {}) {
    const EnvSpec spec(RandomColumns{f, f0, eps});
    return radial_estimate(spec, kE2, n, reps, seed, opt);
}

/// Homogeneous-F0 axis estimate restricted to the cylinder |x| <= K.
inline Estimate cylinder_estimate(const Dist& f0, std::int64_t half_width, std::int64_t n, std::int64_t reps,
                                  std::uint64_t seed, const EstimateOptions& opt = {}) {
    const Restriction r = cylinder(half_width);
    const EnvSpec spec(Homogeneous{f0});
    return replicate([&](std::uint64_t s) { return WeightField(spec, s); }, kE2, n, reps, seed, opt, r);
}

struct DefectReport {
    double epsilon = 0.0;
    Estimate estimate;    ///< T_eta(0, n e2) / n
    Estimate mu_f_axis;   ///< homogeneous F, same seeds
    Estimate mu_f0_axis;  ///< homogeneous F0, same seeds
    std::optional<Estimate> cylinder;

    bool hypothesis_met = false;          ///< F0 more variable than F
    bool stochastically_ordered = false;  ///< F0^{-1} <= F^{-1} pointwise
    /// Ordered case: T_F0 <= T_eta <= T_F in every replication.
    std::optional<bool> sandwich_exact;
    /// E T_eta <= E T_F within 3 joint stderr.
    bool upper_means_ok = false;
    /// mu_F0(e2) estimate <= defect estimate within 3 joint stderr.
    bool lower_means_ok = false;
};

inline DefectReport defect_sandwich(const Dist& f, const Dist& f0, double eps, std::int64_t n, std::int64_t reps,
                                    std::uint64_t seed, const EstimateOptions& opt = {},
                                    std::optional<std::int64_t> cylinder_half_width = std::nullopt) {
    DefectReport r;
    r.epsilon = eps;
    r.stochastically_ordered = stochastically_le(f0, f);
    // Stochastic order implies the increasing-concave order, which is all
    // that can be decided for continuous pairs.
    r.hypothesis_met = (f.is_discrete() && f0.is_discrete()) ? more_variable(f0, f) : r.stochastically_ordered;
    r.estimate = defect_estimate(f, f0, eps, n, reps, seed, opt);
    r.mu_f_axis = homogeneous_mu(f, kE2, n, reps, seed, opt);
    r.mu_f0_axis = homogeneous_mu(f0, kE2, n, reps, seed, opt);
    if (cylinder_half_width) r.cylinder = cylinder_estimate(f0, *cylinder_half_width, n, reps, seed, opt);

    if (r.stochastically_ordered) {
        bool ok = true;
        for (std::size_t i = 0; i < r.estimate.samples.size(); ++i) {
            const double t = r.estimate.samples[i];
            ok = ok && r.mu_f0_axis.samples[i] <= t && t <= r.mu_f_axis.samples[i];
        }
        r.sandwich_exact = ok;
    }
    r.upper_means_ok = r.estimate.point <= r.mu_f_axis.point + 3.0 * joint_stderr(r.estimate, r.mu_f_axis);
    r.lower_means_ok = r.mu_f0_axis.point <= r.estimate.point + 3.0 * joint_stderr(r.estimate, r.mu_f0_axis);
    return r;
}

struct EpsilonPoint {
    double epsilon;
    Estimate estimate;
};

/// defect_estimate over a grid of densities, all on the same master seed.
/// With a shared seed the defect sets are nested (eta_x = [u_x < eps]).
inline std::vector<EpsilonPoint> epsilon_sweep(const Dist& f, const Dist& f0, const std::vector<double>& eps_grid,
                                               std::int64_t n, std::int64_t reps, std::uint64_t seed,
                                               const EstimateOptions& opt = {}) {
    std::vector<EpsilonPoint> out;
    for (double eps : eps_grid) out.push_back({eps, defect_estimate(f, f0, eps, n, reps, seed, opt)});
    return out;
}

}  // namespace ifpp
