#pragma once

// Monte Carlo time-constant estimation.
//
// Replication i of a run with master seed s uses the field seed mix(s, i), so
// estimates are bit-identical across thread counts and can be compared
// replication-by-replication across environments built on the same seed.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "ifpp/env.hpp"
#include "ifpp/errors.hpp"
#include "ifpp/fpp.hpp"
#include "ifpp/parallel.hpp"
#include "ifpp/rng.hpp"

namespace ifpp {

struct Direction {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Direction&, const Direction&) = default;
};

inline constexpr Direction kE1{1.0, 0.0};
inline constexpr Direction kE2{0.0, 1.0};

/// Below this many replications the normal approximation is flagged.
inline constexpr std::int64_t kRecommendedReps = 30;

struct Estimate {
    double point = 0.0;
    double std_error = 0.0;  ///< sample standard deviation / sqrt(reps)
    std::int64_t reps = 0;
    std::int64_t n = 0;
    std::optional<double> certified_upper;
    double confidence = 0.95;
    std::uint64_t seed = 0;
    Direction direction;
    std::vector<double> samples;  ///< T(0, n x) / n per replication, by index

    bool low_reps() const noexcept { return reps < kRecommendedReps; }
};

/// Welford accumulator with Chan's pairwise merge.
struct RunningStats {
    double count = 0.0, mean = 0.0, m2 = 0.0;

    void push(double x) noexcept {
        count += 1.0;
        const double d = x - mean;
        mean += d / count;
        m2 += d * (x - mean);
    }

    static RunningStats merge(const RunningStats& a, const RunningStats& b) noexcept {
        if (a.count == 0.0) return b;
        if (b.count == 0.0) return a;
        RunningStats out;
        out.count = a.count + b.count;
        const double d = b.mean - a.mean;
        out.mean = a.mean + d * (b.count / out.count);
        out.m2 = a.m2 + b.m2 + d * d * (a.count * b.count / out.count);
        return out;
    }

    double variance() const noexcept { return count > 1.0 ? m2 / (count - 1.0) : 0.0; }
};

/// Pairwise tree reduction: the combination order depends only on the sample count.
inline RunningStats pairwise_stats(const std::vector<double>& xs, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        RunningStats s;
        for (auto i = lo; i < hi; ++i) s.push(xs[i]);
        return s;
    }
    const auto mid = lo + (hi - lo) / 2;
    return RunningStats::merge(pairwise_stats(xs, lo, mid), pairwise_stats(xs, mid, hi));
}

/// One-sided normal quantile z with P(Z <= z) = confidence.
inline double upper_quantile(double confidence) {
    if (!(confidence > 0.0 && confidence < 1.0)) fail(ErrorKind::Domain, "confidence must lie in (0,1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), confidence);
}

struct EstimateOptions {
    unsigned threads = 0;  ///< 0: hardware concurrency
    std::int64_t margin_cap = kDefaultMarginCap;
    double confidence = 0.95;
};

inline Site lattice_target(Direction x, std::int64_t n) {
    const double tx = x.x * static_cast<double>(n), ty = x.y * static_cast<double>(n);
    const double rx = std::round(tx), ry = std::round(ty);
    if (std::abs(tx - rx) > 1e-9 || std::abs(ty - ry) > 1e-9)
        fail(ErrorKind::Domain, "n * direction must have integer coordinates");
    return {static_cast<std::int64_t>(rx), static_cast<std::int64_t>(ry)};
}

/// Collects per-replication samples into an Estimate.
inline Estimate summarize(std::vector<double> samples, std::int64_t n, std::uint64_t seed, Direction x,
                          double confidence) {
    Estimate e;
    const auto st = pairwise_stats(samples, 0, samples.size());
    e.point = st.mean;
    e.std_error = std::sqrt(st.variance() / st.count);
    e.reps = static_cast<std::int64_t>(samples.size());
    e.n = n;
    e.confidence = confidence;
    e.seed = seed;
    e.direction = x;
    e.samples = std::move(samples);
    return e;
}

/// Sets certified_upper = point + z * stderr. Only valid where E T(0, n x)
/// is subadditive in n, so that the limit is an infimum of a_n / n.
inline void certify_upper(Estimate& e) { e.certified_upper = e.point + upper_quantile(e.confidence) * e.std_error; }

/// Replicated passage times T(0, n x)/n over fields built by `make_field(seed_i)`.
template <class MakeField>
Estimate replicate(MakeField&& make_field, Direction x, std::int64_t n, std::int64_t reps, std::uint64_t seed,
                   const EstimateOptions& opt, const Restriction& r = restriction::None{}) {
    if (n < 1) fail(ErrorKind::Domain, "n must be positive");
    if (reps < 2) fail(ErrorKind::Domain, "at least two replications are required");
    if (!(opt.confidence > 0.0 && opt.confidence < 1.0)) fail(ErrorKind::Domain, "confidence must lie in (0,1)");
    const Site target = lattice_target(x, n);
    std::vector<double> samples(static_cast<std::size_t>(reps));
    parallel_for(samples.size(), opt.threads, [&](std::size_t i) {
        const auto s = rng::replication_seed(seed, i);
        const auto field = make_field(s);
        samples[i] = passage_time_auto(field, Site{0, 0}, target, r, opt.margin_cap, s).time / static_cast<double>(n);
    });
    return summarize(std::move(samples), n, seed, x, opt.confidence);
}

inline Estimate radial_estimate(const EnvSpec& spec, Direction x, std::int64_t n, std::int64_t reps, std::uint64_t seed,
                                const EstimateOptions& opt = {}) {
    return replicate([&](std::uint64_t s) { return WeightField(spec, s); }, x, n, reps, seed, opt);
}

/// Estimate of nu = mubar(e2) with a certified upper confidence bound:
/// a_n = E T(0, n e2) is subadditive by vertical translation invariance, so
/// nu = inf_n a_n / n <= a_n / n, and truncation only increases times.
inline Estimate axis_constant(const EnvSpec& spec, std::int64_t n, std::int64_t reps, std::uint64_t seed,
                              const EstimateOptions& opt = {}) {
    auto e = radial_estimate(spec, kE2, n, reps, seed, opt);
    certify_upper(e);
    return e;
}

inline bool is_axis_direction(Direction x) {
    return (x.y == 0.0 && std::abs(x.x) == 1.0) || (x.x == 0.0 && std::abs(x.y) == 1.0);
}

inline Estimate homogeneous_mu(const Dist& f, Direction x, std::int64_t n, std::int64_t reps, std::uint64_t seed,
                               const EstimateOptions& opt = {}) {
    auto e = radial_estimate(EnvSpec(Homogeneous{f}), x, n, reps, seed, opt);
    if (is_axis_direction(x)) certify_upper(e);
    return e;
}

struct SweepEntry {
    double angle = 0.0;      ///< requested angle, radians
    Direction unit;          ///< unit vector of the lattice direction actually used
    Site target;             ///< n x
    double scale = 1.0;      ///< Euclidean length of x
    Estimate estimate;       ///< of mubar(x)

    /// 1-homogeneous rescaling: estimate of mubar at the unit vector.
    double unit_value() const noexcept { return estimate.point / scale; }
    double unit_stderr() const noexcept { return estimate.std_error / scale; }
};

/// Estimates along m evenly spaced angles; each angle uses the lattice
/// direction round(n (cos, sin)) / n.
inline std::vector<SweepEntry> directional_sweep(const EnvSpec& spec, std::int64_t m, std::int64_t n, std::int64_t reps,
                                                 std::uint64_t seed, const EstimateOptions& opt = {}) {
    if (m < 4) fail(ErrorKind::Domain, "a sweep needs at least four directions");
    std::vector<SweepEntry> out;
    for (std::int64_t j = 0; j < m; ++j) {
        SweepEntry s;
        s.angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
        const auto nd = static_cast<double>(n);
        s.target = {static_cast<std::int64_t>(std::llround(nd * std::cos(s.angle))),
                    static_cast<std::int64_t>(std::llround(nd * std::sin(s.angle)))};
        const Direction x{static_cast<double>(s.target.x) / nd, static_cast<double>(s.target.y) / nd};
        s.scale = std::hypot(x.x, x.y);
        s.unit = {x.x / s.scale, x.y / s.scale};
        s.estimate = radial_estimate(spec, x, n, reps, seed, opt);
        out.push_back(std::move(s));
    }
    return out;
}

/// Standard error of the difference of two independent estimates.
inline double joint_stderr(const Estimate& a, const Estimate& b) {
    return std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
}

}  // namespace ifpp
