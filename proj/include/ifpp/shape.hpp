#pragma once

// Limit-shape calculus for the half-plane model: the variational formula for
// the time constant, the convex-hull description of the shape, empirical
// growth shapes, and the gadget environment producing a pyramid on the axis.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "ifpp/dist.hpp"
#include "ifpp/env.hpp"
#include "ifpp/errors.hpp"
#include "ifpp/estimate.hpp"
#include "ifpp/fpp.hpp"
#include "ifpp/geometry.hpp"

namespace ifpp {

/// A 1-homogeneous, symmetric directional evaluator x -> mu(x) >= 0.
class Seminorm {
public:
    /// c * |x|_1, the time constant of a point mass c.
    static Seminorm l1(double c) {
        if (!(c >= 0.0)) fail(ErrorKind::Domain, "seminorm scale must be >= 0");
        auto ball = c > 0.0 ? std::optional<Polygon>(convex_hull({{1 / c, 0}, {0, 1 / c}, {-1 / c, 0}, {0, -1 / c}}))
                            : std::nullopt;
        return Seminorm([c](Point x) { return c * (std::abs(x.x) + std::abs(x.y)); }, std::move(ball), true);
    }

    static Seminorm zero() { return Seminorm([](Point) { return 0.0; }, std::nullopt, true); }

    /// Gauge of a centrally symmetric convex polygon containing the origin
    /// in its interior: mu(x) = max_i <n_i, x> / <n_i, v_i> over edges.
    static Seminorm gauge(const Polygon& unit_ball) {
        const auto& v = unit_ball.vertices();
        if (v.size() < 3) fail(ErrorKind::Domain, "gauge needs a polygon with interior");
        std::vector<std::pair<Point, double>> facets;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Point a = v[i], b = v[(i + 1) % v.size()];
            const Point n{b.y - a.y, a.x - b.x};
            const double off = dot(n, a);
            if (!(off > 0.0)) fail(ErrorKind::Domain, "gauge polygon must contain the origin in its interior");
            facets.push_back({n, off});
        }
        for (const auto& p : v)
            if (!unit_ball.contains(-1.0 * p, 1e-9)) fail(ErrorKind::Domain, "gauge polygon must be centrally symmetric");
        return Seminorm(
            [facets = std::move(facets)](Point x) {
                double m = 0.0;
                for (const auto& [n, off] : facets) m = std::max(m, dot(n, x) / off);
                return m;
            },
            unit_ball, true);
    }

    /// Piecewise-linear interpolation in angle of unit-direction values
    /// (angle in radians, value), symmetrized under x -> -x and extended
    /// 1-homogeneously.
    static Seminorm interpolated(std::vector<std::pair<double, double>> samples) {
        if (samples.size() < 2) fail(ErrorKind::Domain, "interpolation needs at least two directions");
        for (auto& [a, v] : samples) {
            a = std::fmod(a, 2 * std::numbers::pi);
            if (a < 0) a += 2 * std::numbers::pi;
            if (!(v >= 0.0)) fail(ErrorKind::Domain, "seminorm samples must be >= 0");
        }
        std::sort(samples.begin(), samples.end());
        auto raw = [samples](double th) {
            th = std::fmod(th, 2 * std::numbers::pi);
            if (th < 0) th += 2 * std::numbers::pi;
            const auto n = samples.size();
            std::size_t hi = 0;
            while (hi < n && samples[hi].first <= th) ++hi;
            const auto& a = samples[(hi + n - 1) % n];
            const auto& b = samples[hi % n];
            double span = b.first - a.first;
            double off = th - a.first;
            if (span <= 0.0) span += 2 * std::numbers::pi;
            if (off < 0.0) off += 2 * std::numbers::pi;
            return a.second + (b.second - a.second) * (off / span);
        };
        return Seminorm(
            [raw](Point x) {
                const double r = norm(x);
                if (r == 0.0) return 0.0;
                const double th = std::atan2(x.y, x.x);
                return r * 0.5 * (raw(th) + raw(th + std::numbers::pi));
            },
            std::nullopt, false);
    }

    double operator()(Point x) const { return f_(x); }

    bool identically_zero() const { return f_({1, 0}) == 0.0 && f_({0, 1}) == 0.0; }
    bool exact() const noexcept { return exact_; }

    /// {x : mu(x) <= 1}; exact for l1 and gauge backends, otherwise the hull
    /// of `rays` radial samples. Requires mu > 0 away from the origin.
    Polygon unit_ball(int rays = kSupportAngles) const {
        if (ball_) return *ball_;
        std::vector<Point> pts;
        for (int i = 0; i < rays; ++i) {
            const double th = 2 * std::numbers::pi * i / rays;
            const Point u{std::cos(th), std::sin(th)};
            const double m = f_(u);
            if (!(m > 0.0)) fail(ErrorKind::UnboundedShape, "seminorm vanishes in some direction");
            pts.push_back((1.0 / m) * u);
        }
        return convex_hull(std::move(pts));
    }

private:
    Seminorm(std::function<double(Point)> f, std::optional<Polygon> ball, bool exact)
        : f_(std::move(f)), ball_(std::move(ball)), exact_(exact) {}

    std::function<double(Point)> f_;
    std::optional<Polygon> ball_;
    bool exact_;
};

/// Evaluates mubar(x) = min_a [ |a| nu + mu_side(x - a e2) ], where the side is
/// the half-plane containing x (x1 < 0 uses mu_minus). The objective is convex
/// in a, so golden-section search on a bracket from the coercivity bound
/// finds the minimum.
inline double mubar_eval(const Seminorm& mu_minus, const Seminorm& mu_plus, double nu, Point x) {
    if (!(nu >= 0.0)) fail(ErrorKind::Domain, "axis constant must be >= 0");
    const Seminorm& mu = x.x < 0.0 ? mu_minus : mu_plus;
    const double mu_e2 = mu({0, 1});
    const Point horizontal{x.x, 0.0};
    // mu(e2) = 0: every vertical shift is free for mu, so a = 0 is optimal.
    if (mu_e2 == 0.0) return mu(horizontal);
    auto objective = [&](double a) { return std::abs(a) * nu + mu({x.x, x.y - a}); };
    // At a minimizer, |x2 - a| mu(e2) - mu(x1 e1) <= objective(a) <= objective(x2).
    const double reach = (std::abs(x.y) * nu + 2.0 * mu(horizontal)) / mu_e2;
    double lo = x.y - reach - 1.0, hi = x.y + reach + 1.0;
    lo = std::min(lo, -1.0);
    hi = std::max(hi, 1.0);
    constexpr double kInvPhi = 0.6180339887498949;
    double c = hi - kInvPhi * (hi - lo), d = lo + kInvPhi * (hi - lo);
    double fc = objective(c), fd = objective(d);
    for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(x.y) + reach); ++it) {
        if (fc <= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - kInvPhi * (hi - lo);
            fc = objective(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + kInvPhi * (hi - lo);
            fd = objective(d);
        }
    }
    // Kinks of piecewise-linear seminorms often sit at a = 0 or a = x2.
    return std::min({fc, fd, objective(0.5 * (lo + hi)), objective(0.0), objective(x.y)});
}

/// convex hull[ W- u W+ u {0} x [-1/nu, 1/nu] ].
inline Polygon hull_shape(const Polygon& w_minus, const Polygon& w_plus, double nu) {
    if (!(nu > 0.0)) fail(ErrorKind::Domain, "axis constant must be > 0");
    if (!w_minus.convex(1e-9) || !w_plus.convex(1e-9)) fail(ErrorKind::Domain, "half-shapes must be convex");
    constexpr double kSideTol = 1e-9;
    for (const auto& p : w_minus.vertices())
        if (p.x > kSideTol) fail(ErrorKind::Domain, "W- must lie in the closed left half-plane");
    for (const auto& p : w_plus.vertices())
        if (p.x < -kSideTol) fail(ErrorKind::Domain, "W+ must lie in the closed right half-plane");
    std::vector<Point> pts = w_minus.vertices();
    pts.insert(pts.end(), w_plus.vertices().begin(), w_plus.vertices().end());
    pts.push_back({0.0, 1.0 / nu});
    pts.push_back({0.0, -1.0 / nu});
    return convex_hull(std::move(pts));
}

/// Restriction of a seminorm's unit ball to x <= 0 (side < 0) or x >= 0.
inline Polygon half_shape(const Seminorm& mu, int side, int rays = kSupportAngles) {
    const Polygon ball = mu.unit_ball(rays);
    return side < 0 ? clip_half_plane(ball, {1, 0}, 0.0) : clip_half_plane(ball, {-1, 0}, 0.0);
}

/// Sublevel set {mubar <= 1} traced along `rays` directions.
inline Polygon mubar_sublevel(const Seminorm& mu_minus, const Seminorm& mu_plus, double nu, int rays = kSupportAngles) {
    std::vector<Point> pts;
    for (int i = 0; i < rays; ++i) {
        const double th = 2 * std::numbers::pi * i / rays;
        const Point u{std::cos(th), std::sin(th)};
        const double m = mubar_eval(mu_minus, mu_plus, nu, u);
        if (!(m > 0.0)) fail(ErrorKind::UnboundedShape, "time constant vanishes in some direction");
        pts.push_back((1.0 / m) * u);
    }
    return convex_hull(std::move(pts));
}

/// max{F-(0), F+(0)} < 1/2 (critical bond percolation on Z^2). A single axis
/// or column family cannot percolate unless its weight is a.s. zero.
inline bool shape_bounded(const EnvSpec& spec) {
    constexpr double kPc = 0.5;
    return std::visit(
        [](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Homogeneous>) return s.f.cdf(0.0) < kPc;
            else if constexpr (std::is_same_v<T, HalfPlane>) return std::max(s.minus.cdf(0.0), s.plus.cdf(0.0)) < kPc;
            else if constexpr (std::is_same_v<T, HalfPlaneAxis>)
                return std::max(s.minus.cdf(0.0), s.plus.cdf(0.0)) < kPc && s.axis.cdf(0.0) < 1.0;
            else return s.f.cdf(0.0) < kPc && (s.eps == 0.0 || s.f0.cdf(0.0) < kPc);
        },
        spec.variant());
}

/// Convex hull of the growth set {z : T(0,z) <= t}, scaled by 1/t. The box
/// starts at half-width max(16, ceil(t)) and doubles up to `half_width_cap`.
inline Polygon empirical_shape(const EnvSpec& spec, double t, std::uint64_t seed, std::int64_t half_width_cap = 4096) {
    if (!(t > 0.0)) fail(ErrorKind::Domain, "growth time must be > 0");
    if (!shape_bounded(spec)) fail(ErrorKind::UnboundedShape, "F(0) >= 1/2 on a half-plane: the limit shape is unbounded");
    const WeightField field(spec, seed);
    const auto initial = std::max<std::int64_t>(16, static_cast<std::int64_t>(std::ceil(t)));
    const auto pts = growth_set_auto(field, t, initial, half_width_cap);
    std::vector<Point> scaled_pts;
    scaled_pts.reserve(pts.size());
    for (const auto& g : pts) scaled_pts.push_back({static_cast<double>(g.site.x) / t, static_cast<double>(g.site.y) / t});
    return convex_hull(std::move(scaled_pts));
}

struct GadgetSpec {
    double y = 0.2;       ///< low weight of gadget edges
    double p = 0.4;       ///< probability of the low weight
    std::int64_t K = 1;   ///< block height
    double z_high = 4.0;  ///< high weight of gadget edges

    /// Throws InvalidGadget unless y, p in (0,1), K >= 1, z_high > 1 and (K+2) y < K.
    void validate() const {
        if (!(y > 0.0 && y < 1.0)) fail(ErrorKind::InvalidGadget, "y must lie in (0,1)");
        if (!(p > 0.0 && p < 1.0)) fail(ErrorKind::InvalidGadget, "p must lie in (0,1)");
        if (K < 1) fail(ErrorKind::InvalidGadget, "K must be a positive integer");
        if (!(z_high > 1.0)) fail(ErrorKind::InvalidGadget, "z_high must exceed 1");
        if (!(static_cast<double>(K + 2) * y < static_cast<double>(K)))
            fail(ErrorKind::InvalidGadget, "(K+2) y < K is violated");
    }

    Dist gadget_dist() const { return Dist::atoms({{y, p}, {z_high, 1.0 - p}}); }
};

/// Limit of the constructed-path bound: 1 + p^(K+2) ((K+2) y - K) / K.
inline double gadget_bound(const GadgetSpec& g) {
    g.validate();
    const double k = static_cast<double>(g.K);
    return 1.0 + std::pow(g.p, k + 2.0) * ((k + 2.0) * g.y - k) / k;
}

/// Half-plane environment carrying the gadget. By default the gadget law
/// sits on the left (where the edge set of each block lives) and the point
/// mass 1 covers the axis and right half-plane, so the axis fallback costs
/// exactly K per block. `mirror` swaps the two laws.
inline EnvSpec gadget_env(const GadgetSpec& g, bool mirror = false) {
    g.validate();
    if (mirror) return HalfPlane{Dist::point(1.0), g.gadget_dist()};
    return HalfPlane{g.gadget_dist(), Dist::point(1.0)};
}

/// Edges of block i: the two bridges {(-1,iK),(0,iK)}, {(-1,(i+1)K),(0,(i+1)K)}
/// and the K vertical edges of column -1 between them.
inline std::vector<Edge> gadget_block_edges(const GadgetSpec& g, std::int64_t block) {
    const auto base = block * g.K;
    std::vector<Edge> out;
    out.emplace_back(Site{-1, base}, Site{0, base});
    for (std::int64_t k = 0; k < g.K; ++k) out.emplace_back(Site{-1, base + k}, Site{-1, base + k + 1});
    out.emplace_back(Site{-1, base + g.K}, Site{0, base + g.K});
    return out;
}

struct GadgetPath {
    std::vector<Site> sites;     ///< from the origin to (0, jK)
    double cost = 0.0;           ///< sum of realized edge weights
    std::int64_t detours = 0;    ///< N, the number of blocks whose gadget edges are all <= y
};

/// The concatenated path through j blocks: detour through column -1 when
/// every gadget edge of the block weighs at most y, otherwise go up the axis.
template <WeightSource W>
GadgetPath gadget_path(const GadgetSpec& g, const W& field, std::int64_t blocks) {
    GadgetPath out;
    out.sites.push_back({0, 0});
    for (std::int64_t i = 0; i < blocks; ++i) {
        const auto base = i * g.K;
        const auto edges = gadget_block_edges(g, i);
        const bool low = std::all_of(edges.begin(), edges.end(), [&](const Edge& e) { return field.weight(e) <= g.y; });
        if (low) {
            ++out.detours;
            for (const auto& e : edges) out.cost += field.weight(e);
            for (std::int64_t k = 0; k <= g.K; ++k) out.sites.push_back({-1, base + k});
            out.sites.push_back({0, base + g.K});
        } else {
            for (std::int64_t k = 0; k < g.K; ++k) {
                out.cost += field.weight(Edge({0, base + k}, {0, base + k + 1}));
                out.sites.push_back({0, base + k + 1});
            }
        }
    }
    return out;
}

struct PyramidVerdict {
    Estimate axis;                 ///< nu = mubar(e2), with certified_upper
    double exact_side_axis = 1.0;  ///< axis constant of the deterministic side, exact
    std::optional<Estimate> random_side_axis;  ///< statistical only; no lower-bound certificate
    std::optional<double> analytic_bound;      ///< gadget_bound when run on a gadget
    bool detected = false;                     ///< certified_upper < exact_side_axis
    /// nu <= min{mu-(e2), mu+(e2)}, checked on point estimates with 3 joint stderr slack.
    bool domination_consistent = true;
    bool mirror = false;
};

/// Certifies mubar(e2) < exact_side_axis by the one-sided subadditivity bound.
inline PyramidVerdict detect_pyramid(const EnvSpec& spec, double exact_side_axis, const Dist* random_side,
                                     std::int64_t n, std::int64_t reps, std::uint64_t seed,
                                     const EstimateOptions& opt = {}) {
    PyramidVerdict v;
    v.axis = axis_constant(spec, n, reps, seed, opt);
    v.exact_side_axis = exact_side_axis;
    v.detected = *v.axis.certified_upper < exact_side_axis;
    double side_min = exact_side_axis, slack = 3.0 * v.axis.std_error;
    if (random_side) {
        v.random_side_axis = homogeneous_mu(*random_side, kE2, n, reps, seed, opt);
        side_min = std::min(side_min, v.random_side_axis->point);
        slack = 3.0 * joint_stderr(v.axis, *v.random_side_axis);
    }
    v.domination_consistent = v.axis.point <= side_min + slack;
    return v;
}

inline PyramidVerdict pyramid_test(const GadgetSpec& g, std::int64_t n, std::int64_t reps, std::uint64_t seed,
                                   const EstimateOptions& opt = {}, bool mirror = false) {
    const auto spec = gadget_env(g, mirror);
    const Dist side = g.gadget_dist();
    auto v = detect_pyramid(spec, 1.0, &side, n, reps, seed, opt);
    v.analytic_bound = gadget_bound(g);
    v.mirror = mirror;
    return v;
}

}  // namespace ifpp
