#pragma once

// Exact passage times on finite boxes of Z^2.
//
// All routines are templates over a weight source (anything with
// `double weight(const Edge&) const`), normally a WeightField. Each call owns
// its scratch arrays; the source is only read.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <variant>
#include <vector>

#include "ifpp/env.hpp"
#include "ifpp/errors.hpp"

namespace ifpp {

template <class W>
concept WeightSource = requires(const W& w, const Edge& e) {
    { w.weight(e) } -> std::convertible_to<double>;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Box {
    std::int64_t x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;

    static Box make(std::int64_t x_lo, std::int64_t x_hi, std::int64_t y_lo, std::int64_t y_hi) {
        if (x_lo > x_hi || y_lo > y_hi) fail(ErrorKind::Domain, "box bounds are inverted");
        return {x_lo, x_hi, y_lo, y_hi};
    }
    /// [-r, r]^2
    static Box square(std::int64_t r) { return make(-r, r, -r, r); }

    bool contains(Site s) const noexcept { return s.x >= x_lo && s.x <= x_hi && s.y >= y_lo && s.y <= y_hi; }
    std::int64_t width() const noexcept { return x_hi - x_lo + 1; }
    std::int64_t height() const noexcept { return y_hi - y_lo + 1; }
    std::int64_t sites() const noexcept { return width() * height(); }

    /// Row-major in x then y, so index order equals lexicographic site order.
    std::int64_t index(Site s) const noexcept { return (s.x - x_lo) * height() + (s.y - y_lo); }
    Site site(std::int64_t i) const noexcept { return {x_lo + i / height(), y_lo + i % height()}; }

    friend bool operator==(const Box&, const Box&) = default;
};

namespace restriction {
struct None {};
/// Edges with at least one endpoint at x >= 1 (drops the axis and the left half-plane).
struct RightHalf {};
/// Edges with at least one endpoint at x <= -1.
struct LeftHalf {};
/// Sites with |x| <= half_width.
struct Cylinder {
    std::int64_t half_width;
};
}  // namespace restriction

using Restriction = std::variant<restriction::None, restriction::RightHalf, restriction::LeftHalf, restriction::Cylinder>;

inline Restriction cylinder(std::int64_t half_width) {
    if (half_width < 1) fail(ErrorKind::Domain, "cylinder half-width must be >= 1");
    return restriction::Cylinder{half_width};
}

inline bool admissible(const Restriction& r, const Edge& e) {
    return std::visit(
        [&](const auto& v) -> bool {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, restriction::None>) return true;
            else if constexpr (std::is_same_v<T, restriction::RightHalf>) return e.b().x >= 1;
            else if constexpr (std::is_same_v<T, restriction::LeftHalf>) return e.a().x <= -1;
            else return std::abs(e.a().x) <= v.half_width && std::abs(e.b().x) <= v.half_width;
        },
        r);
}

inline bool admissible(const Restriction& r, Site s) {
    return std::visit(
        [&](const auto& v) -> bool {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, restriction::None>) return true;
            else if constexpr (std::is_same_v<T, restriction::RightHalf>) return s.x >= 0;
            else if constexpr (std::is_same_v<T, restriction::LeftHalf>) return s.x <= 0;
            else return std::abs(s.x) <= v.half_width;
        },
        r);
}

struct PathResult {
    double time = kInf;
    std::vector<Site> geodesic;  ///< from u to v inclusive
    bool exact = false;          ///< box value certified equal to the full-lattice value
};

inline constexpr Site kNeighbourSteps[4] = {{-1, 0}, {0, -1}, {0, 1}, {1, 0}};

/// Label-settling shortest-path state over one box. Settles sites in
/// increasing (distance, site) order; equal-distance predecessor ties go to
/// the lexicographically smallest site.
template <WeightSource W>
class Sweep {
public:
    Sweep(const W& field, Site source, Box box, Restriction r)
        : field_(field), box_(box), r_(std::move(r)),
          dist_(static_cast<std::size_t>(box.sites()), kInf),
          pred_(static_cast<std::size_t>(box.sites()), -1),
          settled_(static_cast<std::size_t>(box.sites()), 0) {
        if (!box_.contains(source) || !admissible(r_, source)) fail(ErrorKind::Domain, "source outside box or inadmissible");
        const auto s = box_.index(source);
        dist_[s] = 0.0;
        heap_.push({0.0, s});
    }

    /// Settles sites until `stop(index, distance)` returns true for the next
    /// candidate (left unsettled unless `stop` settles it), or the heap drains.
    template <class Stop>
    void run(Stop&& stop) {
        while (!heap_.empty()) {
            const auto [d, i] = heap_.top();
            if (settled_[i] || d > dist_[i]) {
                heap_.pop();
                continue;
            }
            if (stop(i, d)) return;
            heap_.pop();
            settle(i);
        }
    }

    void run_all() {
        run([](std::int64_t, double) { return false; });
    }

    /// Runs until `target` is settled.
    void run_to(std::int64_t target) {
        run([&](std::int64_t i, double) {
            if (i != target) return false;
            heap_.pop();
            settle(i);
            return true;
        });
    }

    /// True if an admissible edge leaves the box from s.
    bool is_exit(Site s) const {
        if (s.x != box_.x_lo && s.x != box_.x_hi && s.y != box_.y_lo && s.y != box_.y_hi) return false;
        if (!admissible(r_, s)) return false;
        for (const auto& step : kNeighbourSteps) {
            const Site n = s + step;
            if (!box_.contains(n) && admissible(r_, n) && admissible(r_, Edge(s, n))) return true;
        }
        return false;
    }

    /// Smallest tentative distance over exit sites. Any path leaving the box
    /// costs at least this much once every site below it is settled.
    double exit_bound() const {
        double m = kInf;
        auto probe = [&](Site s) {
            if (is_exit(s)) m = std::min(m, dist_[box_.index(s)]);
        };
        for (auto x = box_.x_lo; x <= box_.x_hi; ++x) {
            probe({x, box_.y_lo});
            if (box_.y_hi != box_.y_lo) probe({x, box_.y_hi});
        }
        for (auto y = box_.y_lo + 1; y < box_.y_hi; ++y) {
            probe({box_.x_lo, y});
            if (box_.x_hi != box_.x_lo) probe({box_.x_hi, y});
        }
        return m;
    }

    /// Smallest distance among exit sites settled so far.
    double settled_exit_min() const noexcept { return settled_exit_min_; }

    double dist(Site s) const { return dist_[box_.index(s)]; }
    double dist_at(std::int64_t i) const { return dist_[i]; }
    bool settled(Site s) const { return settled_[box_.index(s)] != 0; }
    const Box& box() const noexcept { return box_; }

    std::vector<Site> path_to(Site v) const {
        std::vector<Site> out;
        for (auto i = box_.index(v); i >= 0; i = pred_[i]) out.push_back(box_.site(i));
        std::reverse(out.begin(), out.end());
        return out;
    }

private:
    void settle(std::int64_t i) {
        settled_[i] = 1;
        const Site s = box_.site(i);
        const double d = dist_[i];
        if (d < settled_exit_min_ && is_exit(s)) settled_exit_min_ = d;
        for (const auto& step : kNeighbourSteps) {
            const Site n = s + step;
            if (!box_.contains(n) || !admissible(r_, n)) continue;
            const auto j = box_.index(n);
            if (settled_[j]) continue;
            const Edge e(s, n);
            if (!admissible(r_, e)) continue;
            const double nd = d + field_.weight(e);
            if (nd < dist_[j]) {
                dist_[j] = nd;
                pred_[j] = i;
                heap_.push({nd, j});
            } else if (nd == dist_[j] && i < pred_[j]) {
                pred_[j] = i;
            }
        }
    }

    struct Entry {
        double d;
        std::int64_t i;
        bool operator>(const Entry& o) const noexcept { return d != o.d ? d > o.d : i > o.i; }
    };

    const W& field_;
    Box box_;
    Restriction r_;
    std::vector<double> dist_;
    std::vector<std::int64_t> pred_;
    std::vector<std::uint8_t> settled_;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap_;
    double settled_exit_min_ = kInf;
};

template <WeightSource W>
PathResult passage_time(const W& field, Site u, Site v, const Box& box, const Restriction& r = restriction::None{}) {
    if (!box.contains(v) || !admissible(r, v)) fail(ErrorKind::Domain, "target outside box or inadmissible");
    Sweep<W> sweep(field, u, box, r);
    sweep.run_to(box.index(v));
    PathResult out;
    out.time = sweep.dist(v);
    if (std::isfinite(out.time)) out.geodesic = sweep.path_to(v);
    out.exact = out.time <= sweep.exit_bound();
    return out;
}

namespace detail {

/// passage_time with a two-sided certificate. A path that leaves the box
/// runs inside it from u to some exit site and from some exit site to v, so
/// it costs at least e_u + e_v, the in-box distances from u and from v to
/// the nearest exit sites. The box value T is certified when T <= e_u or
/// T <= e_u + e_v. Returns nullopt otherwise.
template <WeightSource W>
std::optional<PathResult> certified_passage_time(const W& field, Site u, Site v, const Box& box, const Restriction& r) {
    if (!box.contains(v) || !admissible(r, v)) fail(ErrorKind::Domain, "target outside box or inadmissible");
    Sweep<W> from_u(field, u, box, r);
    from_u.run_to(box.index(v));
    PathResult out;
    out.time = from_u.dist(v);
    if (!std::isfinite(out.time)) return std::nullopt;
    // Exits not yet settled from u lie at distance >= T, so this is exact below T.
    const double e_u = from_u.exit_bound();
    if (!(out.time <= e_u)) {
        Sweep<W> from_v(field, v, box, r);
        bool cut = false;
        from_v.run([&](std::int64_t i, double d) {
            if (e_u + d >= out.time) return true;
            cut = from_v.is_exit(box.site(i));
            return cut;
        });
        if (cut) return std::nullopt;
    }
    out.exact = true;
    out.geodesic = from_u.path_to(v);
    return out;
}

}  // namespace detail

/// Default truncation: the endpoints' bounding rectangle grown by
/// max(ceil(|v-u|_1 / 2), 16), clipped to the restriction's admissible columns.
inline std::int64_t default_margin(Site u, Site v) {
    const auto d = std::abs(v.x - u.x) + std::abs(v.y - u.y);
    return std::max<std::int64_t>((d + 1) / 2, 16);
}

inline Box box_around(Site u, Site v, std::int64_t margin, const Restriction& r) {
    Box b = Box::make(std::min(u.x, v.x) - margin, std::max(u.x, v.x) + margin, std::min(u.y, v.y) - margin,
                      std::max(u.y, v.y) + margin);
    if (std::holds_alternative<restriction::RightHalf>(r)) b.x_lo = std::max<std::int64_t>(b.x_lo, 0);
    if (std::holds_alternative<restriction::LeftHalf>(r)) b.x_hi = std::min<std::int64_t>(b.x_hi, 0);
    if (auto* c = std::get_if<restriction::Cylinder>(&r)) {
        b.x_lo = std::max(b.x_lo, -c->half_width);
        b.x_hi = std::min(b.x_hi, c->half_width);
    }
    return b;
}

inline constexpr std::int64_t kDefaultMarginCap = 4096;

/// passage_time on the default box, doubling the margin until the result is
/// certified exact. Throws TruncationFailure once the margin would exceed `margin_cap`.
template <WeightSource W>
PathResult passage_time_auto(const W& field, Site u, Site v, const Restriction& r = restriction::None{},
                             std::int64_t margin_cap = kDefaultMarginCap, std::uint64_t seed_for_errors = 0) {
    for (auto margin = default_margin(u, v); margin <= margin_cap; margin *= 2) {
        if (auto res = detail::certified_passage_time(field, u, v, box_around(u, v, margin, r), r)) return *res;
    }
    throw TruncationFailure(seed_for_errors, "passage time not certified within margin cap " + std::to_string(margin_cap));
}

struct GrowthPoint {
    Site site;
    double time;
    friend bool operator==(const GrowthPoint&, const GrowthPoint&) = default;
};

/// Sites z with T(0,z) <= t, sorted lexicographically.
template <WeightSource W>
std::vector<GrowthPoint> growth_set(const W& field, double t, const Box& box, const Restriction& r = restriction::None{}) {
    if (!(t >= 0.0)) fail(ErrorKind::Domain, "growth threshold must be >= 0");
    Sweep<W> sweep(field, Site{0, 0}, box, r);
    sweep.run([&](std::int64_t, double d) { return d > t; });
    if (!(sweep.exit_bound() > t)) fail(ErrorKind::NotContained, "growth set reaches the box boundary; enlarge the box");
    std::vector<GrowthPoint> out;
    for (std::int64_t i = 0; i < box.sites(); ++i)
        if (sweep.dist_at(i) <= t) out.push_back({box.site(i), sweep.dist_at(i)});
    return out;  // index order is lexicographic
}

/// growth_set on [-h, h]^2 with h doubled from `initial_half_width` until contained.
template <WeightSource W>
std::vector<GrowthPoint> growth_set_auto(const W& field, double t, std::int64_t initial_half_width,
                                         std::int64_t half_width_cap) {
    for (auto h = std::max<std::int64_t>(initial_half_width, 1); h <= half_width_cap; h *= 2) {
        try {
            return growth_set(field, t, Box::square(h));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NotContained) throw;
        }
    }
    throw TruncationFailure(0, "growth set not contained within half-width cap " + std::to_string(half_width_cap));
}

inline constexpr std::int64_t kBruteForceMaxSites = 25;

/// Minimum over all self-avoiding admissible paths inside the box, by
/// exhaustive depth-first enumeration (branches whose partial cost already
/// reaches the best complete path are cut).
template <WeightSource W>
double brute_force_passage(const W& field, Site u, Site v, const Box& box, const Restriction& r = restriction::None{}) {
    if (box.sites() > kBruteForceMaxSites) fail(ErrorKind::Oversize, "brute force limited to 25 sites");
    if (!box.contains(u) || !box.contains(v) || !admissible(r, u) || !admissible(r, v))
        fail(ErrorKind::Domain, "endpoints outside box or inadmissible");
    std::vector<std::uint8_t> on_path(static_cast<std::size_t>(box.sites()), 0);
    double best = kInf;
    std::function<void(Site, double)> dfs = [&](Site s, double cost) {
        if (cost >= best) return;
        if (s == v) {
            best = cost;
            return;
        }
        on_path[box.index(s)] = 1;
        for (const auto& step : kNeighbourSteps) {
            const Site n = s + step;
            if (!box.contains(n) || on_path[box.index(n)] || !admissible(r, n)) continue;
            const Edge e(s, n);
            if (!admissible(r, e)) continue;
            dfs(n, cost + field.weight(e));
        }
        on_path[box.index(s)] = 0;
    };
    dfs(u, 0.0);
    return best;
}

struct VariationResult {
    bool holds = false;
    double direct = kInf;      ///< T(0,z)
    double decomposed = kInf;  ///< min_k T(0,k e2) + T_+(k e2, z)
    std::int64_t best_k = 0;
};

/// Checks T(0,z) = min_k [T(0,k e2) + T_+(k e2, z)] over axis sites of the box.
template <WeightSource W>
VariationResult variation_check(const W& field, Site z, const Box& box, double tol = 1e-9) {
    if (z.x < 0) fail(ErrorKind::Domain, "variation identity needs z in the right half-plane");
    if (!box.contains(z) || !box.contains({0, 0})) fail(ErrorKind::Domain, "box must contain 0 and z");
    Sweep<W> from_origin(field, Site{0, 0}, box, restriction::None{});
    from_origin.run_all();
    VariationResult out;
    out.direct = from_origin.dist(z);
    // With the whole box settled, exit_bound is the exact distance to the
    // nearest exit site; a path leaving the box pays that from both ends.
    const double e_0 = from_origin.exit_bound();
    if (!(out.direct <= e_0)) {
        Sweep<W> from_z_free(field, z, box, restriction::None{});
        from_z_free.run_all();
        if (!(out.direct <= e_0 + from_z_free.exit_bound()))
            fail(ErrorKind::Inconclusive, "T(0,z) is not truncation-exact in this box");
    }
    Sweep<W> from_z(field, z, box, restriction::RightHalf{});
    from_z.run_all();
    for (auto k = box.y_lo; k <= box.y_hi; ++k) {
        const double v = from_origin.dist({0, k}) + from_z.dist({0, k});
        if (v < out.decomposed || (v == out.decomposed && std::abs(k) < std::abs(out.best_k))) {
            out.decomposed = v;
            out.best_k = k;
        }
    }
    out.holds = std::abs(out.direct - out.decomposed) <= tol;
    return out;
}

template <WeightSource W>
VariationResult variation_check_auto(const W& field, Site z, std::int64_t half_width = 12, std::int64_t half_width_cap = 4096,
                                     double tol = 1e-9) {
    for (auto h = half_width; h <= half_width_cap; h *= 2) {
        try {
            return variation_check(field, z, Box::square(h), tol);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Inconclusive) throw;
        }
    }
    fail(ErrorKind::Inconclusive, "variation identity not certified within half-width cap");
}

}  // namespace ifpp
