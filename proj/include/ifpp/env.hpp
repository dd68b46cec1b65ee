#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>
#include <utility>
#include <variant>

#include "ifpp/dist.hpp"
#include "ifpp/errors.hpp"
#include "ifpp/rng.hpp"

namespace ifpp {

struct Site {
    std::int64_t x = 0;
    std::int64_t y = 0;
    friend auto operator<=>(const Site&, const Site&) = default;
    friend Site operator+(Site a, Site b) { return {a.x + b.x, a.y + b.y}; }
};

inline std::int64_t l1_norm(Site s) { return std::abs(s.x) + std::abs(s.y); }

/// Nearest-neighbour edge, stored with a < b lexicographically.
class Edge {
public:
    Edge(Site p, Site q) {
        if (std::abs(p.x - q.x) + std::abs(p.y - q.y) != 1) fail(ErrorKind::Domain, "edge endpoints must be nearest neighbours");
        if (q < p) std::swap(p, q);
        a_ = p;
        b_ = q;
    }

    Site a() const noexcept { return a_; }
    Site b() const noexcept { return b_; }
    bool horizontal() const noexcept { return a_.y == b_.y; }
    bool vertical() const noexcept { return a_.x == b_.x; }

    friend bool operator==(const Edge&, const Edge&) = default;

private:
    Site a_, b_;
};

struct Homogeneous {
    Dist f;
};
struct HalfPlane {
    Dist minus;
    Dist plus;
};
/// Half-plane model whose vertical-axis edges (both endpoints at x = 0) carry a third law.
struct HalfPlaneAxis {
    Dist minus;
    Dist plus;
    Dist axis;
};
/// Homogeneous F with each column independently defected with probability eps.
struct RandomColumns {
    Dist f;
    Dist f0;
    double eps;
};

class EnvSpec {
public:
    using Variant = std::variant<Homogeneous, HalfPlane, HalfPlaneAxis, RandomColumns>;

    EnvSpec(Homogeneous h) : v_(std::move(h)) {}
    EnvSpec(HalfPlane h) : v_(std::move(h)) {}
    EnvSpec(HalfPlaneAxis h) : v_(std::move(h)) {}
    EnvSpec(RandomColumns r) : v_(std::move(r)) {
        if (!(std::get<RandomColumns>(v_).eps >= 0.0 && std::get<RandomColumns>(v_).eps <= 1.0))
            fail(ErrorKind::Domain, "defect density must lie in [0,1]");
    }

    const Variant& variant() const noexcept { return v_; }
    bool random_columns() const noexcept { return std::holds_alternative<RandomColumns>(v_); }

private:
    Variant v_;
};

namespace detail {

inline const Dist& half_plane_rule(const Edge& e, const Dist& minus, const Dist& plus) {
    return std::min(e.a().x, e.b().x) < 0 ? minus : plus;
}

template <class EtaFn>
const Dist& region_rule(const EnvSpec& spec, const Edge& e, EtaFn&& eta) {
    return std::visit(
        [&](const auto& s) -> const Dist& {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Homogeneous>) {
                return s.f;
            } else if constexpr (std::is_same_v<T, HalfPlane>) {
                return half_plane_rule(e, s.minus, s.plus);
            } else if constexpr (std::is_same_v<T, HalfPlaneAxis>) {
                if (e.vertical() && e.a().x == 0) return s.axis;
                return half_plane_rule(e, s.minus, s.plus);
            } else {
                if (e.vertical()) return eta(e.a().x) ? s.f0 : s.f;
                return (eta(e.a().x) && eta(e.b().x)) ? s.f0 : s.f;
            }
        },
        spec.variant());
}

}  // namespace detail

/// Distribution assigned to an edge by a deterministic region rule.
/// RandomColumns needs a realized column layer; use WeightField::region_of.
inline const Dist& region_of(const Edge& e, const EnvSpec& spec) {
    return detail::region_rule(spec, e, [](std::int64_t) -> bool {
        fail(ErrorKind::WrongSpec, "random-column regions depend on a realized field");
    });
}

/// Per-edge uniform of the coupling family, shared by every field with this seed.
inline double uniform_at(std::uint64_t seed, const Edge& e) {
    return rng::to_open_unit(rng::hash(seed, rng::Stream::Edge, e.a().x, e.a().y, e.horizontal() ? 1 : 0));
}

/// A realized environment: a pure map Edge -> weight determined by (spec, seed).
class WeightField {
public:
    WeightField(EnvSpec spec, std::uint64_t seed) : spec_(std::move(spec)), seed_(seed) {}

    const EnvSpec& spec() const noexcept { return spec_; }
    std::uint64_t seed() const noexcept { return seed_; }

    bool eta(std::int64_t column) const {
        const auto* rc = std::get_if<RandomColumns>(&spec_.variant());
        if (!rc) fail(ErrorKind::WrongSpec, "eta is defined for random-column environments only");
        return column_uniform(column) < rc->eps;
    }

    const Dist& region_of(const Edge& e) const {
        return detail::region_rule(spec_, e, [this](std::int64_t c) { return eta(c); });
    }

    double weight(const Edge& e) const { return region_of(e).inverse_cdf(uniform_at(seed_, e)); }

private:
    double column_uniform(std::int64_t column) const {
        return rng::to_open_unit(rng::hash(seed_, rng::Stream::Column, column));
    }

    EnvSpec spec_;
    std::uint64_t seed_;
};

}  // namespace ifpp
