#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ifpp/errors.hpp"

namespace ifpp {

/// Absolute tolerance for comparing probabilities. Atom values compare exactly.
inline constexpr double kProbTol = 1e-12;

struct Atom {
    double value;
    double prob;
    friend bool operator==(const Atom&, const Atom&) = default;
};

struct PointMass {
    double value;
    friend bool operator==(const PointMass&, const PointMass&) = default;
};

struct FiniteAtoms {
    std::vector<Atom> atoms;
    friend bool operator==(const FiniteAtoms&, const FiniteAtoms&) = default;
};

struct Uniform {
    double lo;
    double hi;
    friend bool operator==(const Uniform&, const Uniform&) = default;
};

struct Exponential {
    double rate;
    friend bool operator==(const Exponential&, const Exponential&) = default;
};

/// A weight distribution on [0, inf) with exact CDF and right-continuous
/// inverse CDF. Immutable once built.
class Dist {
public:
    using Variant = std::variant<PointMass, FiniteAtoms, Uniform, Exponential>;

    static Dist point(double value) {
        if (!(value >= 0.0) || !std::isfinite(value)) fail(ErrorKind::Domain, "point mass must be finite and >= 0");
        return Dist(PointMass{value});
    }

    static Dist atoms(std::vector<Atom> atoms) {
        if (atoms.empty()) fail(ErrorKind::Domain, "atom list is empty");
        double total = 0.0;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            const auto& a = atoms[i];
            if (!(a.value >= 0.0) || !std::isfinite(a.value)) fail(ErrorKind::Domain, "atom values must be finite and >= 0");
            if (!(a.prob > 0.0 && a.prob <= 1.0)) fail(ErrorKind::Domain, "atom probabilities must lie in (0,1]");
            if (i > 0 && !(atoms[i - 1].value < a.value)) fail(ErrorKind::Domain, "atom values must be strictly increasing");
            total += a.prob;
        }
        if (std::abs(total - 1.0) > kProbTol) fail(ErrorKind::Domain, "atom probabilities must sum to 1");
        return Dist(FiniteAtoms{std::move(atoms)});
    }

    static Dist uniform(double lo, double hi) {
        if (!(lo >= 0.0) || !(hi > lo) || !std::isfinite(hi)) fail(ErrorKind::Domain, "uniform needs 0 <= lo < hi");
        return Dist(Uniform{lo, hi});
    }

    static Dist exponential(double rate) {
        if (!(rate > 0.0) || !std::isfinite(rate)) fail(ErrorKind::Domain, "exponential rate must be positive");
        return Dist(Exponential{rate});
    }

    const Variant& variant() const noexcept { return v_; }

    bool is_discrete() const noexcept {
        return std::holds_alternative<PointMass>(v_) || std::holds_alternative<FiniteAtoms>(v_);
    }

    /// The atoms of a discrete law (a point mass is one atom of mass 1).
    std::vector<Atom> support() const {
        if (auto* p = std::get_if<PointMass>(&v_)) return {{p->value, 1.0}};
        if (auto* a = std::get_if<FiniteAtoms>(&v_)) return a->atoms;
        fail(ErrorKind::UnsupportedCombination, "continuous distribution has no finite support");
    }

    double cdf(double x) const {
        return std::visit(
            [&](const auto& d) -> double {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, PointMass>) {
                    return x >= d.value ? 1.0 : 0.0;
                } else if constexpr (std::is_same_v<T, FiniteAtoms>) {
                    if (x >= d.atoms.back().value) return 1.0;
                    double c = 0.0;
                    for (const auto& a : d.atoms) {
                        if (a.value > x) break;
                        c += a.prob;
                    }
                    return c;
                } else if constexpr (std::is_same_v<T, Uniform>) {
                    if (x <= d.lo) return 0.0;
                    if (x >= d.hi) return 1.0;
                    return (x - d.lo) / (d.hi - d.lo);
                } else {
                    return x <= 0.0 ? 0.0 : -std::expm1(-d.rate * x);
                }
            },
            v_);
    }

    /// min{x : cdf(x) >= u} for u in (0,1).
    double inverse_cdf(double u) const {
        if (!(u > 0.0 && u < 1.0)) fail(ErrorKind::Domain, "inverse_cdf requires u in (0,1)");
        double x = raw_inverse(u);
        // Closed forms can land an ulp short; step up until cdf(x) >= u.
        if (!is_discrete())
            while (cdf(x) < u) x = std::nextafter(x, std::numeric_limits<double>::infinity());
        return x;
    }
    double mean() const {
        return std::visit(
            [](const auto& d) -> double {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, PointMass>) {
                    return d.value;
                } else if constexpr (std::is_same_v<T, FiniteAtoms>) {
                    double m = 0.0;
                    for (const auto& a : d.atoms) m += a.value * a.prob;
                    return m;
                } else if constexpr (std::is_same_v<T, Uniform>) {
                    return 0.5 * (d.lo + d.hi);
                } else {
                    return 1.0 / d.rate;
                }
            },
            v_);
    }

    friend bool operator==(const Dist&, const Dist&) = default;

private:
    explicit Dist(Variant v) : v_(std::move(v)) {}

    double raw_inverse(double u) const {
        return std::visit(
            [&](const auto& d) -> double {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, PointMass>) {
                    return d.value;
                } else if constexpr (std::is_same_v<T, FiniteAtoms>) {
                    // Same partial sums as cdf(), so cdf(inverse_cdf(u)) >= u holds bit-exactly.
                    double c = 0.0;
                    for (std::size_t i = 0; i + 1 < d.atoms.size(); ++i) {
                        c += d.atoms[i].prob;
                        if (c >= u) return d.atoms[i].value;
                    }
                    return d.atoms.back().value;
                } else if constexpr (std::is_same_v<T, Uniform>) {
                    return d.lo + u * (d.hi - d.lo);
                } else {
                    return -std::log1p(-u) / d.rate;
                }
            },
            v_);
    }

    Variant v_;
};

/// Collapses a one-atom FiniteAtoms to a PointMass; other laws pass through.
inline Dist normalize(const Dist& d) {
    if (auto* a = std::get_if<FiniteAtoms>(&d.variant()); a && a->atoms.size() == 1) return Dist::point(a->atoms[0].value);
    return d;
}

/// Builds a discrete law from a step CDF given at increasing support points.
/// Zero-mass steps (within kProbTol) are dropped.
inline Dist from_step_cdf(const std::vector<double>& values, const std::vector<double>& cdf_values) {
    std::vector<Atom> atoms;
    double prev = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double c = (i + 1 == values.size()) ? 1.0 : cdf_values[i];
        const double p = c - prev;
        if (p > kProbTol) atoms.push_back({values[i], p});
        prev = c;
    }
    // Rounded-away slivers are folded into the last atom so the total stays 1.
    double total = 0.0;
    for (const auto& a : atoms) total += a.prob;
    atoms.back().prob += 1.0 - total;
    return normalize(Dist::atoms(std::move(atoms)));
}

/// Law of the minimum of four independent copies of a base distribution.
class YDist {
public:
    explicit YDist(Dist base) : base_(std::move(base)) {}

    const Dist& base() const noexcept { return base_; }

    double survival(double x) const {
        const double s = 1.0 - base_.cdf(x);
        return (s * s) * (s * s);
    }

    double cdf(double x) const { return 1.0 - survival(x); }

    /// P(Y <= x) >= u  <=>  F(x) >= 1 - (1-u)^(1/4).
    double inverse_cdf(double u) const {
        if (!(u > 0.0 && u < 1.0)) fail(ErrorKind::Domain, "inverse_cdf requires u in (0,1)");
        const double v = -std::expm1(0.25 * std::log1p(-u));
        return base_.inverse_cdf(std::clamp(v, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0)));
    }

    /// Exact law for discrete bases, nullopt otherwise.
    std::optional<Dist> discrete() const {
        if (!base_.is_discrete()) return std::nullopt;
        const auto atoms = base_.support();
        std::vector<double> values, cdfs;
        for (const auto& a : atoms) {
            values.push_back(a.value);
            cdfs.push_back(cdf(a.value));
        }
        return from_step_cdf(values, cdfs);
    }

    /// Exact sum for atoms; quadrature of the survival function otherwise.
    double mean() const {
        if (auto d = discrete()) return d->mean();
        return std::visit(
            [&](const auto& d) -> double {
                using T = std::decay_t<decltype(d)>;
                using boost::math::quadrature::gauss_kronrod;
                if constexpr (std::is_same_v<T, Uniform>) {
                    return d.lo + gauss_kronrod<double, 61>::integrate([&](double x) { return survival(x); }, d.lo, d.hi,
                                                                       15, 1e-14);
                } else if constexpr (std::is_same_v<T, Exponential>) {
                    return gauss_kronrod<double, 61>::integrate([&](double x) { return survival(x); }, 0.0,
                                                                std::numeric_limits<double>::infinity(), 15, 1e-14);
                } else {
                    return 0.0;  // discrete handled above
                }
            },
            base_.variant());
    }

private:
    Dist base_;
};

inline YDist y_dist(const Dist& d) { return YDist(d); }

namespace detail {

inline void require_discrete(const Dist& a, const Dist& b, const char* op) {
    if (!a.is_discrete() || !b.is_discrete())
        fail(ErrorKind::UnsupportedCombination, std::string(op) + " supports point masses and finite atoms only");
}

inline std::vector<double> union_support(const Dist& a, const Dist& b) {
    std::vector<double> v;
    for (const auto& x : a.support()) v.push_back(x.value);
    for (const auto& x : b.support()) v.push_back(x.value);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

/// E[min(X, t)]; t = +inf gives the mean.
inline double truncated_mean(const std::vector<Atom>& atoms, double t) {
    double m = 0.0;
    for (const auto& a : atoms) m += a.prob * std::min(a.value, t);
    return m;
}

}  // namespace detail

struct SubDom {
    Dist sub;  ///< pointwise max of the CDFs (stochastically smaller)
    Dist dom;  ///< pointwise min of the CDFs (stochastically larger)
};

inline SubDom combine_sub_dom(const Dist& f_minus, const Dist& f_plus) {
    detail::require_discrete(f_minus, f_plus, "combine_sub_dom");
    const auto values = detail::union_support(f_minus, f_plus);
    std::vector<double> hi, lo;
    for (double x : values) {
        const double a = f_minus.cdf(x), b = f_plus.cdf(x);
        hi.push_back(std::max(a, b));
        lo.push_back(std::min(a, b));
    }
    return {from_step_cdf(values, hi), from_step_cdf(values, lo)};
}

/// True iff f1 is more variable than f2 (f1 precedes f2 in the increasing
/// concave order): E phi(X1) <= E phi(X2) for every concave nondecreasing
/// phi. For finitely supported laws the cone of such phi is generated by
/// constants, x, and min(x, t) with t at the atoms, so checking those
/// finitely many test functions decides the order exactly.
inline bool more_variable(const Dist& f1, const Dist& f2) {
    detail::require_discrete(f1, f2, "more_variable");
    const auto a1 = f1.support(), a2 = f2.support();
    auto thresholds = detail::union_support(f1, f2);
    thresholds.push_back(std::numeric_limits<double>::infinity());
    for (double t : thresholds)
        if (detail::truncated_mean(a1, t) > detail::truncated_mean(a2, t) + kProbTol) return false;
    return true;
}

/// F_a^{-1}(u) <= F_b^{-1}(u) for every u, i.e. cdf_a >= cdf_b everywhere.
/// Exact for discrete pairs; continuous pairs are checked on a dense grid.
inline bool stochastically_le(const Dist& a, const Dist& b) {
    if (a.is_discrete() && b.is_discrete()) {
        for (double x : detail::union_support(a, b))
            if (a.cdf(x) + kProbTol < b.cdf(x)) return false;
        return true;
    }
    constexpr int kGrid = 4096;
    for (int i = 1; i < kGrid; ++i) {
        const double u = static_cast<double>(i) / kGrid;
        if (a.inverse_cdf(u) > b.inverse_cdf(u)) return false;
    }
    return true;
}

}  // namespace ifpp
