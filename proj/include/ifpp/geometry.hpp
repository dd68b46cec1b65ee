#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "ifpp/errors.hpp"

namespace ifpp {

struct Point {
    double x = 0.0;
    double y = 0.0;
    friend auto operator<=>(const Point&, const Point&) = default;
    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
};

inline double cross(Point o, Point a, Point b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }

/// Convex polygon, vertices counterclockwise without repetition of the first.
/// Degenerate hulls (a point or a segment) are allowed.
class Polygon {
public:
    Polygon() = default;

    /// Wraps vertices already in convex counterclockwise order.
    static Polygon from_ccw(std::vector<Point> v, double tol = 1e-12) {
        Polygon p;
        p.v_ = std::move(v);
        if (!p.convex(tol)) fail(ErrorKind::Domain, "polygon is not convex and counterclockwise");
        return p;
    }

    const std::vector<Point>& vertices() const noexcept { return v_; }
    std::size_t size() const noexcept { return v_.size(); }
    bool empty() const noexcept { return v_.empty(); }

    bool convex(double tol = 1e-12) const {
        const auto n = v_.size();
        if (n < 3) return true;
        for (std::size_t i = 0; i < n; ++i)
            if (cross(v_[i], v_[(i + 1) % n], v_[(i + 2) % n]) < -tol) return false;
        return true;
    }

    /// h(u) = max_v <v, u>
    double support(Point u) const {
        double h = -std::numeric_limits<double>::infinity();
        for (const auto& p : v_) h = std::max(h, dot(p, u));
        return h;
    }

    bool contains(Point q, double tol = 1e-12) const {
        const auto n = v_.size();
        if (n == 0) return false;
        if (n == 1) return norm(q - v_[0]) <= tol;
        if (n == 2) {
            const double len = norm(v_[1] - v_[0]);
            if (std::abs(cross(v_[0], v_[1], q)) > tol * std::max(1.0, len)) return false;
            const double t = dot(q - v_[0], v_[1] - v_[0]) / (len * len);
            return t >= -tol && t <= 1.0 + tol;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const Point a = v_[i], b = v_[(i + 1) % n];
            if (cross(a, b, q) < -tol * std::max(1.0, norm(b - a))) return false;
        }
        return true;
    }

    double area() const {
        double s = 0.0;
        const auto n = v_.size();
        for (std::size_t i = 0; i < n; ++i) s += v_[i].x * v_[(i + 1) % n].y - v_[(i + 1) % n].x * v_[i].y;
        return 0.5 * s;
    }

    double perimeter() const {
        double s = 0.0;
        const auto n = v_.size();
        if (n < 2) return 0.0;
        for (std::size_t i = 0; i < n; ++i) s += norm(v_[(i + 1) % n] - v_[i]);
        return s;
    }

    /// Distance from the origin to the boundary along unit direction u
    /// (the radial function); expects the origin inside.
    double radial(Point u) const {
        double r = std::numeric_limits<double>::infinity();
        const auto n = v_.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point a = v_[i], b = v_[(i + 1) % n];
            // Outward normal of edge a->b for a ccw polygon; its offset is the support value.
            const Point nrm{b.y - a.y, a.x - b.x};
            const double off = dot(nrm, a);
            const double proj = dot(nrm, u);
            if (proj > 0.0 && off >= 0.0) r = std::min(r, off / proj);
        }
        return r;
    }

private:
    std::vector<Point> v_;
};

/// Andrew's monotone chain; collinear points (to relative precision 1e-12)
/// are dropped.
inline Polygon convex_hull(std::vector<Point> pts) {
    auto turns_left = [](Point o, Point a, Point b) {
        return cross(o, a, b) > 1e-12 * norm(a - o) * norm(b - o);
    };
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return Polygon::from_ccw(pts);
    std::vector<Point> h(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && !turns_left(h[k - 2], h[k - 1], p)) --k;
        h[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        const auto& p = pts[i];
        while (k >= t && !turns_left(h[k - 2], h[k - 1], p)) --k;
        h[k++] = p;
    }
    h.resize(k - 1);
    return Polygon::from_ccw(std::move(h), 1e-9);
}

/// Sutherland-Hodgman clip of a convex polygon to {p : <n, p> <= c}.
inline Polygon clip_half_plane(const Polygon& poly, Point n, double c) {
    const auto& v = poly.vertices();
    std::vector<Point> out;
    const auto m = v.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Point a = v[i], b = v[(i + 1) % m];
        const double da = dot(n, a) - c, db = dot(n, b) - c;
        if (da <= 0.0) out.push_back(a);
        if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
            const double t = da / (da - db);
            out.push_back(a + t * (b - a));
        }
    }
    return convex_hull(std::move(out));
}

inline constexpr int kSupportAngles = 720;

/// Symmetric Hausdorff distance of convex sets as the sup-norm gap of their
/// support functions, sampled at 720 angles (error at most perimeter / 720).
inline double hausdorff(const Polygon& p, const Polygon& q, int angles = kSupportAngles) {
    double d = 0.0;
    for (int i = 0; i < angles; ++i) {
        const double th = 2.0 * std::numbers::pi * i / angles;
        const Point u{std::cos(th), std::sin(th)};
        d = std::max(d, std::abs(p.support(u) - q.support(u)));
    }
    return d;
}

inline Polygon scaled(const Polygon& p, double s) {
    std::vector<Point> v;
    for (const auto& x : p.vertices()) v.push_back(s * x);
    if (s < 0.0) return convex_hull(std::move(v));
    return Polygon::from_ccw(std::move(v), 1e-9);
}

}  // namespace ifpp
