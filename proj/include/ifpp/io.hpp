#pragma once

// Config and artifact formats: JSON for distributions, environments and
// reports; CSV for estimate rows and vertex lists; SVG for polygons.
// Numbers are written in shortest round-trip form so outputs are
// byte-stable across runs and thread counts.

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ifpp/defects.hpp"
#include "ifpp/dist.hpp"
#include "ifpp/env.hpp"
#include "ifpp/errors.hpp"
#include "ifpp/estimate.hpp"
#include "ifpp/geometry.hpp"
#include "ifpp/selftest.hpp"
#include "ifpp/shape.hpp"

namespace ifpp::io {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace detail {

inline const json& member(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) fail(ErrorKind::Config, where + ": missing field '" + key + "'");
    return j.at(key);
}

inline double number(const json& j, const char* key, const std::string& where) {
    const auto& v = member(j, key, where);
    if (!v.is_number()) fail(ErrorKind::Config, where + ": field '" + key + "' must be a number");
    return v.get<double>();
}

}  // namespace detail

inline json to_json(const Dist& d) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PointMass>) {
                return {{"kind", "point"}, {"value", v.value}};
            } else if constexpr (std::is_same_v<T, FiniteAtoms>) {
                json pts = json::array();
                for (const auto& a : v.atoms) pts.push_back({a.value, a.prob});
                return {{"kind", "atoms"}, {"points", pts}};
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return {{"kind", "uniform"}, {"lo", v.lo}, {"hi", v.hi}};
            } else {
                return {{"kind", "exp"}, {"rate", v.rate}};
            }
        },
        d.variant());
}

inline Dist dist_from_json(const json& j, const std::string& where = "dist") {
    const auto& kind_v = detail::member(j, "kind", where);
    if (!kind_v.is_string()) fail(ErrorKind::Config, where + ": 'kind' must be a string");
    const auto kind = kind_v.get<std::string>();
    try {
        if (kind == "point") return Dist::point(detail::number(j, "value", where));
        if (kind == "uniform") return Dist::uniform(detail::number(j, "lo", where), detail::number(j, "hi", where));
        if (kind == "exp") return Dist::exponential(detail::number(j, "rate", where));
        if (kind == "atoms") {
            const auto& pts = detail::member(j, "points", where);
            if (!pts.is_array()) fail(ErrorKind::Config, where + ": 'points' must be an array");
            std::vector<Atom> atoms;
            for (const auto& p : pts) {
                if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                    fail(ErrorKind::Config, where + ": each point must be [value, prob]");
                atoms.push_back({p[0].get<double>(), p[1].get<double>()});
            }
            return Dist::atoms(std::move(atoms));
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Config) throw;
        fail(ErrorKind::Config, where + ": " + e.what());
    }
    fail(ErrorKind::Config, where + ": unknown distribution kind '" + kind + "'");
}

inline json to_json(const EnvSpec& spec) {
    return std::visit(
        [](const auto& s) -> json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Homogeneous>) {
                return {{"kind", "homogeneous"}, {"F", to_json(s.f)}};
            } else if constexpr (std::is_same_v<T, HalfPlane>) {
                return {{"kind", "half_plane"}, {"F_minus", to_json(s.minus)}, {"F_plus", to_json(s.plus)}};
            } else if constexpr (std::is_same_v<T, HalfPlaneAxis>) {
                return {{"kind", "half_plane_axis"},
                        {"F_minus", to_json(s.minus)},
                        {"F_plus", to_json(s.plus)},
                        {"F_axis", to_json(s.axis)}};
            } else {
                return {{"kind", "random_columns"}, {"F", to_json(s.f)}, {"F0", to_json(s.f0)}, {"epsilon", s.eps}};
            }
        },
        spec.variant());
}

inline json to_json(const GadgetSpec& g) { return {{"y", g.y}, {"p", g.p}, {"K", g.K}, {"z_high", g.z_high}}; }

inline GadgetSpec gadget_from_json(const json& j, const std::string& where = "gadget") {
    GadgetSpec g;
    g.y = detail::number(j, "y", where);
    g.p = detail::number(j, "p", where);
    const auto& k = detail::member(j, "K", where);
    if (!k.is_number_integer()) fail(ErrorKind::Config, where + ": 'K' must be an integer");
    g.K = k.get<std::int64_t>();
    g.z_high = detail::number(j, "z_high", where);
    return g;
}

/// Environment from JSON. The "gadget" kind expands to its half-plane spec.
inline EnvSpec env_from_json(const json& j, const std::string& where = "env") {
    const auto& kind_v = detail::member(j, "kind", where);
    if (!kind_v.is_string()) fail(ErrorKind::Config, where + ": 'kind' must be a string");
    const auto kind = kind_v.get<std::string>();
    if (kind == "homogeneous") return Homogeneous{dist_from_json(detail::member(j, "F", where), where + ".F")};
    if (kind == "half_plane")
        return HalfPlane{dist_from_json(detail::member(j, "F_minus", where), where + ".F_minus"),
                         dist_from_json(detail::member(j, "F_plus", where), where + ".F_plus")};
    if (kind == "half_plane_axis")
        return HalfPlaneAxis{dist_from_json(detail::member(j, "F_minus", where), where + ".F_minus"),
                             dist_from_json(detail::member(j, "F_plus", where), where + ".F_plus"),
                             dist_from_json(detail::member(j, "F_axis", where), where + ".F_axis")};
    if (kind == "random_columns") {
        const double eps = detail::number(j, "epsilon", where);
        if (!(eps >= 0.0 && eps <= 1.0)) fail(ErrorKind::Config, where + ": 'epsilon' must lie in [0,1]");
        return RandomColumns{dist_from_json(detail::member(j, "F", where), where + ".F"),
                             dist_from_json(detail::member(j, "F0", where), where + ".F0"), eps};
    }
    if (kind == "gadget") {
        const auto g = gadget_from_json(j, where);
        try {
            return gadget_env(g, j.value("mirror", false));
        } catch (const Error& e) {
            fail(ErrorKind::Config, where + ": " + e.what());
        }
    }
    fail(ErrorKind::Config, where + ": unknown environment kind '" + kind + "'");
}

inline json to_json(const Estimate& e) {
    json j;
    j["direction"] = {e.direction.x, e.direction.y};
    j["n"] = e.n;
    j["reps"] = e.reps;
    j["point"] = e.point;
    j["stderr"] = e.std_error;
    j["certified_upper"] = e.certified_upper ? json(*e.certified_upper) : json(nullptr);
    j["confidence"] = e.confidence;
    j["seed"] = e.seed;
    j["low_reps"] = e.low_reps();
    return j;
}

inline const char* kEstimateCsvHeader = "direction_x,direction_y,n,reps,point,stderr,certified_upper,confidence,seed";

inline std::string csv_row(const Estimate& e) {
    std::ostringstream os;
    os << format_number(e.direction.x) << ',' << format_number(e.direction.y) << ',' << e.n << ',' << e.reps << ','
       << format_number(e.point) << ',' << format_number(e.std_error) << ','
       << (e.certified_upper ? format_number(*e.certified_upper) : std::string()) << ','
       << format_number(e.confidence) << ',' << e.seed;
    return os.str();
}

/// CSV document: one provenance comment line carrying the resolved config,
/// then the header and rows.
inline std::string estimates_csv(const std::vector<Estimate>& rows, const json& config) {
    std::ostringstream os;
    os << "# config: " << config.dump() << '\n' << kEstimateCsvHeader << '\n';
    for (const auto& e : rows) os << csv_row(e) << '\n';
    return os.str();
}

inline json to_json(const SweepEntry& s) {
    json j;
    j["angle"] = s.angle;
    j["target"] = {s.target.x, s.target.y};
    j["unit_value"] = s.unit_value();
    j["unit_stderr"] = s.unit_stderr();
    j["estimate"] = to_json(s.estimate);
    return j;
}

inline std::string sweep_csv(const std::vector<SweepEntry>& rows, const json& config) {
    std::ostringstream os;
    os << "# config: " << config.dump() << '\n' << "angle,target_x,target_y,unit_value,unit_stderr," << kEstimateCsvHeader << '\n';
    for (const auto& s : rows)
        os << format_number(s.angle) << ',' << s.target.x << ',' << s.target.y << ',' << format_number(s.unit_value()) << ','
           << format_number(s.unit_stderr()) << ',' << csv_row(s.estimate) << '\n';
    return os.str();
}

inline std::string growth_csv(const std::vector<GrowthPoint>& pts) {
    std::ostringstream os;
    os << "x,y,time\n";
    for (const auto& g : pts) os << g.site.x << ',' << g.site.y << ',' << format_number(g.time) << '\n';
    return os.str();
}

inline json to_json(const Polygon& p) {
    json v = json::array();
    for (const auto& q : p.vertices()) v.push_back({q.x, q.y});
    return v;
}

inline std::string polygon_csv(const Polygon& p, const json& config) {
    std::ostringstream os;
    os << "# config: " << config.dump() << '\n' << "x,y\n";
    for (const auto& q : p.vertices()) os << format_number(q.x) << ',' << format_number(q.y) << '\n';
    return os.str();
}

struct SvgLayer {
    Polygon polygon;
    std::string stroke;
};

inline constexpr int kSvgSize = 512;
inline constexpr double kSvgPixelsPerUnit = 128.0;

/// Closed paths on a 512x512 canvas with the origin at its centre and
/// 128 px per unit length; y points up.
inline std::string polygons_svg(const std::vector<SvgLayer>& layers) {
    const double c = kSvgSize / 2.0;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSvgSize << "\" height=\"" << kSvgSize
       << "\" viewBox=\"0 0 " << kSvgSize << ' ' << kSvgSize << "\">\n";
    os << "  <line x1=\"0\" y1=\"" << c << "\" x2=\"" << kSvgSize << "\" y2=\"" << c
       << "\" stroke=\"#ccc\" stroke-width=\"1\"/>\n";
    os << "  <line x1=\"" << c << "\" y1=\"0\" x2=\"" << c << "\" y2=\"" << kSvgSize
       << "\" stroke=\"#ccc\" stroke-width=\"1\"/>\n";
    for (const auto& layer : layers) {
        if (layer.polygon.empty()) continue;
        os << "  <path d=\"";
        bool first = true;
        for (const auto& q : layer.polygon.vertices()) {
            os << (first ? 'M' : 'L') << format_number(c + kSvgPixelsPerUnit * q.x) << ' '
               << format_number(c - kSvgPixelsPerUnit * q.y) << ' ';
            first = false;
        }
        os << "Z\" fill=\"none\" stroke=\"" << layer.stroke << "\" stroke-width=\"1.5\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

inline json to_json(const PyramidVerdict& v) {
    json j;
    j["verdict"] = v.detected ? "PyramidDetected" : "NoPyramidDetected";
    j["certified_upper"] = *v.axis.certified_upper;
    j["axis_estimate"] = to_json(v.axis);
    if (v.analytic_bound) j["gadget_bound"] = *v.analytic_bound;
    // The deterministic side is F+ unless the gadget is mirrored.
    const char* exact_key = v.mirror ? "mu_minus_axis_exact" : "mu_plus_axis_exact";
    const char* random_key = v.mirror ? "mu_plus_axis_estimate" : "mu_minus_axis_estimate";
    j[exact_key] = v.exact_side_axis;
    if (v.random_side_axis) {
        j[random_key] = to_json(*v.random_side_axis);
        j["random_side_caveat"] = "no lower-bound certificate";
    }
    j["domination_inequality"] = {{"statement", "mubar(e2) <= min{mu_minus(e2), mu_plus(e2)}"},
                                  {"consistent", v.domination_consistent}};
    j["mirror"] = v.mirror;
    return j;
}

inline json to_json(const DefectReport& r) {
    json j;
    j["epsilon"] = r.epsilon;
    j["estimate"] = to_json(r.estimate);
    j["mu_f_axis"] = to_json(r.mu_f_axis);
    j["mu_f0_axis"] = to_json(r.mu_f0_axis);
    j["cylinder"] = r.cylinder ? to_json(*r.cylinder) : json(nullptr);
    j["hypothesis_met"] = r.hypothesis_met;
    if (!r.hypothesis_met) j["flag"] = "HypothesisUnmet";
    j["stochastically_ordered"] = r.stochastically_ordered;
    j["sandwich_exact"] = r.sandwich_exact ? json(*r.sandwich_exact) : json(nullptr);
    j["upper_means_ok"] = r.upper_means_ok;
    j["lower_means_ok"] = r.lower_means_ok;
    j["note"] = "convergence to mu_F0(e2) for small epsilon is not observable at this scale";
    return j;
}

inline std::string epsilon_sweep_csv(const std::vector<EpsilonPoint>& pts, const json& config) {
    std::ostringstream os;
    os << "# config: " << config.dump() << '\n' << "epsilon,point,stderr,n,reps\n";
    for (const auto& p : pts)
        os << format_number(p.epsilon) << ',' << format_number(p.estimate.point) << ','
           << format_number(p.estimate.std_error) << ',' << p.estimate.n << ',' << p.estimate.reps << '\n';
    return os.str();
}

inline json to_json(const selftest::Report& r) {
    json suites = json::array();
    for (const auto& t : r.suites) suites.push_back({{"suite", t.suite}, {"checks", t.checks}, {"failures", t.failures}});
    json failures = json::array();
    for (const auto& f : r.failures) failures.push_back({{"suite", f.suite}, {"invariant", f.invariant}, {"detail", f.detail}});
    json j;
    j["ok"] = r.ok();
    j["suites"] = suites;
    j["failures"] = failures;
    j["seconds"] = r.seconds;
    j["budget_seconds"] = r.budget_seconds;
    if (r.over_budget()) j["warning"] = "selftest exceeded its time budget";
    return j;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Config, "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::Config, "'" + path + "' is not valid JSON: " + e.what());
    }
}

}  // namespace ifpp::io
