#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ifpp/estimate.hpp"
#include "ifpp/fpp.hpp"
#include "ifpp/shape.hpp"

namespace ifpp::selftest {

struct Failure {
    std::string suite;
    std::string invariant;
    std::string detail;
};

struct SuiteTally {
    std::string suite;
    std::int64_t checks = 0;
    std::int64_t failures = 0;
};

struct Report {
    std::vector<SuiteTally> suites;
    std::vector<Failure> failures;
    double seconds = 0.0;
    double budget_seconds = 300.0;
    bool over_budget() const { return seconds > budget_seconds; }
    bool ok() const { return failures.empty(); }
};

struct Options {
    std::uint64_t seed = 1;
    /// Replace every field by one whose weights drift with the call count.
    bool corrupt = false;
    double budget_seconds = 300.0;
    /// Failures recorded per suite before the rest are only counted.
    std::size_t max_listed = 5;
};

/// Test hook: an impure weight source. Every third evaluation adds 1/4.
class CorruptedField {
public:
    explicit CorruptedField(const WeightField& base) : base_(base) {}
    double weight(const Edge& e) const { return base_.weight(e) + (calls_.fetch_add(1) % 3 == 0 ? 0.25 : 0.0); }

private:
    const WeightField& base_;
    mutable std::atomic<std::uint64_t> calls_{0};
};

inline Dist random_dist(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> val(0.0, 3.0), unit(0.05, 1.0);
    switch (std::uniform_int_distribution<int>(0, 3)(gen)) {
        case 0: return Dist::point(std::round(val(gen) * 4) / 4);
        case 1: return Dist::uniform(0.0, 0.5 + val(gen));
        case 2: return Dist::exponential(0.5 + val(gen));
        default: {
            // Distinct quarter-integer values in [0, 3], sorted.
            std::vector<int> grid(13);
            for (int i = 0; i < 13; ++i) grid[i] = i;
            std::shuffle(grid.begin(), grid.end(), gen);
            const int k = std::uniform_int_distribution<int>(2, 3)(gen);
            std::sort(grid.begin(), grid.begin() + k);
            std::vector<Atom> atoms;
            double total = 0;
            for (int i = 0; i < k; ++i) {
                atoms.push_back({grid[i] / 4.0, unit(gen)});
                total += atoms.back().prob;
            }
            for (auto& a : atoms) a.prob /= total;
            return Dist::atoms(std::move(atoms));
        }
    }
}

/// Family 0..3: Homogeneous, HalfPlane, HalfPlaneAxis, RandomColumns.
inline EnvSpec random_spec(int family, std::mt19937_64& gen) {
    switch (family) {
        case 0: return Homogeneous{random_dist(gen)};
        case 1: return HalfPlane{random_dist(gen), random_dist(gen)};
        case 2: return HalfPlaneAxis{random_dist(gen), random_dist(gen), random_dist(gen)};
        default: return RandomColumns{random_dist(gen), random_dist(gen), std::uniform_real_distribution<double>(0, 1)(gen)};
    }
}

inline const char* family_name(int family) {
    static const char* names[] = {"Homogeneous", "HalfPlane", "HalfPlaneAxis", "RandomColumns"};
    return names[family];
}

namespace detail {

class Recorder {
public:
    Recorder(Report& r, const Options& o) : report_(r), opt_(o) {}

    void begin(std::string suite) { report_.suites.push_back({std::move(suite), 0, 0}); }

    void check(bool ok, const std::string& invariant, const std::string& detail) {
        auto& t = report_.suites.back();
        ++t.checks;
        if (ok) return;
        if (static_cast<std::size_t>(t.failures++) < opt_.max_listed) report_.failures.push_back({t.suite, invariant, detail});
    }

private:
    Report& report_;
    const Options& opt_;
};

/// Calls fn with the field for (spec, seed), wrapped when corruption is on.
template <class Fn>
void with_field(const EnvSpec& spec, std::uint64_t seed, const Options& opt, Fn&& fn) {
    const WeightField f(spec, seed);
    if (opt.corrupt) {
        const CorruptedField c(f);
        fn(c);
    } else {
        fn(f);
    }
}

inline std::string num(double x) {
    std::ostringstream s;
    s.precision(17);
    s << x;
    return s.str();
}

inline std::string site(Site s) { return "(" + std::to_string(s.x) + "," + std::to_string(s.y) + ")"; }

}  // namespace detail

inline void purity_suite(detail::Recorder& rec, const Options& opt) {
    rec.begin("purity");
    std::mt19937_64 gen(rng::combine(opt.seed, 11));
    for (int k = 0; k < 40; ++k) {
        const auto spec = random_spec(k % 4, gen);
        const auto seed = gen();
        detail::with_field(spec, seed, opt, [&](const auto& f) {
            const WeightField fresh(spec, seed);
            for (std::int64_t x = -3; x <= 3; ++x)
                for (std::int64_t y = -3; y <= 3; ++y) {
                    const Edge e({x, y}, {x + 1, y});
                    const double a = f.weight(e), b = f.weight(e);
                    rec.check(a == b && a == fresh.weight(e), "weight(e) is a pure function of (spec, seed, e)",
                              std::string(family_name(k % 4)) + " seed " + std::to_string(seed) + " edge " + detail::site({x, y}));
                }
        });
    }
}

inline void oracle_suite(detail::Recorder& rec, const Options& opt) {
    rec.begin("oracle_equivalence");
    std::mt19937_64 gen(rng::combine(opt.seed, 12));
    std::uniform_int_distribution<int> side(1, 5);
    for (int k = 0; k < 200; ++k) {
        const int fam = k % 4;
        const auto spec = random_spec(fam, gen);
        const auto seed = gen();
        const int w = side(gen), h = side(gen);
        const auto x0 = std::uniform_int_distribution<std::int64_t>(-3, 0)(gen);
        const auto y0 = std::uniform_int_distribution<std::int64_t>(-3, 0)(gen);
        const Box box = Box::make(x0, x0 + w - 1, y0, y0 + h - 1);
        auto pick = [&] {
            return Site{std::uniform_int_distribution<std::int64_t>(box.x_lo, box.x_hi)(gen),
                        std::uniform_int_distribution<std::int64_t>(box.y_lo, box.y_hi)(gen)};
        };
        const Site u = pick(), v = pick();
        detail::with_field(spec, seed, opt, [&](const auto& f) {
            const double dj = passage_time(f, u, v, box).time;
            const double bf = brute_force_passage(f, u, v, box);
            rec.check(std::abs(dj - bf) <= 1e-12, "passage_time equals brute_force_passage",
                      std::string(family_name(fam)) + " seed " + std::to_string(seed) + " " + detail::site(u) + "->" +
                          detail::site(v) + ": " + detail::num(dj) + " vs " + detail::num(bf));
        });
    }
}

inline void coupling_suite(detail::Recorder& rec, const Options& opt) {
    rec.begin("coupling");
    const Dist minus = Dist::atoms({{0.2, 0.4}, {4, 0.6}}), plus = Dist::point(1);
    const auto sd = combine_sub_dom(minus, plus);
    const EnvSpec mid(HalfPlane{minus, plus}), sub(Homogeneous{sd.sub}), dom(Homogeneous{sd.dom});
    std::mt19937_64 gen(rng::combine(opt.seed, 13));
    std::uniform_int_distribution<std::int64_t> coord(-12, 12);
    const Box box = Box::square(15);
    for (std::uint64_t r = 0; r < 10; ++r) {
        const auto seed = rng::replication_seed(opt.seed, r);
        const WeightField fs(sub, seed), fd(dom, seed);
        detail::with_field(mid, seed, opt, [&](const auto& fm) {
            for (int p = 0; p < 10; ++p) {
                const Site u{coord(gen), coord(gen)}, v{coord(gen), coord(gen)};
                const double ts = passage_time(fs, u, v, box).time, tm = passage_time(fm, u, v, box).time,
                             td = passage_time(fd, u, v, box).time;
                rec.check(ts <= tm && tm <= td, "T_sub <= T <= T_dom under the shared coupling",
                          "seed " + std::to_string(seed) + " " + detail::site(u) + "->" + detail::site(v) + ": " +
                              detail::num(ts) + ", " + detail::num(tm) + ", " + detail::num(td));
            }
        });
    }
}

inline void variation_suite(detail::Recorder& rec, const Options& opt) {
    rec.begin("variation_identity");
    const Dist a = Dist::atoms({{0.2, 0.4}, {4, 0.6}}), c = Dist::atoms({{0.5, 0.5}, {1.5, 0.5}});
    const EnvSpec spec(HalfPlane{a, c});
    for (std::uint64_t r = 0; r < 40; ++r) {
        const auto seed = rng::replication_seed(opt.seed ^ 0x5eedu, r);
        detail::with_field(spec, seed, opt, [&](const auto& f) {
            VariationResult res;
            try {
                res = variation_check_auto(f, Site{5, 3});
            } catch (const Error& e) {
                rec.check(false, "T(0,z) = min_k [T(0,k e2) + T_+(k e2, z)]", "seed " + std::to_string(seed) + ": " + e.what());
                return;
            }
            rec.check(res.holds, "T(0,z) = min_k [T(0,k e2) + T_+(k e2, z)]",
                      "seed " + std::to_string(seed) + ": " + detail::num(res.direct) + " vs " + detail::num(res.decomposed));
        });
    }
}

inline void seminorm_suite(detail::Recorder& rec, const Options& opt) {
    rec.begin("seminorm_properties");
    std::mt19937_64 gen(rng::combine(opt.seed, 14));
    std::uniform_real_distribution<double> c(-5, 5), lam(0, 10), scale(0.2, 2.0);
    for (int i = 0; i < 200; ++i) {
        const double cm = scale(gen), cp = scale(gen);
        const auto mm = Seminorm::l1(cm), mp = Seminorm::l1(cp);
        // Axis constants never exceed min{mu-(e2), mu+(e2)}.
        const double nu = std::uniform_real_distribution<double>(0.1, 1.0)(gen) * std::min(cm, cp);
        const double lip = std::max(mm({0, 1}), mp({0, 1}));
        const Point x{c(gen), c(gen)}, y{c(gen), c(gen)};
        const double l = lam(gen);
        const double fx = mubar_eval(mm, mp, nu, x), fy = mubar_eval(mm, mp, nu, y);
        const std::string at = "x=(" + detail::num(x.x) + "," + detail::num(x.y) + ")";
        rec.check(std::abs(mubar_eval(mm, mp, nu, l * x) - l * fx) <= 1e-8 * std::max(1.0, l), "homogeneity", at);
        rec.check(mubar_eval(mm, mp, nu, x + y) <= fx + fy + 1e-7, "subadditivity", at);
        rec.check(std::abs(fx - fy) <= lip * (std::abs(x.x - y.x) + std::abs(x.y - y.y)) + 1e-7, "Lipschitz", at);
    }
}

inline Report run(const Options& opt = {}) {
    const auto start = std::chrono::steady_clock::now();
    Report report;
    report.budget_seconds = opt.budget_seconds;
    detail::Recorder rec(report, opt);
    purity_suite(rec, opt);
    oracle_suite(rec, opt);
    coupling_suite(rec, opt);
    variation_suite(rec, opt);
    seminorm_suite(rec, opt);
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace ifpp::selftest
