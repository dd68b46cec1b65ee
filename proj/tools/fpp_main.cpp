#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ifpp/ifpp.hpp"
#include "ifpp/io.hpp"

using namespace ifpp;
using io::json;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitSelftestFailed = 3;

struct Flags {
    std::string spec_path;
    std::string dir;
    std::optional<std::int64_t> n, reps, margin_cap, angles;
    std::optional<std::uint64_t> seed;
    std::optional<double> confidence, t;
    unsigned threads = 0;
    std::string out;
    std::string format = "csv";
    bool corrupt = false;
};

/// Resolved run parameters, excluding the thread count.
struct Config {
    std::string command;
    json env_json;
    EnvSpec spec{Homogeneous{Dist::point(1)}};
    std::optional<GadgetSpec> gadget;
    bool mirror = false;
    Direction dir = kE2;
    std::int64_t n = 100, reps = 30, margin_cap = kDefaultMarginCap, angles = 16;
    std::uint64_t seed = 0;
    double confidence = 0.95, t = 40.0;
    std::vector<double> eps_grid;
    std::optional<std::int64_t> cylinder_half_width;
    json raw;

    EstimateOptions options(unsigned threads) const {
        EstimateOptions o;
        o.threads = threads;
        o.margin_cap = margin_cap;
        o.confidence = confidence;
        return o;
    }
};

Direction parse_dir(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) fail(ErrorKind::Config, "--dir expects X,Y");
    try {
        std::size_t a = 0, b = 0;
        const double x = std::stod(s.substr(0, comma), &a);
        const double y = std::stod(s.substr(comma + 1), &b);
        if (a != comma || b != s.size() - comma - 1) throw std::invalid_argument(s);
        return {x, y};
    } catch (const std::logic_error&) {
        fail(ErrorKind::Config, "--dir expects two numbers X,Y, got '" + s + "'");
    }
}

std::int64_t int_field(const json& j, const char* key) {
    if (!j[key].is_number_integer()) fail(ErrorKind::Config, std::string("field '") + key + "' must be an integer");
    return j[key].get<std::int64_t>();
}

/// Flags override the config file; the environment comes from the file.
Config resolve(const std::string& command, const Flags& f) {
    Config c;
    c.command = command;
    json file = json::object();
    if (!f.spec_path.empty()) file = io::read_json_file(f.spec_path);
    if (!file.is_object()) fail(ErrorKind::Config, "config must be a JSON object");
    if (file.contains("schema_version") && file["schema_version"] != io::kSchemaVersion)
        fail(ErrorKind::Config, "unsupported schema_version (expected " + std::to_string(io::kSchemaVersion) + ")");
    // A bare environment object is accepted as well as a full config.
    json env = file.contains("kind") ? file : file.value("env", json());
    if (env.is_null()) fail(ErrorKind::Config, "missing required field 'env' (pass --spec PATH)");

    if (file.contains("seed")) {
        if (!file["seed"].is_number_unsigned()) fail(ErrorKind::Config, "field 'seed' must be a non-negative integer");
        c.seed = file["seed"].get<std::uint64_t>();
    }
    if (f.seed) c.seed = *f.seed;
    if (!f.seed && !file.contains("seed")) fail(ErrorKind::Config, "missing required field 'seed' (pass --seed U64)");

    if (file.contains("n")) c.n = int_field(file, "n");
    if (file.contains("reps")) c.reps = int_field(file, "reps");
    if (file.contains("margin_cap")) c.margin_cap = int_field(file, "margin_cap");
    if (file.contains("angles")) c.angles = int_field(file, "angles");
    if (file.contains("confidence")) c.confidence = io::detail::number(file, "confidence", "config");
    if (file.contains("t")) c.t = io::detail::number(file, "t", "config");
    if (file.contains("dir")) {
        const auto& d = file["dir"];
        if (!d.is_array() || d.size() != 2 || !d[0].is_number() || !d[1].is_number())
            fail(ErrorKind::Config, "field 'dir' must be [x, y]");
        c.dir = {d[0].get<double>(), d[1].get<double>()};
    }
    if (file.contains("epsilon_grid")) {
        const auto& g = file["epsilon_grid"];
        if (!g.is_array()) fail(ErrorKind::Config, "field 'epsilon_grid' must be an array");
        for (const auto& e : g) {
            if (!e.is_number()) fail(ErrorKind::Config, "field 'epsilon_grid' must hold numbers");
            c.eps_grid.push_back(e.get<double>());
        }
    }
    if (file.contains("cylinder_half_width")) c.cylinder_half_width = int_field(file, "cylinder_half_width");
    if (f.n) c.n = *f.n;
    if (f.reps) c.reps = *f.reps;
    if (f.margin_cap) c.margin_cap = *f.margin_cap;
    if (f.angles) c.angles = *f.angles;
    if (f.confidence) c.confidence = *f.confidence;
    if (f.t) c.t = *f.t;
    if (!f.dir.empty()) c.dir = parse_dir(f.dir);

    if (c.n < 1) fail(ErrorKind::Config, "field 'n' must be >= 1");
    if (c.reps < 2) fail(ErrorKind::Config, "field 'reps' must be >= 2");
    if (c.margin_cap < 1) fail(ErrorKind::Config, "field 'margin_cap' must be >= 1");
    if (!(c.confidence > 0.0 && c.confidence < 1.0)) fail(ErrorKind::Config, "field 'confidence' must lie in (0,1)");
    if (!(c.t > 0.0)) fail(ErrorKind::Config, "field 't' must be > 0");
    for (double e : c.eps_grid)
        if (!(e >= 0.0 && e <= 1.0)) fail(ErrorKind::Config, "field 'epsilon_grid' entries must lie in [0,1]");

    c.spec = io::env_from_json(env);
    if (env.value("kind", "") == "gadget") {
        c.gadget = io::gadget_from_json(env);
        c.mirror = env.value("mirror", false);
    }
    c.env_json = io::to_json(c.spec);
    c.raw = env;
    return c;
}

json config_json(const Config& c) {
    json j;
    j["schema_version"] = io::kSchemaVersion;
    j["command"] = c.command;
    j["env"] = c.gadget ? c.raw : c.env_json;
    j["seed"] = c.seed;
    j["n"] = c.n;
    j["reps"] = c.reps;
    j["confidence"] = c.confidence;
    j["margin_cap"] = c.margin_cap;
    if (c.command == "estimate") j["dir"] = {c.dir.x, c.dir.y};
    if (c.command == "sweep") j["angles"] = c.angles;
    if (c.command == "shape") j["t"] = c.t;
    if (c.command == "defects") {
        j["epsilon_grid"] = c.eps_grid;
        j["cylinder_half_width"] = c.cylinder_half_width ? json(*c.cylinder_half_width) : json(nullptr);
    }
    return j;
}

class Sink {
public:
    explicit Sink(std::string dir) : dir_(std::move(dir)) {
        if (!dir_.empty()) std::filesystem::create_directories(dir_);
    }

    void write(const std::string& name, const std::string& body) {
        if (dir_.empty()) {
            std::cout << body;
            return;
        }
        const auto path = std::filesystem::path(dir_) / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) fail(ErrorKind::Config, "cannot write '" + path.string() + "'");
        out << body;
    }

private:
    std::string dir_;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json with_config(json body, const json& config) {
    json j;
    j["config"] = config;
    for (auto& [k, v] : body.items()) j[k] = v;
    return j;
}

int run_estimate(const Config& c, const Flags& f) {
    auto e = radial_estimate(c.spec, c.dir, c.n, c.reps, c.seed, c.options(f.threads));
    // Certified directions: e2 for every family, both axes when homogeneous.
    if (c.dir == kE2 || (is_axis_direction(c.dir) && std::holds_alternative<Homogeneous>(c.spec.variant())))
        certify_upper(e);
    const auto config = config_json(c);
    Sink sink(f.out);
    if (f.format == "json") sink.write("estimate.json", dump(with_config({{"estimate", io::to_json(e)}}, config)));
    else sink.write("estimate.csv", io::estimates_csv({e}, config));
    return 0;
}

int run_sweep(const Config& c, const Flags& f) {
    const auto rows = directional_sweep(c.spec, c.angles, c.n, c.reps, c.seed, c.options(f.threads));
    const auto config = config_json(c);
    Sink sink(f.out);
    if (f.format == "json") {
        json arr = json::array();
        for (const auto& r : rows) arr.push_back(io::to_json(r));
        sink.write("sweep.json", dump(with_config({{"sweep", arr}}, config)));
    } else {
        sink.write("sweep.csv", io::sweep_csv(rows, config));
    }
    return 0;
}

/// Exact limit shape when every law is a point mass, else nullopt.
std::optional<Polygon> deterministic_prediction(const EnvSpec& spec) {
    auto point = [](const Dist& d) -> std::optional<double> {
        if (const auto* p = std::get_if<PointMass>(&d.variant())) return p->value;
        return std::nullopt;
    };
    return std::visit(
        [&](const auto& s) -> std::optional<Polygon> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Homogeneous>) {
                if (auto c = point(s.f)) return Seminorm::l1(*c).unit_ball();
            } else if constexpr (std::is_same_v<T, HalfPlane> || std::is_same_v<T, HalfPlaneAxis>) {
                auto a = point(s.minus), b = point(s.plus);
                std::optional<double> ax = b;
                if constexpr (std::is_same_v<T, HalfPlaneAxis>) ax = point(s.axis);
                if (a && b && ax) {
                    // The cheapest vertical column gives the axis constant.
                    const double nu = std::min({*a, *b, *ax});
                    return hull_shape(half_shape(Seminorm::l1(*a), -1), half_shape(Seminorm::l1(*b), 1), nu);
                }
            }
            return std::nullopt;
        },
        spec.variant());
}

int run_pyramid_into(const Config& c, const Flags& f, json& body) {
    if (!c.gadget) fail(ErrorKind::Config, "pyramid needs an env of kind 'gadget'");
    const auto v = pyramid_test(*c.gadget, c.n, c.reps, c.seed, c.options(f.threads), c.mirror);
    body["pyramid"] = io::to_json(v);
    return 0;
}

int run_shape(const Config& c, const Flags& f) {
    const auto empirical = empirical_shape(c.spec, c.t, c.seed, c.margin_cap);
    const auto prediction = deterministic_prediction(c.spec);
    json body;
    body["t"] = c.t;
    body["empirical"] = io::to_json(empirical);
    body["prediction"] = prediction ? io::to_json(*prediction) : json(nullptr);
    body["hausdorff_to_prediction"] = prediction ? json(hausdorff(empirical, *prediction)) : json(nullptr);
    if (!prediction) body["prediction_note"] = "no exact prediction for random environments";
    if (c.gadget) run_pyramid_into(c, f, body);
    const auto config = config_json(c);
    std::vector<io::SvgLayer> layers{{empirical, "#1f5fbf"}};
    if (prediction) layers.push_back({*prediction, "#c03020"});
    Sink sink(f.out);
    sink.write("shape.svg", io::polygons_svg(layers));
    sink.write("shape.csv", io::polygon_csv(empirical, config));
    sink.write("shape.json", dump(with_config(body, config)));
    return 0;
}

int run_pyramid(const Config& c, const Flags& f) {
    json body;
    run_pyramid_into(c, f, body);
    Sink sink(f.out);
    sink.write("pyramid.json", dump(with_config(body, config_json(c))));
    return 0;
}

int run_defects(const Config& c, const Flags& f) {
    const auto* rc = std::get_if<RandomColumns>(&c.spec.variant());
    if (!rc) fail(ErrorKind::Config, "defects needs an env of kind 'random_columns'");
    const auto opt = c.options(f.threads);
    const auto report = defect_sandwich(rc->f, rc->f0, rc->eps, c.n, c.reps, c.seed, opt, c.cylinder_half_width);
    const auto config = config_json(c);
    json body;
    body["report"] = io::to_json(report);
    std::vector<EpsilonPoint> sweep;
    if (!c.eps_grid.empty()) {
        sweep = epsilon_sweep(rc->f, rc->f0, c.eps_grid, c.n, c.reps, c.seed, opt);
        json arr = json::array();
        for (const auto& p : sweep) arr.push_back({{"epsilon", p.epsilon}, {"estimate", io::to_json(p.estimate)}});
        body["epsilon_sweep"] = arr;
    }
    Sink sink(f.out);
    if (f.format == "json") {
        sink.write("defects.json", dump(with_config(body, config)));
    } else {
        std::vector<Estimate> rows{report.estimate, report.mu_f_axis, report.mu_f0_axis};
        if (report.cylinder) rows.push_back(*report.cylinder);
        sink.write("defects.csv", io::estimates_csv(rows, config));
        if (!sweep.empty()) sink.write("epsilon_sweep.csv", io::epsilon_sweep_csv(sweep, config));
        if (!report.hypothesis_met) std::cerr << "warning: HypothesisUnmet (F0 is not more variable than F)\n";
    }
    return 0;
}

int run_selftest(const Flags& f) {
    selftest::Options opt;
    if (f.seed) opt.seed = *f.seed;
    opt.corrupt = f.corrupt;
    const auto report = selftest::run(opt);
    if (report.over_budget()) std::cerr << "warning: selftest took " << report.seconds << " s (budget " << report.budget_seconds << " s)\n";
    auto j = io::to_json(report);
    j.erase("seconds");
    Sink sink(f.out);
    sink.write("selftest.json", dump(j));
    for (const auto& fl : report.failures) std::cerr << "FAIL " << fl.suite << ": " << fl.invariant << " [" << fl.detail << "]\n";
    return report.ok() ? 0 : kExitSelftestFailed;
}

int exit_code(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::TruncationFailure:
        case ErrorKind::UnboundedShape:
        case ErrorKind::Inconclusive: return kExitRuntime;
        default: return kExitConfig;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"First-passage percolation experiments in inhomogeneous environments"};
    app.require_subcommand(1);
    Flags f;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--spec", f.spec_path, "JSON config or environment file")->check(CLI::ExistingFile);
        sub->add_option("--seed", f.seed, "master seed (required)");
        sub->add_option("--n", f.n, "scale n");
        sub->add_option("--reps", f.reps, "replications");
        sub->add_option("--confidence", f.confidence, "one-sided confidence level");
        sub->add_option("--threads", f.threads, "worker threads (0: all cores)");
        sub->add_option("--margin-cap", f.margin_cap, "largest truncation margin");
        sub->add_option("--out", f.out, "output directory (default: stdout)");
        sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    };

    auto* estimate = app.add_subcommand("estimate", "radial estimate of mubar(x)");
    common(estimate);
    estimate->add_option("--dir", f.dir, "direction X,Y");
    auto* sweep = app.add_subcommand("sweep", "directional sweep");
    common(sweep);
    sweep->add_option("--angles", f.angles, "number of evenly spaced angles");
    auto* shape = app.add_subcommand("shape", "empirical limit shape and prediction");
    common(shape);
    shape->add_option("--t", f.t, "growth time");
    auto* pyramid = app.add_subcommand("pyramid", "gadget pyramid verdict");
    common(pyramid);
    auto* defects = app.add_subcommand("defects", "random columnar defects");
    common(defects);
    auto* self = app.add_subcommand("selftest", "oracle and invariant suites");
    self->add_option("--seed", f.seed, "suite seed (default 1)");
    self->add_option("--out", f.out, "output directory (default: stdout)");
    self->add_flag("--corrupt-weights", f.corrupt, "test hook: run against an impure weight function")->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (self->parsed()) return run_selftest(f);
        const std::string cmd = app.get_subcommands().front()->get_name();
        const auto c = resolve(cmd, f);
        if (estimate->parsed()) return run_estimate(c, f);
        if (sweep->parsed()) return run_sweep(c, f);
        if (shape->parsed()) return run_shape(c, f);
        if (pyramid->parsed()) return run_pyramid(c, f);
        return run_defects(c, f);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}
