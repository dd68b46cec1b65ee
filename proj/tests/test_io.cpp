#include <gtest/gtest.h>

#include "ifpp/ifpp.hpp"

using namespace ifpp;
using io::json;

namespace {

void expect_config_error(const json& j, const std::string& needle) {
    try {
        io::env_from_json(j);
        FAIL() << "accepted " << j.dump();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Config);
        EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
}

}  // namespace

TEST(FormatNumber, ShortestRoundTrip) {
    EXPECT_EQ(io::format_number(1.0), "1");
    EXPECT_EQ(io::format_number(0.1), "0.1");
    EXPECT_EQ(io::format_number(0.9744), "0.9744");
    for (double x : {1.0 / 3, 2.0 / 7, 1e-300, 123456.789}) EXPECT_EQ(std::stod(io::format_number(x)), x);
}

TEST(DistJson, RoundTrips) {
    for (const auto& d : {Dist::point(1.5), Dist::atoms({{0.2, 0.4}, {4, 0.6}}), Dist::uniform(0.5, 2),
                          Dist::exponential(3)}) {
        const auto j = io::to_json(d);
        EXPECT_EQ(io::dist_from_json(j), d) << j.dump();
        EXPECT_EQ(io::to_json(io::dist_from_json(json::parse(j.dump()))), j);
    }
}

TEST(DistJson, Errors) {
    EXPECT_THROW(io::dist_from_json(json{{"kind", "point"}}), Error);
    EXPECT_THROW(io::dist_from_json(json{{"kind", "gamma"}, {"value", 1}}), Error);
    try {
        io::dist_from_json(json{{"kind", "atoms"}, {"points", {{1, 0.5}, {0.5, 0.5}}}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Config);
    }
}

TEST(EnvJson, RoundTripsEveryFamily) {
    const Dist a = Dist::atoms({{0.2, 0.4}, {4, 0.6}}), b = Dist::point(1), c = Dist::uniform(0, 2);
    for (const EnvSpec& s : {EnvSpec(Homogeneous{a}), EnvSpec(HalfPlane{a, b}), EnvSpec(HalfPlaneAxis{a, b, c}),
                             EnvSpec(RandomColumns{b, c, 0.25})}) {
        const auto j = io::to_json(s);
        EXPECT_EQ(io::to_json(io::env_from_json(json::parse(j.dump()))), j);
    }
}

TEST(EnvJson, GadgetExpands) {
    const json j = {{"kind", "gadget"}, {"y", 0.2}, {"p", 0.4}, {"K", 1}, {"z_high", 4}};
    const auto spec = io::env_from_json(j);
    const auto& hp = std::get<HalfPlane>(spec.variant());
    EXPECT_EQ(hp.minus, Dist::atoms({{0.2, 0.4}, {4, 0.6}}));
    EXPECT_EQ(hp.plus, Dist::point(1));
    json m = j;
    m["mirror"] = true;
    EXPECT_EQ(std::get<HalfPlane>(io::env_from_json(m).variant()).plus, hp.minus);
    json bad = j;
    bad["y"] = 0.5;  // (K+2) y = 1.5 >= K
    expect_config_error(bad, "(K+2) y < K");
}

TEST(EnvJson, ErrorsNameTheField) {
    expect_config_error(json{{"F", {{"kind", "point"}, {"value", 1}}}}, "'kind'");
    expect_config_error(json{{"kind", "half_plane"}, {"F_minus", {{"kind", "point"}, {"value", 1}}}}, "'F_plus'");
    expect_config_error(json{{"kind", "random_columns"}, {"F", {{"kind", "point"}, {"value", 1}}},
                             {"F0", {{"kind", "point"}, {"value", 1}}}, {"epsilon", 2}},
                        "'epsilon'");
    expect_config_error(json{{"kind", "torus"}}, "torus");
}

TEST(EstimateCsv, HeaderRowAndProvenance) {
    Estimate e;
    e.point = 0.5;
    e.std_error = 0.25;
    e.reps = 10;
    e.n = 20;
    e.seed = 99;
    e.direction = kE2;
    const json cfg = {{"seed", 99}};
    const auto csv = io::estimates_csv({e}, cfg);
    EXPECT_EQ(csv, "# config: {\"seed\":99}\n" + std::string(io::kEstimateCsvHeader) + "\n0,1,20,10,0.5,0.25,,0.95,99\n");
    e.certified_upper = 0.75;
    EXPECT_EQ(io::csv_row(e), "0,1,20,10,0.5,0.25,0.75,0.95,99");
    const auto j = io::to_json(e);
    EXPECT_EQ(j["certified_upper"], 0.75);
    EXPECT_EQ(j["low_reps"], true);
    EXPECT_EQ(j["direction"], json({0.0, 1.0}));
}

TEST(Svg, FixedCanvasAndNoTimestamp) {
    const auto diamond = Seminorm::l1(1).unit_ball();
    const auto svg = io::polygons_svg({{diamond, "#000"}});
    EXPECT_NE(svg.find("width=\"512\" height=\"512\""), std::string::npos);
    // (1,0) -> (384,256) and (0,1) -> (256,128).
    EXPECT_NE(svg.find("384 256"), std::string::npos);
    EXPECT_NE(svg.find("256 128"), std::string::npos);
    EXPECT_NE(svg.find("Z\""), std::string::npos);
    EXPECT_EQ(svg.find("<!--"), std::string::npos);
    EXPECT_EQ(svg, io::polygons_svg({{diamond, "#000"}}));
}

TEST(VerdictJson, KeysFollowMirror) {
    PyramidVerdict v;
    v.axis.certified_upper = 0.9;
    v.detected = true;
    v.random_side_axis = Estimate{};
    auto j = io::to_json(v);
    EXPECT_EQ(j["verdict"], "PyramidDetected");
    EXPECT_TRUE(j.contains("mu_plus_axis_exact"));
    EXPECT_TRUE(j.contains("mu_minus_axis_estimate"));
    EXPECT_EQ(j["random_side_caveat"], "no lower-bound certificate");
    v.mirror = true;
    v.detected = false;
    j = io::to_json(v);
    EXPECT_EQ(j["verdict"], "NoPyramidDetected");
    EXPECT_TRUE(j.contains("mu_minus_axis_exact"));
    EXPECT_TRUE(j.contains("mu_plus_axis_estimate"));
}

TEST(DefectJson, FlagsUnmetHypothesis) {
    DefectReport r;
    EXPECT_EQ(io::to_json(r)["flag"], "HypothesisUnmet");
    r.hypothesis_met = true;
    EXPECT_FALSE(io::to_json(r).contains("flag"));
}

TEST(SelftestJson, ListsFailures) {
    selftest::Report r;
    r.suites.push_back({"purity", 3, 1});
    r.failures.push_back({"purity", "weight(e) is pure", "edge"});
    const auto j = io::to_json(r);
    EXPECT_EQ(j["ok"], false);
    EXPECT_EQ(j["failures"][0]["invariant"], "weight(e) is pure");
    EXPECT_FALSE(j.contains("warning"));
    r.seconds = 400;
    EXPECT_TRUE(io::to_json(r).contains("warning"));
}

TEST(ReadJsonFile, Errors) {
    EXPECT_THROW(io::read_json_file("/nonexistent/x.json"), Error);
}
