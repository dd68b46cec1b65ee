#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"

using namespace ifpp;

namespace {

const Dist kA = Dist::atoms({{0.2, 0.4}, {4, 0.6}});
const Dist kB = Dist::point(1);
const Dist kC = Dist::atoms({{0.5, 0.5}, {1.5, 0.5}});

EstimateOptions threads(unsigned t) {
    EstimateOptions o;
    o.threads = t;
    return o;
}

}  // namespace

TEST(RadialEstimate, DeterministicEnvironments) {
    for (std::int64_t n : {1, 7, 50}) {
        const auto e = radial_estimate(EnvSpec(Homogeneous{kB}), kE2, n, 5, 1);
        EXPECT_EQ(e.point, 1.0);
        EXPECT_EQ(e.std_error, 0.0);
        EXPECT_EQ(e.n, n);
        EXPECT_EQ(e.reps, 5);
    }
    EXPECT_DOUBLE_EQ(radial_estimate(EnvSpec(Homogeneous{Dist::point(2.5)}), kE1, 20, 3, 1).point, 2.5);
    EXPECT_EQ(radial_estimate(EnvSpec(HalfPlane{kB, kB}), kE2, 30, 4, 2).point, 1.0);
}

TEST(RadialEstimate, ValidatesInputs) {
    const EnvSpec spec(Homogeneous{kB});
    EXPECT_THROW(radial_estimate(spec, kE2, 10, 1, 1), Error);
    EXPECT_THROW(radial_estimate(spec, kE2, 0, 5, 1), Error);
    EXPECT_THROW(radial_estimate(spec, Direction{0.3, 0.0}, 5, 5, 1), Error);
    EstimateOptions bad;
    bad.confidence = 1.0;
    EXPECT_THROW(radial_estimate(spec, kE2, 5, 5, 1, bad), Error);
}

TEST(RadialEstimate, TruncationFailureCarriesReplicationSeed) {
    EstimateOptions o;
    o.margin_cap = 8;
    try {
        radial_estimate(EnvSpec(Homogeneous{kC}), kE2, 40, 3, 5, o);
        FAIL();
    } catch (const TruncationFailure& e) {
        EXPECT_EQ(e.seed(), rng::replication_seed(5, 0));
    }
}

TEST(RadialEstimate, StatisticsMatchDirectComputation) {
    const auto e = radial_estimate(EnvSpec(HalfPlane{kA, kC}), kE2, 12, 40, 3);
    ASSERT_EQ(e.samples.size(), 40u);
    double mean = 0;
    for (double x : e.samples) mean += x;
    mean /= 40;
    double ss = 0;
    for (double x : e.samples) ss += (x - mean) * (x - mean);
    const double se = std::sqrt(ss / 39) / std::sqrt(40.0);
    EXPECT_NEAR(e.point, mean, 1e-14);
    EXPECT_NEAR(e.std_error, se, 1e-14);
    for (std::size_t i = 0; i < e.samples.size(); ++i) {
        const WeightField f(EnvSpec(HalfPlane{kA, kC}), rng::replication_seed(3, i));
        EXPECT_NEAR(e.samples[i], oracle::relax(f, Site{0, 0}, Site{0, 12}, Box::make(-30, 30, -30, 42)) / 12, 1e-12);
    }
    EXPECT_FALSE(e.low_reps());
    EXPECT_TRUE(radial_estimate(EnvSpec(Homogeneous{kC}), kE2, 5, 29, 3).low_reps());
}

TEST(RunningStats, PairwiseMatchesNaive) {
    std::mt19937_64 gen(2);
    std::normal_distribution<double> g(3, 2);
    std::vector<double> xs(1001);
    for (auto& x : xs) x = g(gen);
    const auto st = pairwise_stats(xs, 0, xs.size());
    double m = 0;
    for (double x : xs) m += x;
    m /= xs.size();
    double ss = 0;
    for (double x : xs) ss += (x - m) * (x - m);
    EXPECT_NEAR(st.mean, m, 1e-12);
    EXPECT_NEAR(st.variance(), ss / 1000, 1e-10);
}

TEST(AxisConstant, CertifiedUpperBound) {
    const auto e = axis_constant(EnvSpec(Homogeneous{kB}), 25, 5, 1);
    ASSERT_TRUE(e.certified_upper);
    EXPECT_EQ(*e.certified_upper, 1.0);

    const auto h = axis_constant(EnvSpec(HalfPlane{kA, kB}), 20, 30, 9);
    ASSERT_TRUE(h.certified_upper);
    // z at 0.95 is 1.6448536269514722.
    EXPECT_NEAR(*h.certified_upper, h.point + 1.6448536269514722 * h.std_error, 1e-12);
    EstimateOptions o;
    o.confidence = 0.99;
    const auto h99 = axis_constant(EnvSpec(HalfPlane{kA, kB}), 20, 30, 9, o);
    EXPECT_NEAR(*h99.certified_upper, h99.point + 2.3263478740408408 * h99.std_error, 1e-12);
}

TEST(AxisConstant, FullDefectDensityCollapsesReplicationByReplication) {
    const auto a = axis_constant(EnvSpec(RandomColumns{kA, kC, 1.0}), 30, 10, 4);
    const auto b = axis_constant(EnvSpec(Homogeneous{kC}), 30, 10, 4);
    EXPECT_EQ(a.samples, b.samples);
    EXPECT_EQ(a.certified_upper, b.certified_upper);
}

TEST(HomogeneousMu, Examples) {
    const auto diag = homogeneous_mu(Dist::point(0.5), Direction{0.5, 0.5}, 10, 3, 1);
    EXPECT_DOUBLE_EQ(diag.point, 0.5);
    EXPECT_FALSE(diag.certified_upper);
    const auto axis = homogeneous_mu(Dist::point(0.5), kE1, 10, 3, 1);
    EXPECT_TRUE(axis.certified_upper);
    const auto skew = homogeneous_mu(Dist::point(2), Direction{1.0, -2.0}, 4, 3, 1);
    EXPECT_DOUBLE_EQ(skew.point, 6.0);

    // F(0) = 0.6 >= 1/2: a supercritical zero-weight cluster.
    const auto zero = homogeneous_mu(Dist::atoms({{0, 0.6}, {1, 0.4}}), kE2, 200, 10, 2);
    EXPECT_LT(zero.point, 0.05);
}

TEST(HomogeneousMu, ReflectionSymmetricDirections) {
    const auto up = homogeneous_mu(kC, Direction{1, 2}, 15, 60, 11);
    const auto down = homogeneous_mu(kC, Direction{1, -2}, 15, 60, 12);
    EXPECT_LE(std::abs(up.point - down.point), 3 * joint_stderr(up, down));
}

TEST(DirectionalSweep, Examples) {
    const auto unit = directional_sweep(EnvSpec(Homogeneous{kB}), 4, 20, 3, 1);
    ASSERT_EQ(unit.size(), 4u);
    for (const auto& s : unit) {
        EXPECT_EQ(s.estimate.point, 1.0);
        EXPECT_NEAR(s.unit_value(), 1.0, 1e-12);
    }
    EXPECT_THROW(directional_sweep(EnvSpec(Homogeneous{kB}), 3, 20, 3, 1), Error);

    const EnvSpec spec(Homogeneous{kC});
    const auto sweep = directional_sweep(spec, 4, 24, 20, 6);
    const auto axis = radial_estimate(spec, kE2, 24, 20, 6);
    EXPECT_EQ(sweep[1].target, (Site{0, 24}));
    EXPECT_EQ(sweep[1].estimate.samples, axis.samples);
}

TEST(DirectionalSweep, MirrorsTheSwappedSpec) {
    const auto fwd = directional_sweep(EnvSpec(HalfPlane{kA, kC}), 8, 16, 60, 21);
    const auto rev = directional_sweep(EnvSpec(HalfPlane{kC, kA}), 8, 16, 60, 22);
    // Angle index j maps to the index of pi - theta.
    for (std::size_t j = 0; j < 8; ++j) {
        const std::size_t k = (4 + 8 - j) % 8;
        EXPECT_EQ(fwd[j].target.x, -rev[k].target.x);
        EXPECT_EQ(fwd[j].target.y, rev[k].target.y);
        if (fwd[j].target.x == 0) continue;  // axis directions share the asymmetric axis column
        EXPECT_LE(std::abs(fwd[j].estimate.point - rev[k].estimate.point),
                  3 * joint_stderr(fwd[j].estimate, rev[k].estimate))
            << j;
    }
}

TEST(Reproducibility, BitIdenticalAcrossThreadCounts) {
    const EnvSpec spec(RandomColumns{kA, kC, 0.3});
    const auto a = radial_estimate(spec, Direction{1, 1}, 15, 16, 77, threads(1));
    const auto b = radial_estimate(spec, Direction{1, 1}, 15, 16, 77, threads(4));
    const auto c = radial_estimate(spec, Direction{1, 1}, 15, 16, 77, threads(3));
    EXPECT_EQ(a.samples, b.samples);
    EXPECT_EQ(a.point, b.point);
    EXPECT_EQ(a.std_error, b.std_error);
    EXPECT_EQ(a.point, c.point);
    EXPECT_EQ(a.std_error, c.std_error);
}

TEST(MonotoneCertification, DoublingDoesNotRaiseTheBound) {
    const EnvSpec spec(HalfPlane{kA, kB});
    const auto m = axis_constant(spec, 20, 60, 31);
    const auto m2 = axis_constant(spec, 40, 60, 32);
    EXPECT_LE(*m2.certified_upper, *m.certified_upper + 3 * joint_stderr(m, m2));
}

TEST(Coupling, HalfPlaneBetweenSubAndDomPerReplication) {
    const auto sd = combine_sub_dom(kA, kB);
    const auto mid = radial_estimate(EnvSpec(HalfPlane{kA, kB}), kE2, 25, 20, 8);
    const auto sub = homogeneous_mu(sd.sub, kE2, 25, 20, 8);
    const auto dom = homogeneous_mu(sd.dom, kE2, 25, 20, 8);
    for (std::size_t i = 0; i < mid.samples.size(); ++i) {
        EXPECT_LE(sub.samples[i], mid.samples[i]);
        EXPECT_LE(mid.samples[i], dom.samples[i]);
    }
    EXPECT_LE(sub.point, mid.point);
    EXPECT_LE(mid.point, dom.point);
}
