#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace ifpp;

namespace {

const Dist kOne = Dist::point(1);
const Dist kHalf = Dist::point(0.5);
const Dist kSpread = Dist::atoms({{0, 0.5}, {2, 0.5}});
const Dist kF0 = Dist::atoms({{0.2, 0.4}, {2, 0.6}});
const Dist kF = Dist::atoms({{0.5, 0.5}, {1.5, 0.5}});

}  // namespace

TEST(DefectEstimate, EndpointsCollapseExactly) {
    const auto none = defect_estimate(kF, kF0, 0.0, 40, 12, 3);
    const auto hom_f = homogeneous_mu(kF, kE2, 40, 12, 3);
    EXPECT_EQ(none.samples, hom_f.samples);
    const auto all = defect_estimate(kF, kF0, 1.0, 40, 12, 3);
    const auto hom_f0 = homogeneous_mu(kF0, kE2, 40, 12, 3);
    EXPECT_EQ(all.samples, hom_f0.samples);
}

TEST(DefectEstimate, RejectsBadInputs) {
    EXPECT_THROW(defect_estimate(kOne, kHalf, 1.5, 10, 5, 1), Error);
    EXPECT_THROW(defect_estimate(kOne, kHalf, 0.5, 10, 1, 1), Error);
}

TEST(DefectEstimate, DeterministicPairStrictlyInsideAndDecreasing) {
    std::vector<Estimate> es;
    for (double eps : {0.1, 0.3, 0.6}) es.push_back(defect_estimate(kOne, kHalf, eps, 200, 100, 17));
    EXPECT_GT(es[1].point, 0.5);
    EXPECT_LT(es[1].point, 1.0);
    for (int i = 0; i < 2; ++i) EXPECT_GT(es[i].point - es[i + 1].point, 3 * joint_stderr(es[i], es[i + 1]));
    // A shared master seed nests the defect sets, so each replication is monotone too.
    for (std::size_t r = 0; r < es[0].samples.size(); ++r) {
        EXPECT_GE(es[0].samples[r], es[1].samples[r]);
        EXPECT_GE(es[1].samples[r], es[2].samples[r]);
    }
}

TEST(DefectEstimate, OneReplicationByHand) {
    // T_eta for the deterministic pair: column x is free to enter at cost
    // |x| steps; compare with the relaxation oracle on an explicit field.
    const EnvSpec spec(RandomColumns{kOne, kHalf, 0.3});
    const auto e = defect_estimate(kOne, kHalf, 0.3, 30, 4, 9);
    for (std::size_t i = 0; i < 4; ++i) {
        const WeightField f(spec, rng::replication_seed(9, i));
        EXPECT_NEAR(e.samples[i] * 30, oracle::relax(f, Site{0, 0}, Site{0, 30}, Box::make(-30, 30, -15, 45)), 1e-12);
    }
}

TEST(DefectSandwich, Examples) {
    const auto same = defect_sandwich(kOne, kOne, 0.4, 30, 5, 1);
    EXPECT_EQ(same.estimate.point, 1.0);
    EXPECT_EQ(same.mu_f_axis.point, 1.0);
    EXPECT_EQ(same.mu_f0_axis.point, 1.0);
    EXPECT_TRUE(same.hypothesis_met);

    const auto det = defect_sandwich(kOne, kHalf, 0.5, 50, 30, 2);
    ASSERT_TRUE(det.sandwich_exact);
    EXPECT_TRUE(*det.sandwich_exact);
    for (double t : det.estimate.samples) {
        EXPECT_GE(t, 0.5);
        EXPECT_LE(t, 1.0);
    }
    EXPECT_TRUE(det.hypothesis_met);
    EXPECT_TRUE(det.stochastically_ordered);

    const auto mps = defect_sandwich(kOne, kSpread, 0.5, 60, 40, 3);
    EXPECT_TRUE(mps.hypothesis_met);
    EXPECT_FALSE(mps.stochastically_ordered);
    EXPECT_FALSE(mps.sandwich_exact);
    EXPECT_LE(mps.estimate.point, 1.0 + 3 * mps.estimate.std_error);
    EXPECT_TRUE(mps.upper_means_ok);
    EXPECT_TRUE(mps.lower_means_ok);
    EXPECT_EQ(mps.estimate.n, mps.mu_f0_axis.n);
    EXPECT_EQ(mps.estimate.reps, mps.mu_f_axis.reps);
    EXPECT_EQ(mps.estimate.seed, mps.mu_f_axis.seed);
}

TEST(DefectSandwich, UnmetHypothesisIsFlagged) {
    const auto r = defect_sandwich(kSpread, kOne, 0.5, 30, 10, 4);
    EXPECT_FALSE(r.hypothesis_met);
    EXPECT_EQ(r.estimate.reps, 10);
}

TEST(CylinderEstimate, Examples) {
    for (std::int64_t k : {1, 3, 10}) EXPECT_EQ(cylinder_estimate(kOne, k, 40, 4, 1).point, 1.0);
    EXPECT_THROW(cylinder_estimate(kOne, 0, 40, 4, 1), Error);
    const auto k1 = cylinder_estimate(kF0, 1, 80, 60, 5);
    const auto k8 = cylinder_estimate(kF0, 8, 80, 60, 5);
    const auto big = cylinder_estimate(kF0, 64, 80, 60, 5);
    const auto free = homogeneous_mu(kF0, kE2, 80, 60, 5);
    EXPECT_LE(k8.point, k1.point + 3 * joint_stderr(k1, k8));
    EXPECT_LE(std::abs(big.point - free.point), 3 * joint_stderr(big, free));
    // Shared seeds: wider cylinders admit more paths in every replication.
    for (std::size_t i = 0; i < k1.samples.size(); ++i) {
        EXPECT_GE(k1.samples[i], k8.samples[i]);
        EXPECT_GE(k8.samples[i], free.samples[i]);
    }
}

TEST(CylinderEstimate, ReportedInSandwich) {
    const auto r = defect_sandwich(kOne, kHalf, 0.3, 30, 5, 2, {}, 2);
    ASSERT_TRUE(r.cylinder);
    EXPECT_EQ(r.cylinder->point, 0.5);
}

TEST(EpsilonSweep, SharedSeedGrid) {
    const auto sweep = epsilon_sweep(kOne, kHalf, {0.0, 0.5, 1.0}, 20, 5, 7);
    ASSERT_EQ(sweep.size(), 3u);
    EXPECT_EQ(sweep[0].estimate.point, 1.0);
    EXPECT_EQ(sweep[2].estimate.point, 0.5);
    EXPECT_EQ(sweep[1].epsilon, 0.5);
}
