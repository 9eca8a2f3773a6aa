#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "igbs/errors.hpp"
#include "igbs/infotheory.hpp"
#include "igbs/selection.hpp"
#include "oracle/brute_force.hpp"
#include "support.hpp"

using namespace igbs;
using testing_support::random_instance;

namespace {

// One pixel per combination of three bits: band 0 = a, band 1 = c, band 2 = b,
// GT = 1 + (a xor b). c is independent of everything.
struct XorScene {
    QuantizedCube qcube;
    GroundTruth gt;
};

XorScene xor_scene() {
    std::vector<std::uint8_t> v(3 * 8);
    std::vector<Label> labels(8);
    for (unsigned i = 0; i < 8; ++i) {
        const unsigned a = (i >> 2) & 1, b = (i >> 1) & 1, c = i & 1;
        v[0 * 8 + i] = static_cast<std::uint8_t>(a);
        v[1 * 8 + i] = static_cast<std::uint8_t>(c);
        v[2 * 8 + i] = static_cast<std::uint8_t>(b);
        labels[i] = static_cast<Label>(1 + (a ^ b));
    }
    return {QuantizedCube(3, 1, 8, 2, std::move(v)), GroundTruth(1, 8, std::move(labels))};
}

std::vector<oracle::Series> oracle_bands(const BandData& data) {
    std::vector<oracle::Series> out;
    for (std::size_t b = 0; b < data.bands(); ++b) out.push_back(data.band(b).symbols());
    return out;
}

}  // namespace

TEST(Methods, ParseIsCaseInsensitive) {
    EXPECT_EQ(parse_method("igbs"), Method::IGBS);
    EXPECT_EQ(parse_method("MrMr"), Method::MRMR);
    EXPECT_THROW(parse_method("pca"), ConfigError);
    for (Method m : kAllMethods) EXPECT_EQ(parse_method(method_name(m)), m);
}

TEST(Relevance, CopyOfLabelsGivesLabelEntropy) {
    GroundTruth gt(1, 4, {1, 1, 2, 2});
    QuantizedCube q(2, 1, 4, 4, {0, 0, 3, 3, 1, 2, 1, 2});
    const auto rel = relevance_scores(q, gt);
    EXPECT_NEAR(rel[0], 1.0, 1e-12);
    EXPECT_NEAR(rel[1], 0.0, 1e-12);
}

TEST(Relevance, IgnoresUnlabeledPixels) {
    GroundTruth gt(1, 6, {1, 1, 0, 2, 2, 0});
    QuantizedCube q(1, 1, 6, 4, {0, 0, 3, 1, 1, 2});
    EXPECT_NEAR(relevance_scores(q, gt)[0], 1.0, 1e-12);
}

TEST(EstimatedGt, MeanRoundsHalfUp) {
    GroundTruth gt(1, 3, {1, 2, 1});
    QuantizedCube q(2, 1, 3, 16, {2, 0, 1, 5, 0, 2});
    const std::vector<std::size_t> both{0, 1};
    EXPECT_EQ(build_estimated_gt(q, gt, both).symbols(), (std::vector<std::uint32_t>{4, 0, 2}));
    const std::vector<std::size_t> none;
    EXPECT_THROW(build_estimated_gt(q, gt, none), MethodError);
}

TEST(Scores, MifsAndMrmrSubtractRedundancy) {
    const auto s = xor_scene();
    const BandData data(s.qcube, s.gt);
    // bands 0 and 2 duplicated into a 2-band cube
    QuantizedCube dup(2, 1, 8, 2, [&] {
        std::vector<std::uint8_t> v(s.qcube.band(0).begin(), s.qcube.band(0).end());
        v.insert(v.end(), s.qcube.band(0).begin(), s.qcube.band(0).end());
        return v;
    }());
    const BandData dd(dup, s.gt);
    auto st = SelectionState::initial(dd, {0}, true);
    EXPECT_NEAR(score_mifs(dd, 1, st, 0.5), 0.0 - 0.5 * 1.0, 1e-12);
    EXPECT_NEAR(score_mrmr(dd, 1, st), -1.0, 1e-12);
    // copy of the only selected band: GTest equals the candidate
    EXPECT_NEAR(score_igbs(dd, 1, st, 1.0), 0.0, 1e-12);

    auto empty = SelectionState::initial(data, {}, false);
    EXPECT_THROW(score_mrmr(data, 1, empty), MethodError);
    EXPECT_THROW(score_igbs(data, 1, empty, 1.0), MethodError);
}

TEST(Scores, IgbsRewardsComplementarity) {
    const auto s = xor_scene();
    const BandData data(s.qcube, s.gt);
    const auto st = SelectionState::initial(data, {0}, true);
    EXPECT_NEAR(score_igbs(data, 2, st, 1.0), 1.0, 1e-12);
    EXPECT_NEAR(score_igbs(data, 1, st, 1.0), 0.0, 1e-12);
    EXPECT_NEAR(score_igbs(data, 2, st, 0.25), 0.25, 1e-12);
    EXPECT_NEAR(score_mrmr(data, 2, st), 0.0, 1e-12);
    EXPECT_NEAR(score_mifs(data, 2, st, 0.5), 0.0, 1e-12);
}

TEST(Scores, IgbsCandidateEqualToEstimateIsPenalized) {
    const auto inst = random_instance(9, 4);
    const BandData data(inst.qcube, inst.gt);
    const auto st = SelectionState::initial(data, {0, 1}, true);
    // candidate series equal to GTest: score = rel - I(GT;GTest)/|S|
    QuantizedCube with_est = [&] {
        std::vector<std::uint8_t> v(inst.qcube.values());
        const auto& est = st.estimated_gt->symbols();
        v.insert(v.end(), est.begin(), est.end());
        return QuantizedCube(5, inst.qcube.rows(), inst.qcube.cols(), inst.qcube.levels(), std::move(v));
    }();
    const BandData d5(with_est, inst.gt);
    auto st5 = SelectionState::initial(d5, {0}, true);
    st5.accept(d5, 1);
    const double rel = st5.relevance[4];
    const double expect = rel - mutual_information(d5.labels(), *st5.estimated_gt) / 2.0;
    EXPECT_NEAR(score_igbs(d5, 4, st5, 1.0), expect, 1e-12);
}

TEST(Greedy, XorSceneSeparatesMethods) {
    const auto s = xor_scene();
    const BandData data(s.qcube, s.gt);
    EXPECT_EQ(greedy_select(data, Method::IGBS, 2).selected, (std::vector<std::size_t>{0, 2}));
    EXPECT_EQ(greedy_select(data, Method::MRMR, 2).selected, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(greedy_select(data, Method::MIM, 3).selected, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Greedy, RejectsBadK) {
    const auto inst = random_instance(1);
    const BandData data(inst.qcube, inst.gt);
    EXPECT_THROW(greedy_select(data, Method::IGBS, 0), ConfigError);
    EXPECT_THROW(greedy_select(data, Method::IGBS, 7), ConfigError);
    EXPECT_EQ(greedy_select(data, Method::IGBS, 6).selected.size(), 6u);
}

TEST(Greedy, ParamsValidated) {
    const auto inst = random_instance(1);
    const BandData data(inst.qcube, inst.gt);
    EXPECT_THROW(greedy_select(data, Method::MIFS, 2, {-1.0, -0.02, 1.0}), ConfigError);
    EXPECT_THROW(greedy_select(data, Method::IGBS, 2, {0.5, -0.02, NAN}), ConfigError);
}

TEST(GreedyProperty, MatchesBruteForceOracle) {
    for (std::uint64_t seed = 100; seed < 130; ++seed) {
        const auto inst = random_instance(seed, 6, 16, 16, 2 + seed % 7);
        const BandData data(inst.qcube, inst.gt);
        const auto bands = oracle_bands(data);
        const auto& labels = data.labels().symbols();
        const SelectionParams p{0.5, -0.02, 1.0};
        for (Method m : kAllMethods) {
            for (std::size_t k : {1u, 3u, 6u}) {
                const auto got = greedy_select(data, m, k, p);
                const auto want =
                    oracle::greedy(bands, labels, std::string(method_name(m)), k, p.beta, p.threshold, p.lambda);
                ASSERT_EQ(got.selected, want.selected) << method_name(m) << " seed " << seed << " k " << k;
            }
        }
    }
}

TEST(GreedyProperty, SelectionIsDistinctAndOrderedByStep) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = random_instance(seed, 8);
        const BandData data(inst.qcube, inst.gt);
        for (Method m : kAllMethods) {
            const auto r = greedy_select(data, m, 5);
            auto sorted = r.selected;
            std::sort(sorted.begin(), sorted.end());
            ASSERT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
            ASSERT_EQ(r.step_scores.size(), r.selected.size());
            if (m != Method::MIBF) ASSERT_EQ(r.selected.size(), 5u);
            const auto rel = relevance_scores(data);
            ASSERT_NEAR(r.step_scores[0], *std::max_element(rel.begin(), rel.end()), 1e-12);
        }
    }
}

TEST(GreedyProperty, MimIsRelevanceRanking) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = random_instance(seed, 8);
        const BandData data(inst.qcube, inst.gt);
        const auto rel = relevance_scores(data);
        const auto r = greedy_select(data, Method::MIM, 8);
        for (std::size_t i = 1; i < r.selected.size(); ++i) {
            const double a = rel[r.selected[i - 1]], b = rel[r.selected[i]];
            ASSERT_GE(a, b - kScoreTieEpsilon);
            if (std::abs(a - b) <= kScoreTieEpsilon) ASSERT_LT(r.selected[i - 1], r.selected[i]);
        }
    }
}

TEST(GreedyProperty, ZeroWeightsReduceToMim) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = random_instance(seed, 8);
        const BandData data(inst.qcube, inst.gt);
        const auto mim = greedy_select(data, Method::MIM, 6).selected;
        EXPECT_EQ(greedy_select(data, Method::MIFS, 6, {0.0, -0.02, 1.0}).selected, mim);
        EXPECT_EQ(greedy_select(data, Method::IGBS, 6, {0.5, -0.02, 0.0}).selected, mim);
        EXPECT_EQ(greedy_select(data, Method::MIBF, 6, {0.5, -1e9, 1.0}).selected, mim);
        EXPECT_EQ(greedy_select(data, Method::MIBF, 6, {0.5, 1e9, 1.0}).selected.size(), 1u);
    }
}

TEST(GreedyProperty, Deterministic) {
    const auto inst = random_instance(77, 8);
    const BandData data(inst.qcube, inst.gt);
    for (Method m : kAllMethods) {
        const auto a = greedy_select(data, m, 5);
        const auto b = greedy_select(inst.qcube, inst.gt, m, 5);
        EXPECT_EQ(a.selected, b.selected);
        EXPECT_EQ(a.step_scores, b.step_scores);
    }
}

TEST(GreedyProperty, StepScoresMatchScoreFunctions) {
    const auto inst = random_instance(5, 8);
    const BandData data(inst.qcube, inst.gt);
    for (Method m : {Method::MIFS, Method::MRMR, Method::IGBS}) {
        const auto r = greedy_select(data, m, 5);
        auto st = SelectionState::initial(data, {r.selected[0]}, m == Method::IGBS);
        for (std::size_t i = 1; i < r.selected.size(); ++i) {
            const std::size_t b = r.selected[i];
            const double s = m == Method::MIFS   ? score_mifs(data, b, st, 0.5)
                             : m == Method::MRMR ? score_mrmr(data, b, st)
                                                 : score_igbs(data, b, st, 1.0);
            EXPECT_DOUBLE_EQ(r.step_scores[i], s) << method_name(m) << " step " << i;
            st.accept(data, b);
        }
    }
}
