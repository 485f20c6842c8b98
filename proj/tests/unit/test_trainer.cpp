/**
 * @file test_trainer.cpp
 * @brief Softmax head, Adam, training loop and feature files
 */
#include "cxraug/error.hpp"
#include "cxraug/feature_io.hpp"
#include "cxraug/trainer.hpp"
#include "test_support.hpp"
#include "trainer_oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <limits>

namespace cxraug {
namespace {

// =============================================================================
// softmax / cross_entropy
// =============================================================================

TEST(SoftmaxTest, Symmetric) {
    const auto p = softmax({0.0, 0.0});
    EXPECT_EQ(p[0], 0.5);
    EXPECT_EQ(p[1], 0.5);
}

TEST(SoftmaxTest, HandValue) {
    const auto p = softmax({1.0, 0.0});
    const double e = std::exp(1.0);
    EXPECT_NEAR(p[0], e / (e + 1.0), 1e-15);
    EXPECT_NEAR(p[0], 0.7310586, 1e-7);
    EXPECT_NEAR(p[1], 0.2689414, 1e-7);
}

TEST(SoftmaxTest, ShiftInvariantAndNormalized) {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> dist(-50.0, 50.0);
    for (int i = 0; i < 200; ++i) {
        const double x = dist(gen), y = dist(gen), c = dist(gen) * 10.0;
        const auto p = softmax({x, y});
        const auto q = softmax({x + c, y + c});
        ASSERT_NEAR(p[0] + p[1], 1.0, 1e-12);
        ASSERT_NEAR(p[0], q[0], 1e-9);
        ASSERT_GT(p[0], 0.0);
        ASSERT_GT(p[1], 0.0);
    }
    EXPECT_NO_THROW(softmax({1000.0, -1000.0}));
}

TEST(SoftmaxTest, RejectsNonFinite) {
    EXPECT_THROW(softmax({std::numeric_limits<double>::quiet_NaN(), 0.0}), InvalidArgument);
    EXPECT_THROW(softmax({0.0, std::numeric_limits<double>::infinity()}), InvalidArgument);
}

TEST(CrossEntropyTest, Values) {
    EXPECT_EQ(cross_entropy({0.0, 1.0}, Label::covid), 0.0);
    EXPECT_NEAR(cross_entropy({0.5, 0.5}, Label::normal), 0.6931471805599453, 1e-15);
    EXPECT_DOUBLE_EQ(cross_entropy({1.0 - 1e-15, 1e-15}, Label::covid), -std::log(1e-12));
}

// =============================================================================
// adam_step
// =============================================================================

TEST(AdamTest, ZeroGradientIsNoOp) {
    std::vector<double> params = {1.0, -2.0, 3.5};
    AdamState state(3);
    adam_step(params, std::vector<double>(3, 0.0), state, 0.01);
    adam_step(params, std::vector<double>(3, 0.0), state, 0.01);
    EXPECT_EQ(params, (std::vector<double>{1.0, -2.0, 3.5}));
    EXPECT_EQ(state.t, 2u);
}

TEST(AdamTest, ScalarHandCheck) {
    std::vector<double> p = {1.0};
    AdamState state(1);
    adam_step(p, std::vector<double>{0.5}, state, 0.01);
    // m = 0.05, v = 0.00025, m_hat = 0.5, v_hat = 0.25
    EXPECT_NEAR(p[0], 1.0 - 0.01 * 0.5 / (0.5 + 1e-8), 1e-10);
    EXPECT_NEAR(p[0], 0.99, 1e-8);
    EXPECT_NEAR(state.m[0], 0.05, 1e-15);
    EXPECT_NEAR(state.v[0], 0.00025, 1e-15);
    EXPECT_EQ(state.t, 1u);
}

TEST(AdamTest, RejectsNonFiniteWithoutSideEffects) {
    std::vector<double> p = {1.0, 2.0};
    AdamState state(2);
    EXPECT_THROW(adam_step(p, std::vector<double>{0.1, std::nan("")}, state, 0.01), InvalidArgument);
    EXPECT_EQ(p, (std::vector<double>{1.0, 2.0}));
    EXPECT_EQ(state.t, 0u);
    EXPECT_EQ(state.m, (std::vector<double>{0.0, 0.0}));
    EXPECT_THROW(adam_step(p, std::vector<double>{0.1}, state, 0.01), InvalidArgument);
}

// =============================================================================
// gradients
// =============================================================================

TEST(GradientTest, MatchesFiniteDifferences) {
    std::mt19937_64 gen(2);
    for (int trial = 0; trial < 50; ++trial) {
        auto [head, batch] = testing::random_problem(5, 4, gen);
        const LossGradient lg = loss_and_gradient(head, batch);
        const std::vector<double> params(head.params().begin(), head.params().end());
        const auto fd = testing::finite_difference_gradient(params, 5, batch);
        EXPECT_NEAR(lg.loss, testing::reference_loss(params, 5, batch), 1e-12);
        for (std::size_t i = 0; i < fd.size(); ++i) ASSERT_NEAR(lg.grad[i], fd[i], 1e-6) << "param " << i;
    }
}

TEST(GradientTest, IndexSubsetEqualsMaterializedBatch) {
    std::mt19937_64 gen(3);
    auto [head, samples] = testing::random_problem(3, 10, gen);
    const std::vector<std::size_t> idx = {7, 2, 5};
    const std::vector<FeatureVector> picked = {samples[7], samples[2], samples[5]};
    const LossGradient a = loss_and_gradient(head, samples, idx);
    const LossGradient b = loss_and_gradient(head, picked);
    EXPECT_DOUBLE_EQ(a.loss, b.loss);
    for (std::size_t i = 0; i < a.grad.size(); ++i) EXPECT_DOUBLE_EQ(a.grad[i], b.grad[i]);
}

// =============================================================================
// train / predict
// =============================================================================

TEST(TrainConfigTest, Validation) {
    TrainConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.epochs = 0;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    cfg = TrainConfig{};
    cfg.decay_factor = 1.0;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    cfg = TrainConfig{};
    cfg.batch_size = 0;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    cfg = TrainConfig{};
    cfg.lr0 = 0.0;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(TrainTest, RejectsBadDatasets) {
    const TrainConfig cfg;
    EXPECT_THROW(train({}, cfg), InvalidArgument);
    const std::vector<FeatureVector> ragged = {{"a", Label::covid, {1.0, 2.0}}, {"b", Label::normal, {1.0}}};
    EXPECT_THROW(train(ragged, cfg), InvalidArgument);
    const std::vector<FeatureVector> nan = {{"a", Label::covid, {std::nan("")}}};
    EXPECT_THROW(train(nan, cfg), InvalidArgument);
}

TEST(TrainTest, SeparableSetIsSeparableByOracle) {
    EXPECT_EQ(testing::grid_logistic_best_accuracy(testing::separable_set()), 1.0);
}

TEST(TrainTest, ConvergesOnSeparableSet) {
    const auto data = testing::separable_set();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        TrainConfig cfg;
        cfg.seed = seed;
        const TrainResult r = train(data, cfg);
        EXPECT_EQ(testing::training_accuracy(r.head, data), 1.0) << "seed " << seed;
    }
}

TEST(TrainTest, LogShapeAndMonotoneRate) {
    std::mt19937_64 gen(4);
    auto [unused, samples] = testing::random_problem(6, 37, gen);
    TrainConfig cfg;
    cfg.epochs = 15;
    cfg.seed = 3;
    const TrainResult r = train(samples, cfg);
    ASSERT_EQ(r.log.size(), 15u);
    EXPECT_EQ(r.log.front().learning_rate, 0.01);
    for (std::size_t i = 0; i < r.log.size(); ++i) {
        EXPECT_EQ(r.log[i].epoch, static_cast<int>(i) + 1);
        EXPECT_TRUE(std::isfinite(r.log[i].mean_loss));
        if (i > 0) EXPECT_LE(r.log[i].learning_rate, r.log[i - 1].learning_rate);
    }
    for (double p : r.head.params()) EXPECT_TRUE(std::isfinite(p));
}

TEST(TrainTest, PlateauTriggersDecay) {
    // random labels on pure-noise features: the loss stops improving quickly
    std::mt19937_64 gen(5);
    auto [unused, samples] = testing::random_problem(2, 16, gen);
    TrainConfig cfg;
    cfg.epochs = 60;
    cfg.lr0 = 0.5;
    cfg.patience_epochs = 2;
    const TrainResult r = train(samples, cfg);
    bool decayed = false;
    for (std::size_t i = 1; i < r.log.size(); ++i) {
        if (r.log[i].learning_rate < r.log[i - 1].learning_rate) {
            decayed = true;
            EXPECT_DOUBLE_EQ(r.log[i].learning_rate, r.log[i - 1].learning_rate * 0.01);
            // the two epochs before the drop did not improve on their predecessors
            ASSERT_GE(i, 3u);
            EXPECT_GE(r.log[i - 1].mean_loss, r.log[i - 2].mean_loss);
            EXPECT_GE(r.log[i - 2].mean_loss, r.log[i - 3].mean_loss);
        }
    }
    EXPECT_TRUE(decayed);
}

TEST(TrainTest, BitReproducible) {
    std::mt19937_64 gen(6);
    auto [unused, samples] = testing::random_problem(8, 50, gen);
    TrainConfig cfg;
    cfg.seed = 77;
    cfg.epochs = 5;
    const TrainResult a = train(samples, cfg);
    const TrainResult b = train(samples, cfg);
    EXPECT_EQ(a.head, b.head);
    cfg.seed = 78;
    EXPECT_NE(train(samples, cfg).head, a.head);
}

TEST(TrainTest, InitializationBounds) {
    std::vector<FeatureVector> data = {{"a", Label::covid, std::vector<double>(9, 0.0)}};
    TrainConfig cfg;
    cfg.epochs = 1;
    cfg.lr0 = 1e-12;
    const TrainResult r = train(data, cfg);
    for (std::size_t d = 0; d < 9; ++d) {
        for (int c = 0; c < 2; ++c) EXPECT_LE(std::abs(r.head.weight(d, c)), 1.0 / 3.0 + 1e-9);
    }
    EXPECT_NEAR(r.head.bias(0), 0.0, 1e-9);
}

TEST(PredictTest, TieGoesToNormal) {
    const LinearHead head(3);
    const Prediction p = predict(head, {"x", Label::covid, {1.0, 2.0, 3.0}});
    EXPECT_EQ(p.label, Label::normal);
    EXPECT_EQ(p.probability, 0.5);
}

TEST(PredictTest, MarginOfOneForCovid) {
    LinearHead head(1);
    head.bias(static_cast<int>(Label::covid)) = 1.0;
    const FeatureVector f{"x", Label::normal, {0.0}};
    const Prediction p = predict(head, f);
    EXPECT_EQ(p.label, Label::covid);
    EXPECT_NEAR(p.probability, 0.7310585786300049, 1e-12);
    const Prediction again = predict(head, f);
    EXPECT_EQ(again.label, p.label);
    EXPECT_EQ(again.probability, p.probability);
}

TEST(PredictTest, DimensionMismatch) {
    EXPECT_THROW(predict(LinearHead(2), {"x", Label::normal, {1.0}}), InvalidArgument);
}

// =============================================================================
// feature files and heads
// =============================================================================

std::vector<FeatureVector> sample_features() {
    return {{"images/a.png", Label::covid, {0.25, -1.5, 3.0}},
            {"images/b.png", Label::normal, {0.1, 1e-7, -0.0}},
            {"c", Label::covid, {1.0 / 3.0, 2.0, 5.5}}};
}

TEST(FeatureIoTest, CsvRoundTripIsExact) {
    testing::ScratchDir dir("fio");
    const auto features = sample_features();
    write_features(features, dir / "f.csv");
    const auto back = read_features(dir / "f.csv");
    ASSERT_EQ(back.size(), features.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        EXPECT_EQ(back[i].id, features[i].id);
        EXPECT_EQ(back[i].label, features[i].label);
        EXPECT_EQ(back[i].values, features[i].values);
    }
    std::ifstream in(dir / "f.csv");
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "id,label,d0,d1,d2");
}

TEST(FeatureIoTest, BinaryLayout) {
    testing::ScratchDir dir("fio");
    const std::vector<FeatureVector> one = {{"ab", Label::covid, {1.0, -2.0}}};
    write_features(one, dir / "f.fvec");
    std::ifstream in(dir / "f.fvec", std::ios::binary);
    const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    const std::string expected("FVEC"
                               "\x02\x00\x00\x00"
                               "\x01\x00\x00\x00"
                               "\x02\x00\x00\x00"
                               "ab"
                               "\x01"
                               "\x00\x00\x80\x3f"
                               "\x00\x00\x00\xc0",
                               4 + 4 + 4 + 4 + 2 + 1 + 8);
    EXPECT_EQ(bytes, expected);
    const auto back = read_features(dir / "f.fvec");
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0].id, "ab");
    EXPECT_EQ(back[0].label, Label::covid);
    EXPECT_EQ(back[0].values, (std::vector<double>{1.0, -2.0}));
}

TEST(FeatureIoTest, BinaryNarrowsToFloat) {
    testing::ScratchDir dir("fio");
    const auto features = sample_features();
    write_features_binary(features, dir / "f.bin");
    const auto back = read_features(dir / "f.bin");
    ASSERT_EQ(back.size(), 3u);
    for (std::size_t i = 0; i < back.size(); ++i) {
        for (std::size_t d = 0; d < 3; ++d) {
            EXPECT_EQ(back[i].values[d], static_cast<double>(static_cast<float>(features[i].values[d])));
        }
    }
}

TEST(FeatureIoTest, MalformedInputs) {
    testing::ScratchDir dir("fio");
    const auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream(dir / name, std::ios::binary) << text;
        return dir / name;
    };
    EXPECT_THROW(read_features(write("h.csv", "name,label,d0\nx,covid,1\n")), DataError);
    EXPECT_THROW(read_features(write("l.csv", "id,label,d0\nx,Covid,1\n")), DataError);
    EXPECT_THROW(read_features(write("v.csv", "id,label,d0\nx,covid,abc\n")), DataError);
    EXPECT_THROW(read_features(write("n.csv", "id,label,d0,d1\nx,covid,1\n")), DataError);
    EXPECT_THROW(read_features(write("t.fvec", std::string("FVEC\x01\x00\x00\x00\x01\x00\x00\x00", 12))), DataError);
    EXPECT_THROW(read_features(dir / "missing.csv"), DataError);
}

TEST(HeadIoTest, RoundTrip) {
    testing::ScratchDir dir("head");
    std::mt19937_64 gen(9);
    auto [head, unused] = testing::random_problem(4, 1, gen);
    save_head(head, dir / "h.json");
    EXPECT_EQ(load_head(dir / "h.json"), head);
    std::ofstream(dir / "bad.json") << "{\"dim\": 3, \"params\": [1, 2]}";
    EXPECT_THROW(load_head(dir / "bad.json"), DataError);
}

}  // namespace
}  // namespace cxraug
