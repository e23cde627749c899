#include <doctest.h>

#include <cmath>

#include "accelerograph/classify.hpp"
#include "accelerograph/errors.hpp"
#include "accelerograph/synth.hpp"
#include "oracles.hpp"

using namespace accelerograph;

namespace {

GestureCurve constant_curve(double x, double y) {
    GestureCurve c;
    c.points.assign(kCurvePoints, Point2{x, y});
    return c;
}

double mode_distance_by_hand(const GestureCurve& a, const GestureCurve& b, AxisClass mode) {
    double total = 0;
    for (std::size_t i = 0; i < kCurvePoints; ++i) {
        if (mode == AxisClass::BothAxes) {
            const double dx = a.points[i].x - b.points[i].x, dy = a.points[i].y - b.points[i].y;
            total += std::sqrt(dx * dx + dy * dy);
        } else {
            total += std::abs(a.principal_series[i] - b.principal_series[i]);
        }
    }
    return total;
}

}  // namespace

TEST_CASE("soap distance examples") {
    const auto a = constant_curve(0, 0), b = constant_curve(3, 4);
    CHECK(soap_distance(a, b, AxisClass::BothAxes) == doctest::Approx(500.0));
    CHECK(soap_distance(a, a, AxisClass::BothAxes) == 0.0);

    GestureCurve short_curve = a;
    short_curve.points.pop_back();
    CHECK_THROWS_AS(soap_distance(a, short_curve, AxisClass::BothAxes), ShapeError);
    CHECK_THROWS_AS(soap_distance(a, b, AxisClass::XAxis), ShapeError);
}

TEST_CASE("soap distance matches the pointwise sum") {
    oracle::Rng rng(6);
    for (int i = 0; i < 100; ++i) {
        const auto a = oracle::random_curve(rng), b = oracle::random_curve(rng);
        for (AxisClass mode : kAxisClasses)
            CHECK(soap_distance(a, b, mode) == doctest::Approx(mode_distance_by_hand(a, b, mode)).epsilon(1e-12));
    }
}

TEST_CASE("classification picks the matching template") {
    const TrainingSet set = oracle::ground_truth_training_set(0.15, 3, 21);
    for (const auto& t : set.templates) {
        const auto r = classify(t.curve, set);
        CHECK(r.letter == t.letter);
        CHECK(r.distance == 0.0);
        CHECK(r.source_id == t.source_id);
        CHECK(r.axis_class == t.curve.axis_class);
        if (r.runner_up) {
            CHECK(r.runner_up->letter != r.letter);
            CHECK(r.distance <= r.runner_up->distance);
        }
    }
}

TEST_CASE("ties resolve by letter, then source id") {
    oracle::Rng rng(4);
    const auto curve = oracle::random_curve(rng);
    TrainingSet set;
    set.templates.push_back({'M', "m1", curve});
    set.templates.push_back({'C', "c9", curve});
    set.templates.push_back({'C', "c1", curve});
    const auto r = classify(curve, set);
    CHECK(r.letter == 'C');
    CHECK(r.source_id == "c1");
    REQUIRE(r.runner_up);
    CHECK(r.runner_up->letter == 'M');
}

TEST_CASE("search is confined to the curve's axis family") {
    const TrainingSet set = oracle::ground_truth_training_set(0.15, 2, 5);
    oracle::Rng rng(8);
    for (AxisClass mode : kAxisClasses) {
        for (int i = 0; i < 20; ++i) {
            auto curve = oracle::random_curve(rng);
            curve.axis_class = mode;
            const auto r = classify(curve, set);
            CHECK(expected_axis_class(r.letter) == mode);
            if (r.runner_up) CHECK(expected_axis_class(r.runner_up->letter) == mode);
        }
    }
    TrainingSet only_both;
    for (const auto& t : set.templates)
        if (t.curve.axis_class == AxisClass::BothAxes) only_both.templates.push_back(t);
    auto x_curve = oracle::random_curve(rng);
    x_curve.axis_class = AxisClass::XAxis;
    CHECK_THROWS_AS(classify(x_curve, only_both), NoTemplatesForAxis);
}

TEST_CASE("G and U realisations sit nearest their own letter") {
    const TrainingSet set = oracle::ground_truth_training_set(0.15, 20, 77);
    SynthConfig cfg;
    for (char letter : {'G', 'U'}) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            cfg.seed = 5000 + seed;
            const auto s = gen_stream(std::string(1, letter), cfg);
            const auto [a, b] = s.letter_spans.front();
            const auto c = build_curve(std::span<const AccelSample>(s.trace.samples).subspan(a, b - a + 1));
            CHECK(classify(c, set).letter == letter);
        }
    }
}

TEST_CASE("distance matrix") {
    const TrainingSet set = oracle::ground_truth_training_set(0.15, 6, 13);
    for (AxisClass mode : kAxisClasses) {
        const auto m = distance_matrix(set, mode);
        REQUIRE(m.size() > 1);
        double within = 0, between = 0;
        std::size_t nw = 0, nb = 0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            CHECK(m.values[i][i] == 0.0);
            if (i > 0) CHECK(std::tie(m.letters[i - 1], m.source_ids[i - 1]) < std::tie(m.letters[i], m.source_ids[i]));
            for (std::size_t j = 0; j < m.size(); ++j) {
                CHECK(m.values[i][j] == m.values[j][i]);
                if (i == j) continue;
                if (m.letters[i] == m.letters[j]) within += m.values[i][j], ++nw;
                else between += m.values[i][j], ++nb;
            }
        }
        CHECK(within / static_cast<double>(nw) < between / static_cast<double>(nb));
    }

    TrainingSet one;
    one.templates.push_back(set.templates.front());
    const auto single = distance_matrix(one, set.templates.front().curve.axis_class);
    REQUIRE(single.size() == 1);
    CHECK(single.values[0][0] == 0.0);
}
