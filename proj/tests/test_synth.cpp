#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "accelerograph/errors.hpp"
#include "accelerograph/segment.hpp"
#include "accelerograph/synth.hpp"
#include "oracles.hpp"

using namespace accelerograph;

namespace {

SynthConfig clean() {
    SynthConfig c;
    c.noise_sd = 0.0;
    return c;
}

// Number of maximal runs of strictly positive values.
std::size_t positive_lobes(const std::vector<double>& v) {
    std::size_t lobes = 0;
    bool inside = false;
    for (double x : v) {
        if (x > 1e-12 && !inside) ++lobes;
        inside = x > 1e-12;
    }
    return lobes;
}

}  // namespace

TEST_CASE("R lobe without noise") {
    SynthRng rng(3);
    const auto s = gen_primitive(GesturePrimitive::R, clean(), rng);
    for (double x : s.x) CHECK(x >= 0.0);
    for (double y : s.y) CHECK(y == 0.0);
    for (double z : s.z) CHECK(z == kGravity);
    CHECK(positive_lobes(s.x) == 1);
}

TEST_CASE("L is R mirrored at the same seed") {
    SynthRng q1(8), q2(8);
    const auto rq = gen_primitive(GesturePrimitive::R, clean(), q1);
    const auto lq = gen_primitive(GesturePrimitive::L, clean(), q2);
    REQUIRE(rq.size() == lq.size());
    for (std::size_t i = 0; i < rq.size(); ++i) CHECK(lq.x[i] == -rq.x[i]);
}

TEST_CASE("lobe area matches the half-sine integral") {
    SynthConfig cfg = clean();
    cfg.amplitude_jitter = 0.0;
    cfg.duration_jitter = 0.0;
    for (std::size_t duration : {20u, 40u, 80u}) {
        cfg.pulse_duration = duration;
        SynthRng rng(1);
        const auto s = gen_primitive(GesturePrimitive::D, cfg, rng);
        double sum = 0;
        for (double y : s.y) sum += y;
        const double want = 2.0 * cfg.pulse_amplitude * static_cast<double>(duration) / std::numbers::pi;
        CHECK(std::abs(sum - want) <= 0.01 * want);
    }
}

TEST_CASE("letters are built from their primitives") {
    SUBCASE("B has two positive x lobes") {
        SynthRng rng(2);
        const auto b = gen_letter('B', clean(), rng);
        CHECK(positive_lobes(b.x) == 2);
        for (double y : b.y) CHECK(y == 0.0);
    }
    SUBCASE("V has one positive y lobe") {
        SynthRng rng(2);
        const auto v = gen_letter('V', clean(), rng);
        CHECK(positive_lobes(v.y) == 1);
        for (double x : v.x) CHECK(x == 0.0);
    }
    SUBCASE("O is four lobes and three gaps long") {
        SynthConfig cfg = clean();
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            SynthRng rng(seed);
            const auto o = gen_letter('O', cfg, rng);
            const double lo = 4 * std::floor(40 * 0.85) + 3 * kPrimitiveGap;
            const double hi = 4 * std::ceil(40 * 1.15) + 3 * kPrimitiveGap;
            CHECK(static_cast<double>(o.size()) >= lo);
            CHECK(static_cast<double>(o.size()) <= hi);
        }
        cfg.duration_jitter = 0.0;
        SynthRng rng(1);
        CHECK(gen_letter('O', cfg, rng).size() == 4 * 40 + 3 * kPrimitiveGap);
    }
}

TEST_CASE("streams interleave jerks and letters") {
    SynthConfig cfg;
    const auto one = gen_stream("A", cfg);
    REQUIRE(one.letter_spans.size() == 1);
    CHECK(one.letter_spans[0].first == cfg.jerk_duration);
    CHECK(one.trace.size() == one.letter_spans[0].second + 1 + cfg.jerk_duration);
    CHECK(one.truth == "A");

    const auto many = gen_stream("hello", cfg);
    CHECK(many.truth == "HELLO");
    REQUIRE(many.letter_spans.size() == 5);
    for (std::size_t i = 1; i < 5; ++i)
        CHECK(many.letter_spans[i].first == many.letter_spans[i - 1].second + 1 + cfg.jerk_duration);
    for (std::size_t i = 0; i < many.trace.size(); ++i) CHECK(many.trace.samples[i].t == 10.0 * static_cast<double>(i));

    CHECK_THROWS_AS(gen_stream("", cfg), ConfigError);
    CHECK_THROWS_AS(gen_stream("A1", cfg), UnknownLetter);
}

TEST_CASE("jerks are white noise of the configured spread") {
    SynthConfig cfg;
    cfg.jerk_duration = 20000;
    SynthRng rng(5);
    const auto j = gen_jerk(cfg, rng);
    double sx = 0, sxx = 0;
    for (double x : j.x) sx += x, sxx += x * x;
    const double n = static_cast<double>(j.size());
    const double mean = sx / n, sd = std::sqrt(sxx / n - mean * mean);
    CHECK(std::abs(mean) < 0.15);
    CHECK(sd == doctest::Approx(cfg.jerk_amplitude_sd).epsilon(0.02));
}

TEST_CASE("same seed gives the same trace") {
    SynthConfig cfg;
    cfg.seed = 1234;
    CHECK(gen_stream("JUMP", cfg).trace == gen_stream("JUMP", cfg).trace);
    cfg.seed = 1235;
    SynthConfig other;
    other.seed = 1234;
    CHECK_FALSE(gen_stream("JUMP", cfg).trace == gen_stream("JUMP", other).trace);
}

TEST_CASE("configuration checks") {
    SynthConfig cfg;
    cfg.pulse_duration = 1;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = {};
    cfg.noise_sd = -1;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = {};
    cfg.amplitude_jitter = 1.0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    CHECK(SynthConfig{}.pulse_amplitude > 5 * SynthConfig{}.noise_sd);
}

TEST_CASE("random letters follow the alphabet frequencies") {
    std::mt19937_64 engine(2718);
    const std::size_t draws = 100000;
    const std::string text = random_letters(draws, engine);
    std::array<std::size_t, 26> counts{};
    for (char c : text) ++counts[static_cast<std::size_t>(c - 'A')];
    double chi2 = 0;
    for (const auto& e : alphabet_table()) {
        const double expected = e.rel_freq * static_cast<double>(draws);
        const double observed = static_cast<double>(counts[static_cast<std::size_t>(e.letter - 'A')]);
        const double sigma = std::sqrt(static_cast<double>(draws) * e.rel_freq * (1 - e.rel_freq));
        CHECK(std::abs(observed - expected) <= 3 * sigma + 1);
        chi2 += (observed - expected) * (observed - expected) / expected;
    }
    // 25 degrees of freedom; 99.9th percentile is about 52.6
    CHECK(chi2 < 52.6);
}

TEST_CASE("primitive counts average the table constant") {
    std::mt19937_64 engine(31);
    const std::string text = random_letters(10000, engine);
    double total = 0;
    for (char c : text) total += static_cast<double>(gesture_length(c));
    CHECK(std::abs(total / 10000.0 - 2.332) <= 0.01 * 2.332);
}

TEST_CASE("recovered segments align with the generated spans") {
    SynthConfig cfg;
    std::size_t aligned = 0, trials = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        cfg.seed = seed;
        std::mt19937_64 pick(seed);
        const auto s = gen_stream(random_letters(1 + seed % 5, pick), cfg);
        ++trials;
        try {
            const auto r = segment_trace(s.trace);
            if (r.segments.size() != s.letter_spans.size()) continue;
            bool ok = true;
            for (std::size_t i = 0; i < r.segments.size(); ++i) {
                const auto [a, b] = s.letter_spans[i];
                const auto diff = [](std::size_t x, std::size_t y) { return x > y ? x - y : y - x; };
                if (diff(r.segments[i].start, a) > 10 || diff(r.segments[i].end, b) > 10) ok = false;
            }
            if (ok) ++aligned;
        } catch (const Error&) {
        }
    }
    CHECK(static_cast<double>(aligned) >= 0.98 * static_cast<double>(trials));
}
