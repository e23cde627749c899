#include <doctest.h>

#include <filesystem>
#include <json.hpp>

#include "accelerograph/errors.hpp"
#include "accelerograph/ingest.hpp"
#include "accelerograph/synth.hpp"
#include "oracles.hpp"

using namespace accelerograph;
namespace fs = std::filesystem;

namespace {

CsvOptions tiny() {
    CsvOptions o;
    o.min_samples = 2;
    return o;
}

}  // namespace

TEST_CASE("three-row CSV") {
    const Trace t = parse_csv("time,x,y,z\n0,0,0,9.8\n10,0,0,9.8\n20,0,0,9.8", tiny());
    REQUIRE(t.size() == 3);
    CHECK(t.sample_period == 10.0);
    CHECK(t.samples[2] == AccelSample{20, 0, 0, 9.8});
}

TEST_CASE("CSV errors") {
    CHECK_THROWS_AS(parse_csv("time,x,y,z\n0,0,0,9.8\n10,0,0,9.8\n5,0,0,9.8", tiny()), FormatError);
    CHECK_THROWS_AS(parse_csv("time,x,y\n0,0,0\n10,0,0\n", tiny()), ConfigError);
    CHECK_THROWS_AS(parse_csv("time,x,y,z\n0,0,abc,9.8\n10,0,0,9.8\n", tiny()), FormatError);
    CHECK_THROWS_AS(parse_csv("time,x,y,z\n0,0,0,9.8\n10,0,0,9.8\n"), TooShort);
    CHECK_THROWS_AS(parse_csv(""), FormatError);
}

TEST_CASE("columns by name or index") {
    const std::string text = "a,b,c,d,e\n0,1,2,3,4\n10,5,6,7,8\n";
    CsvOptions o = tiny();
    o.columns = {std::size_t{0}, std::string("d"), std::size_t{1}, std::string("e")};
    const Trace t = parse_csv(text, o);
    CHECK(t.samples[1] == AccelSample{10, 7, 5, 8});
    CHECK(std::get<std::size_t>(parse_column_ref("3")) == 3);
    CHECK(std::get<std::string>(parse_column_ref("x3")) == "x3");
}

TEST_CASE("synthetic streams round-trip through CSV") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        SynthConfig cfg;
        cfg.seed = seed;
        const auto s = gen_stream("QUIZ", cfg);
        const Trace back = parse_csv(write_csv(s.trace));
        CHECK(back.samples == s.trace.samples);
        CHECK(back.sample_period == cfg.sample_period_ms);
    }
}

TEST_CASE("normalization") {
    SUBCASE("uniform trace is unchanged") {
        const Trace t = parse_csv("time,x,y,z\n0,1,2,3\n10,2,3,4\n20,5,6,7\n", tiny());
        CHECK(normalize_trace(t).samples == t.samples);
    }
    SUBCASE("gap is filled by linear interpolation") {
        const Trace t = parse_csv("time,x,y,z\n0,0,0,0\n10,1,1,1\n30,3,3,3\n", tiny());
        const Trace n = normalize_trace(t);
        REQUIRE(n.size() == 4);
        CHECK(n.samples[2].t == 20.0);
        CHECK(n.samples[2].ax == doctest::Approx(2.0));
        CHECK(n.sample_period == 10.0);
    }
    SUBCASE("five percent jitter is tolerated") {
        oracle::Rng rng(8);
        Trace t;
        double time = 0;
        for (int i = 0; i < 200; ++i) {
            t.samples.push_back({time, oracle::uniform(rng, -1, 1), 0, 9.81});
            time += 10.0 * oracle::uniform(rng, 0.95, 1.05);
        }
        CHECK(normalize_trace(t).samples == t.samples);
    }
    SUBCASE("too short") {
        Trace t;
        t.samples.push_back({});
        CHECK_THROWS_AS(normalize_trace(t), TooShort);
    }
}

TEST_CASE("parsing is deterministic") {
    SynthConfig cfg;
    const std::string text = write_csv(gen_stream("AB", cfg).trace);
    CHECK(normalize_trace(parse_csv(text)) == normalize_trace(parse_csv(text)));
}

TEST_CASE("training set persistence") {
    const TrainingSet set = oracle::ground_truth_training_set(0.15, 20, 4);
    REQUIRE(set.templates.size() == 520);
    const fs::path path = fs::temp_directory_path() / "accelerograph_ingest_set.json";
    save_training_set(set, path);
    CHECK(load_training_set(path) == set);
    fs::remove(path);

    SUBCASE("99-point template is corrupt") {
        auto j = nlohmann::json::parse(training_set_to_json(set));
        j["templates"][0]["points"].erase(0);
        CHECK_THROWS_AS(training_set_from_json(j.dump()), CorruptSet);
    }
    SUBCASE("unknown format version") {
        auto j = nlohmann::json::parse(training_set_to_json(set));
        j["meta"]["format_version"] = 999;
        CHECK_THROWS_AS(training_set_from_json(j.dump()), VersionError);
    }
    SUBCASE("axis class that axis detection does not reproduce") {
        auto j = nlohmann::json::parse(training_set_to_json(set));
        j["templates"][0]["axis_class"] = j["templates"][0]["axis_class"] == "both" ? "x" : "both";
        CHECK_THROWS_AS(training_set_from_json(j.dump()), CorruptSet);
    }
    SUBCASE("coordinates outside the unit square") {
        auto j = nlohmann::json::parse(training_set_to_json(set));
        j["templates"][0]["points"][3][0] = 1.5;
        CHECK_THROWS_AS(training_set_from_json(j.dump()), CorruptSet);
    }
    SUBCASE("not JSON") { CHECK_THROWS_AS(training_set_from_json("{"), FormatError); }
}
