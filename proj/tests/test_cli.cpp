#include <doctest.h>

#include <filesystem>
#include <json.hpp>
#include <regex>
#include <sstream>

#include "accelerograph/errors.hpp"
#include "accelerograph/ingest.hpp"
#include "cli.hpp"
#include "oracles.hpp"

using namespace accelerograph;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    Run r;
    r.code = cli::run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("accelerograph_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string str(const fs::path& p) { return p.string(); }

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

// Builds the shared corpus and training set once.
const fs::path& trained_dir() {
    static const fs::path dir = [] {
        const fs::path d = scratch("trained");
        REQUIRE(run({"synth", "--corpus", "--per-letter", "20", "--seed", "5", "--out", str(d / "corpus")}).code == 0);
        const Run t = run({"train", str(d / "corpus"), "--out", str(d / "set.json")});
        REQUIRE(t.code == 0);
        return d;
    }();
    return dir;
}

}  // namespace

TEST_CASE("synth then segment finds the letters") {
    const fs::path d = scratch("segment");
    REQUIRE(run({"synth", "CAB", "--seed", "3", "--out", str(d / "cab.csv")}).code == 0);
    CHECK(read_text_file(d / "cab.csv.truth") == "cab.csv CAB\n");
    const Run r = run({"segment", str(d / "cab.csv"), "--out", str(d / "seg.json"), "--plot"});
    REQUIRE(r.code == 0);
    const json j = json::parse(read_text_file(d / "seg.json"));
    CHECK(j["segments"].size() == 3);
    CHECK(j["format_version"] == 1);
    CHECK(j["cutoffs"]["bagged"].get<double>() ==
          doctest::Approx(0.5 * (j["cutoffs"]["kmeans"].get<double>() + j["cutoffs"]["gmm"].get<double>())));

    const std::string svg = read_text_file(d / "seg.svg");
    CHECK(count_of(svg, "<line class=\"cutoff\"") == 3);
    CHECK(svg.find(">k-means<") != std::string::npos);
    CHECK(svg.find(">GMM<") != std::string::npos);
    CHECK(svg.find(">bagged<") != std::string::npos);
    CHECK(count_of(svg, "<polyline") == 1);

    REQUIRE(run({"plot", str(d / "seg.json"), "--kind", "variance", "--out", str(d / "again.svg")}).code == 0);
    CHECK(count_of(read_text_file(d / "again.svg"), "<line class=\"cutoff\"") == 3);
}

TEST_CASE("random streams segment into their letter count") {
    const fs::path d = scratch("roundtrip");
    for (int seed = 1; seed <= 5; ++seed) {
        const std::string csv = str(d / ("r" + std::to_string(seed) + ".csv"));
        REQUIRE(run({"synth", "--random", "6", "--seed", std::to_string(seed), "--out", csv}).code == 0);
        const Run r = run({"segment", csv});
        REQUIRE(r.code == 0);
        CHECK(json::parse(r.out)["segments"].size() == 6);
    }
}

TEST_CASE("flat recording has no jerks") {
    const fs::path d = scratch("flat");
    std::string csv = "time,x,y,z\n";
    for (int i = 0; i < 100; ++i) csv += std::to_string(10 * i) + ",0,0,9.81\n";
    write_text_file(d / "flat.csv", csv);
    const Run r = run({"segment", str(d / "flat.csv")});
    CHECK(r.code == 3);
    CHECK(r.err.find("no jerks detected") != std::string::npos);
}

TEST_CASE("usage and input errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"plot", "x.json", "--kind", "pie"}).code == 2);
    CHECK(run({"segment", "/nonexistent/file.csv"}).code == 1);
    CHECK(run({"synth"}).code == 2);
    CHECK(run({"evaluate", "--gamma", "4"}).code == 2);
}

TEST_CASE("training from a corpus") {
    const fs::path& d = trained_dir();
    const TrainingSet set = load_training_set(d / "set.json");
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(d / "corpus")) files += e.path().extension() == ".csv";
    CHECK(files == 520);
    CHECK(set.templates.size() >= 500);
    std::map<char, std::size_t> per_letter;
    for (const auto& t : set.templates) {
        ++per_letter[t.letter];
        CHECK_MESSAGE(t.curve.axis_class == expected_axis_class(t.letter), t.source_id);
    }
    CHECK(per_letter.size() == 26);
    CHECK(set.meta.window_length == 10);
    CHECK(set.meta.spar == 0.5);
    CHECK(set.meta.pve_cutoff == 0.92);
}

TEST_CASE("a training file with two letters is rejected alone") {
    const fs::path d = scratch("train_mixed");
    REQUIRE(run({"synth", "AB", "--seed", "9", "--out", str(d / "A_1.csv")}).code == 0);
    REQUIRE(run({"synth", "A", "--seed", "10", "--out", str(d / "A_2.csv")}).code == 0);
    REQUIRE(run({"synth", "C", "--seed", "11", "--out", str(d / "C_1.csv")}).code == 0);
    fs::remove(d / "A_1.csv.truth");
    const Run r = run({"train", str(d), "--out", str(d / "set.json")});
    CHECK(r.code == 0);
    CHECK(r.err.find("skip A_1.csv") != std::string::npos);
    CHECK(r.err.find("segmentation mismatch") != std::string::npos);
    CHECK(load_training_set(d / "set.json").templates.size() == 2);

    const fs::path empty = scratch("train_empty");
    CHECK(run({"train", str(empty)}).code == 4);
}

TEST_CASE("classify a synthetic stream") {
    const fs::path& d = trained_dir();
    REQUIRE(run({"synth", "CAB", "--seed", "21", "--out", str(d / "cab.csv")}).code == 0);
    const Run r = run({"classify", str(d / "cab.csv"), str(d / "set.json"), "--verbose"});
    CHECK(r.code == 0);
    CHECK(r.out == "CAB\n");
    for (const char* field : {" pve ", " axis ", " distance ", " runner-up "}) CHECK(r.err.find(field) != std::string::npos);

    SUBCASE("empty training set") {
        TrainingSet empty;
        save_training_set(empty, d / "empty.json");
        CHECK(run({"classify", str(d / "cab.csv"), str(d / "empty.json")}).code == 4);
    }
    SUBCASE("conflicting smoothing request") {
        CHECK(run({"classify", str(d / "cab.csv"), str(d / "set.json"), "--spar", "0.8"}).code == 4);
    }
    SUBCASE("missing family gives a placeholder") {
        TrainingSet set = load_training_set(d / "set.json");
        std::erase_if(set.templates, [](const TrainingTemplate& t) { return t.curve.axis_class == AxisClass::XAxis; });
        save_training_set(set, d / "no_x.json");
        REQUIRE(run({"synth", "BAD", "--seed", "4", "--out", str(d / "bad.csv")}).code == 0);
        const Run q = run({"classify", str(d / "bad.csv"), str(d / "no_x.json")});
        CHECK(q.code == 5);
        CHECK(q.out == "?A?\n");
    }
}

TEST_CASE("evaluate with injected counts") {
    const Run r = run({"evaluate", "--gamma", "4", "--n", "5", "--k", "30"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(std::abs(j["ci"][0].get<double>() - 0.0009) <= 0.0005);
    CHECK(std::abs(j["ci"][1].get<double>() - 0.0524) <= 0.0005);
    CHECK(j["p_hat"].get<double>() == doctest::Approx(4.0 / 150.0));
    for (const char* key : {"format_version", "p_hat", "ci", "gamma", "n", "k", "alpha", "degenerate", "confusion",
                            "segmentation_failures"})
        CHECK(j.contains(key));
}

TEST_CASE("evaluate a perfect synthetic run") {
    const fs::path& d = trained_dir();
    const fs::path t = d / "eval";
    REQUIRE(run({"synth", "HELLO", "--repeat", "3", "--noise", "0", "--seed", "2", "--out", str(t)}).code == 0);
    const Run r = run({"evaluate", str(t), str(t / "truth.txt"), str(d / "set.json")});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["gamma"] == 0);
    CHECK(j["p_hat"] == 0.0);
    CHECK(j["degenerate"] == true);
    CHECK(j["n"] == 3);
    CHECK(j["k"] == 5);
    CHECK(j["confusion"]["L"]["L"] == 6);
    CHECK(j["segmentation_failures"].empty());
}

TEST_CASE("synth is deterministic") {
    const fs::path d = scratch("determinism");
    REQUIRE(run({"synth", "--random", "30", "--seed", "7", "--out", str(d / "a.csv")}).code == 0);
    REQUIRE(run({"synth", "--random", "30", "--seed", "7", "--out", str(d / "b.csv")}).code == 0);
    CHECK(read_text_file(d / "a.csv") == read_text_file(d / "b.csv"));
    const std::string truth = read_text_file(d / "a.csv.truth");
    CHECK(truth.substr(truth.find(' ') + 1) == read_text_file(d / "b.csv.truth").substr(truth.find(' ') + 1));
}

TEST_CASE("plots of a training set") {
    const fs::path& d = trained_dir();
    REQUIRE(run({"plot", str(d / "set.json"), "--kind", "heatmap", "--out", str(d / "heat")}).code == 0);
    for (const char* family : {"x", "y", "both"}) {
        const fs::path p = d / (std::string("heat_") + family + ".svg");
        REQUIRE(fs::exists(p));
        CHECK(read_text_file(p).find("<rect") != std::string::npos);
    }

    REQUIRE(run({"plot", str(d / "set.json"), "--kind", "xy", "--letter", "B", "--out", str(d / "b.svg")}).code == 0);
    const std::string svg = read_text_file(d / "b.svg");
    const std::regex path_re("<path class=\"curve\" data-letter=\"B\"[^>]* d=\"([^\"]*)\"");
    std::size_t paths = 0;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), path_re); it != std::sregex_iterator(); ++it) {
        ++paths;
        std::istringstream d_attr((*it)[1].str());
        std::string cmd;
        double x, y, xmin = 1e9, xmax = -1e9, ymin = 1e9, ymax = -1e9;
        while (d_attr >> cmd >> x >> y) {
            xmin = std::min(xmin, x), xmax = std::max(xmax, x);
            ymin = std::min(ymin, y), ymax = std::max(ymax, y);
        }
        CHECK(xmax - xmin > 5.0 * (ymax - ymin));
    }
    CHECK(paths >= 15);

    REQUIRE(run({"synth", "OK", "--seed", "1", "--out", str(d / "ok.csv")}).code == 0);
    REQUIRE(run({"plot", str(d / "ok.csv"), "--kind", "axes", "--out", str(d / "axes")}).code == 0);
    CHECK(count_of(read_text_file(d / "axes.svg"), "<polyline") == 2);
}

TEST_CASE("configuration file and flag precedence") {
    const fs::path d = scratch("config");
    REQUIRE(run({"synth", "AB", "--seed", "3", "--out", str(d / "ab.csv")}).code == 0);
    write_text_file(d / "cfg.json", R"({"window": 12, "synth": {"seed": 3}})");
    const Run from_file = run({"segment", str(d / "ab.csv"), "--config", str(d / "cfg.json")});
    REQUIRE(from_file.code == 0);
    CHECK(json::parse(from_file.out)["window"] == 12);
    const Run flag = run({"segment", str(d / "ab.csv"), "--config", str(d / "cfg.json"), "--window", "8"});
    REQUIRE(flag.code == 0);
    CHECK(json::parse(flag.out)["window"] == 8);

    write_text_file(d / "bad.json", R"({"windw": 12})");
    CHECK(run({"segment", str(d / "ab.csv"), "--config", str(d / "bad.json")}).code == 1);
    CHECK_THROWS_AS(cli::parse_config(R"({"pve_cutoff": 1.2})"), ConfigError);
    const auto cfg = cli::parse_config(R"({"io": {"time": 0, "x": "ax"}})");
    CHECK(std::get<std::size_t>(cfg.io.time) == 0);
    CHECK(std::get<std::string>(cfg.io.x) == "ax");
}
