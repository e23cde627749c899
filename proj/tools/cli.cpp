#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>
#include <thread>

#include "accelerograph/classify.hpp"
#include "accelerograph/errors.hpp"
#include "accelerograph/segment.hpp"
#include "accelerograph/stats.hpp"
#include "accelerograph/svg.hpp"

namespace accelerograph::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// An error that already knows its exit code.
struct Failure {
    int code;
    std::string message;
};

template <class T>
T get_as(const json& j, const char* key) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw ConfigError("unknown config key '" + key + "' in " + where);
    }
}

ColumnRef column_from_json(const json& j, const char* key) {
    if (j.is_number_unsigned()) return j.get<std::size_t>();
    if (j.is_string()) return j.get<std::string>();
    throw ConfigError(std::string("io.") + key + " must be a column name or a non-negative index");
}

template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn fn) {
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < std::min(threads, count); ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
}

std::size_t default_threads() {
    return std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 8);
}

json points_json(const GestureCurve& curve) {
    json pts = json::array();
    for (const auto& p : curve.points) pts.push_back({p.x, p.y});
    return pts;
}

std::string dump(const json& j) { return j.dump(1) + "\n"; }

void write_or_print(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty()) out << content;
    else write_text_file(path, content);
}

// "out/plot.svg" and "out/plot" both give the prefix "out/plot".
std::string svg_prefix(const std::string& path, const std::string& fallback) {
    if (path.empty()) return fallback;
    fs::path p(path);
    if (p.extension() == ".svg" || p.extension() == ".json") p.replace_extension();
    return p.string();
}

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> window;
    std::optional<double> spar;
    std::optional<double> pve_cutoff;
    std::optional<double> alpha;
    std::optional<double> noise;
    std::optional<std::string> time_col, x_col, y_col, z_col;
    std::optional<std::size_t> threads;
    bool plot = false;
    bool verbose = false;
    std::string out;
};

void add_common(CLI::App* app, Flags& f) {
    app->add_option("--config", f.config, "JSON pipeline configuration");
    app->add_option("--seed", f.seed, "random seed");
    app->add_option("--window", f.window, "moving-variance window length");
    app->add_option("--spar", f.spar, "spline smoothing parameter");
    app->add_option("--pve-cutoff", f.pve_cutoff, "PVE cutoff for single-axis routing");
    app->add_option("--out", f.out, "output path");
    app->add_flag("--verbose", f.verbose, "per-item diagnostics on standard error");
    app->add_option("--time-col", f.time_col, "time column (name or 0-based index)");
    app->add_option("--x-col", f.x_col, "x column");
    app->add_option("--y-col", f.y_col, "y column");
    app->add_option("--z-col", f.z_col, "z column");
}

PipelineConfig resolve(const Flags& f) {
    PipelineConfig cfg = f.config.empty() ? PipelineConfig{} : load_config(f.config);
    if (f.seed) cfg.synth.seed = *f.seed;
    if (f.window) {
        cfg.window = *f.window;
        cfg.window_set = true;
    }
    if (f.spar) {
        cfg.spar = *f.spar;
        cfg.spar_set = true;
    }
    if (f.pve_cutoff) {
        cfg.pve_cutoff = *f.pve_cutoff;
        cfg.pve_cutoff_set = true;
    }
    if (f.alpha) cfg.alpha = *f.alpha;
    if (f.noise) cfg.synth.noise_sd = *f.noise;
    if (f.time_col) cfg.io.time = parse_column_ref(*f.time_col);
    if (f.x_col) cfg.io.x = parse_column_ref(*f.x_col);
    if (f.y_col) cfg.io.y = parse_column_ref(*f.y_col);
    if (f.z_col) cfg.io.z = parse_column_ref(*f.z_col);
    validate(cfg);
    return cfg;
}

Trace read_trace(const fs::path& path, const PipelineConfig& cfg) {
    CsvOptions opts;
    opts.columns = cfg.io;
    return normalize_trace(read_csv_file(path, opts));
}

SmoothingConfig smoothing_of(const PipelineConfig& cfg) { return {cfg.spar, 0.0, cfg.pve_cutoff}; }

TrainingSet load_training(const fs::path& path) {
    TrainingSet set;
    try {
        set = load_training_set(path);
    } catch (const std::exception& e) {
        throw Failure{kExitTraining, e.what()};
    }
    if (set.templates.empty()) throw Failure{kExitTraining, "training set " + path.string() + " is empty"};
    return set;
}

// The training set fixes window, spar and cutoff; an explicit request for
// different values is refused rather than silently mixed.
PipelineConfig adopt_meta(PipelineConfig cfg, const TrainingMeta& meta) {
    auto conflict = [](const char* name, const std::string& want, const std::string& have) {
        return Failure{kExitTraining, std::string(name) + " " + want + " conflicts with the training set (" + have + ")"};
    };
    if (cfg.window_set && cfg.window != meta.window_length)
        throw conflict("window", std::to_string(cfg.window), std::to_string(meta.window_length));
    if (cfg.spar_set && cfg.spar != meta.spar)
        throw conflict("spar", std::to_string(cfg.spar), std::to_string(meta.spar));
    if (cfg.pve_cutoff_set && cfg.pve_cutoff != meta.pve_cutoff)
        throw conflict("pve-cutoff", std::to_string(cfg.pve_cutoff), std::to_string(meta.pve_cutoff));
    cfg.window = meta.window_length;
    cfg.spar = meta.spar;
    cfg.pve_cutoff = meta.pve_cutoff;
    return cfg;
}

json segments_json(const Trace& trace, const SegmentationResult& r) {
    json segs = json::array();
    for (const auto& s : r.segments)
        segs.push_back({{"start", s.start},
                        {"end", s.end},
                        {"t_start", trace.samples[s.start].t},
                        {"t_end", trace.samples[s.end].t}});
    std::string labels;
    for (Level l : r.cutoffs.labels) labels += l == Level::High ? 'H' : 'L';
    return {{"format_version", kReportFormatVersion},
            {"window", r.variance.window},
            {"base_len", r.variance.base_len},
            {"cutoffs",
             {{"kmeans", r.cutoffs.kmeans_cut},
              {"gmm", r.cutoffs.gmm_cut},
              {"bagged", r.cutoffs.bagged_cut},
              {"em_iterations", r.cutoffs.em_iterations},
              {"gmm_fallback", r.cutoffs.gmm_fallback}}},
            {"segments", segs},
            {"labels", labels},
            {"variance", r.variance.values}};
}

std::pair<VarSeries, CutoffReport> segments_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        if (j.at("format_version").get<int>() != kReportFormatVersion)
            throw VersionError("unsupported segments format_version");
        VarSeries v;
        v.values = j.at("variance").get<std::vector<double>>();
        v.window = j.at("window").get<std::size_t>();
        v.base_len = j.at("base_len").get<std::size_t>();
        CutoffReport c;
        const auto& cj = j.at("cutoffs");
        c.kmeans_cut = cj.at("kmeans").get<double>();
        c.gmm_cut = cj.at("gmm").get<double>();
        c.bagged_cut = cj.at("bagged").get<double>();
        return {v, c};
    } catch (const json::exception& e) {
        throw FormatError(std::string("not a segments file: ") + e.what());
    }
}

// ---------------------------------------------------------------- segment

int cmd_segment(const std::string& input, const Flags& f, std::ostream& out, std::ostream& err) {
    const PipelineConfig cfg = resolve(f);
    const Trace trace = read_trace(input, cfg);
    const SegmentationResult r = segment_trace(trace, cfg.window);
    write_or_print(f.out, dump(segments_json(trace, r)), out);
    if (f.plot) {
        const std::string path = svg_prefix(f.out, "segments") + ".svg";
        write_text_file(path, variance_svg(r.variance, r.cutoffs));
        if (f.verbose) err << "wrote " << path << "\n";
    }
    if (f.verbose)
        err << r.segments.size() << " segments; cutoffs k-means " << r.cutoffs.kmeans_cut << ", GMM "
            << r.cutoffs.gmm_cut << (r.cutoffs.gmm_fallback ? " (fallback)" : "") << ", bagged "
            << r.cutoffs.bagged_cut << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- train

struct TrainItem {
    fs::path path;
    char letter = '?';
    std::string source_id;
    std::optional<GestureCurve> curve;
    std::string error;
};

int cmd_train(const std::string& dir, const Flags& f, std::ostream& out, std::ostream& err) {
    const PipelineConfig cfg = resolve(f);
    if (!fs::is_directory(dir)) throw ConfigError("not a directory: " + dir);

    static const std::regex name_re(R"(([A-Za-z])_(.+)\.csv)");
    std::vector<TrainItem> items;
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv") paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());
    for (const auto& p : paths) {
        std::smatch m;
        const std::string name = p.filename().string();
        if (!std::regex_match(name, m, name_re)) {
            err << "skip " << name << ": name is not <LETTER>_<id>.csv\n";
            continue;
        }
        TrainItem item;
        item.path = p;
        item.letter = normalize_letter(m[1].str()[0]);
        item.source_id = p.stem().string();
        items.push_back(std::move(item));
    }

    const SmoothingConfig smoothing = smoothing_of(cfg);
    parallel_for(items.size(), f.threads.value_or(default_threads()), [&](std::size_t i) {
        auto& item = items[i];
        try {
            const Trace trace = read_trace(item.path, cfg);
            const SegmentationResult r = segment_trace(trace, cfg.window);
            if (r.segments.size() != 1) throw SegmentationMismatch(1, r.segments.size());
            item.curve = build_curve(r.segments[0].samples, smoothing);
        } catch (const std::exception& e) {
            item.error = e.what();
        }
    });

    // Majority axis family per letter; templates outside it are dropped.
    std::map<char, std::map<AxisClass, std::size_t>> votes;
    for (const auto& item : items)
        if (item.curve) ++votes[item.letter][item.curve->axis_class];
    std::map<char, AxisClass> majority;
    for (const auto& [letter, counts] : votes) {
        AxisClass best = AxisClass::BothAxes;
        std::size_t best_n = 0;
        for (AxisClass a : kAxisClasses) {
            const auto it = counts.find(a);
            if (it != counts.end() && it->second > best_n) {
                best = a;
                best_n = it->second;
            }
        }
        majority[letter] = best;
    }

    TrainingSet set;
    set.meta.window_length = cfg.window;
    set.meta.spar = cfg.spar;
    set.meta.pve_cutoff = cfg.pve_cutoff;
    std::size_t failed = 0, dropped = 0;
    for (auto& item : items) {
        const std::string name = item.path.filename().string();
        if (!item.curve) {
            ++failed;
            err << "skip " << name << ": " << item.error << "\n";
            continue;
        }
        if (item.curve->axis_class != majority[item.letter]) {
            ++dropped;
            err << "drop " << name << ": axis family " << to_string(item.curve->axis_class) << " disagrees with "
                << to_string(majority[item.letter]) << " for letter " << item.letter << "\n";
            continue;
        }
        set.templates.push_back({item.letter, item.source_id, std::move(*item.curve)});
    }
    std::sort(set.templates.begin(), set.templates.end(), [](const TrainingTemplate& a, const TrainingTemplate& b) {
        return std::tie(a.letter, a.source_id) < std::tie(b.letter, b.source_id);
    });
    if (f.verbose)
        err << set.templates.size() << " templates from " << items.size() << " files (" << failed << " failed, "
            << dropped << " dropped)\n";
    if (set.templates.empty()) throw Failure{kExitTraining, "no usable training files in " + dir};

    const std::string text = training_set_to_json(set);
    if (f.out.empty()) out << text;
    else write_text_file(f.out, text);
    return kExitOk;
}

// ---------------------------------------------------------------- classify

int cmd_classify(const std::string& input, const std::string& training_path, const std::string& curves_out,
                 const Flags& f, std::ostream& out, std::ostream& err) {
    const TrainingSet set = load_training(training_path);
    const PipelineConfig cfg = adopt_meta(resolve(f), set.meta);
    const Trace trace = read_trace(input, cfg);
    const SegmentationResult r = segment_trace(trace, cfg.window);
    const SmoothingConfig smoothing = smoothing_of(cfg);

    std::string letters;
    json curves = json::array();
    for (std::size_t i = 0; i < r.segments.size(); ++i) {
        const auto& seg = r.segments[i];
        char letter = '?';
        std::optional<GestureCurve> curve;
        try {
            curve = build_curve(seg.samples, smoothing);
            const ClassificationResult c = classify(*curve, set);
            letter = c.letter;
            if (f.verbose) {
                err << "segment " << i << " [" << seg.start << ", " << seg.end << "]: " << letter << " pve "
                    << curve->pve << " axis " << to_string(c.axis_class) << " distance " << c.distance
                    << " template " << c.source_id;
                if (c.runner_up) err << " runner-up " << c.runner_up->letter << " " << c.runner_up->distance;
                err << "\n";
            }
        } catch (const std::exception& e) {
            if (f.verbose) err << "segment " << i << " [" << seg.start << ", " << seg.end << "]: ? (" << e.what() << ")\n";
        }
        letters += letter;
        if (curve)
            curves.push_back({{"letter", std::string(1, letter)},
                              {"axis_class", to_string(curve->axis_class)},
                              {"pve", curve->pve},
                              {"points", points_json(*curve)}});
    }
    if (!curves_out.empty())
        write_text_file(curves_out, dump({{"format_version", kReportFormatVersion}, {"curves", curves}}));
    out << letters << "\n";
    return letters.find('?') == std::string::npos ? kExitOk : kExitClassification;
}

// ---------------------------------------------------------------- evaluate

json estimate_json(const ErrorExperiment& ex, const ErrorEstimate& est) {
    return {{"format_version", kReportFormatVersion},
            {"p_hat", est.p_hat},
            {"ci", {est.ci_low, est.ci_high}},
            {"gamma", ex.gamma},
            {"n", ex.n},
            {"k", ex.k},
            {"alpha", ex.alpha},
            {"degenerate", est.degenerate}};
}

struct EvalItem {
    fs::path path;
    std::string name;
    std::string truth;
    std::optional<StreamEvaluation> result;
    json failure;
};

int cmd_evaluate(const std::vector<std::string>& positional, std::optional<std::size_t> gamma,
                 std::optional<std::size_t> n, std::optional<std::size_t> k, const Flags& f, std::ostream& out,
                 std::ostream& err) {
    if (gamma || n || k) {
        if (!(gamma && n && k)) throw CLI::ValidationError("--gamma, --n and --k go together");
        const PipelineConfig cfg = resolve(f);
        const ErrorExperiment ex{*k, *n, *gamma, cfg.alpha};
        json report = estimate_json(ex, error_estimate(ex));
        report["confusion"] = json::object();
        report["segmentation_failures"] = json::array();
        write_or_print(f.out, dump(report), out);
        return kExitOk;
    }
    if (positional.size() != 3) throw CLI::ValidationError("evaluate needs TEST_DIR TRUTH_FILE TRAINING_SET");

    const fs::path test_dir = positional[0];
    const TrainingSet set = load_training(positional[2]);
    const PipelineConfig cfg = adopt_meta(resolve(f), set.meta);

    std::vector<EvalItem> items;
    std::istringstream truth_text(read_text_file(positional[1]));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(truth_text, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream fields(line);
        EvalItem item;
        if (!(fields >> item.name) || item.name.front() == '#') continue;
        if (!(fields >> item.truth))
            throw FormatError("truth file line " + std::to_string(line_no) + ": expected '<csv> <letters>'");
        for (char& c : item.truth) c = normalize_letter(c);
        item.path = test_dir / item.name;
        items.push_back(std::move(item));
    }
    if (items.empty()) throw FormatError("truth file lists no test streams");

    const SmoothingConfig smoothing = smoothing_of(cfg);
    std::vector<std::string> input_errors(items.size());
    parallel_for(items.size(), f.threads.value_or(default_threads()), [&](std::size_t i) {
        auto& item = items[i];
        try {
            item.result = run_evaluation(read_trace(item.path, cfg), item.truth, set, smoothing, cfg.window);
        } catch (const SegmentationMismatch& e) {
            item.failure = {{"file", item.name}, {"expected", e.expected()}, {"found", e.found()}, {"reason", e.what()}};
        } catch (const NoJerksDetected& e) {
            item.failure = {{"file", item.name}, {"expected", item.truth.size()}, {"found", nullptr}, {"reason", e.what()}};
        } catch (const std::exception& e) {
            input_errors[i] = item.name + ": " + e.what();
        }
    });
    for (const auto& e : input_errors)
        if (!e.empty()) throw FormatError(e);

    std::size_t total_gamma = 0, letters = 0, streams = 0;
    std::optional<std::size_t> common_length;
    bool equal_lengths = true;
    Confusion confusion;
    json failures = json::array();
    for (const auto& item : items) {
        if (!item.result) {
            failures.push_back(item.failure);
            if (f.verbose) err << item.name << ": " << item.failure["reason"].get<std::string>() << "\n";
            continue;
        }
        ++streams;
        total_gamma += item.result->gamma;
        letters += item.result->letters;
        if (common_length && *common_length != item.result->letters) equal_lengths = false;
        common_length = item.result->letters;
        for (const auto& [truth, row] : item.result->confusion)
            for (const auto& [pred, count] : row) confusion[truth][pred] += count;
        if (f.verbose) err << item.name << ": " << item.truth << " -> " << item.result->predicted << "\n";
    }
    if (streams == 0) throw Failure{kExitSegmentation, "no test stream segmented into its expected letter count"};

    // n repetitions of k letters when every stream has the same length,
    // otherwise one pass over all letters
    ErrorExperiment ex;
    ex.n = equal_lengths ? streams : 1;
    ex.k = equal_lengths ? *common_length : letters;
    ex.gamma = total_gamma;
    ex.alpha = cfg.alpha;
    json report = estimate_json(ex, error_estimate(ex));
    json cj = json::object();
    for (const auto& [truth, row] : confusion)
        for (const auto& [pred, count] : row) cj[std::string(1, truth)][std::string(1, pred)] = count;
    report["confusion"] = cj;
    report["segmentation_failures"] = failures;
    write_or_print(f.out, dump(report), out);
    return kExitOk;
}

// ---------------------------------------------------------------- synth

std::string truth_line(const std::string& csv_name, const std::string& letters) {
    return csv_name + " " + letters + "\n";
}

int cmd_synth(const std::string& letters_arg, std::optional<std::size_t> random, std::optional<std::size_t> repeat,
              bool corpus, std::size_t per_letter, const Flags& f, std::ostream& out, std::ostream& err) {
    const PipelineConfig cfg = resolve(f);
    std::mt19937_64 seeds(cfg.synth.seed);
    auto next_config = [&] {
        SynthConfig c = cfg.synth;
        c.seed = seeds();
        return c;
    };

    if (corpus) {
        if (f.out.empty()) throw CLI::ValidationError("--corpus needs --out DIR");
        fs::create_directories(f.out);
        std::size_t files = 0;
        for (const auto& entry : alphabet_table()) {
            for (std::size_t i = 1; i <= per_letter; ++i) {
                const SynthStream s = gen_stream(std::string(1, entry.letter), next_config());
                write_text_file(fs::path(f.out) / (std::string(1, entry.letter) + "_" + std::to_string(i) + ".csv"),
                                write_csv(s.trace));
                ++files;
            }
        }
        if (f.verbose) err << "wrote " << files << " files to " << f.out << "\n";
        return kExitOk;
    }

    std::string letters;
    if (random) {
        if (!letters_arg.empty()) throw CLI::ValidationError("give either LETTERS or --random, not both");
        if (*random == 0) throw CLI::ValidationError("--random needs at least one letter");
        letters = random_letters(*random, seeds);
    } else {
        if (letters_arg.empty()) throw CLI::ValidationError("synth needs LETTERS or --random K");
        for (char c : letters_arg) letters += normalize_letter(c);
    }

    if (repeat) {
        if (f.out.empty()) throw CLI::ValidationError("--repeat needs --out DIR");
        fs::create_directories(f.out);
        std::string truth;
        for (std::size_t i = 1; i <= *repeat; ++i) {
            const std::string name = "stream_" + std::to_string(i) + ".csv";
            const SynthStream s = gen_stream(letters, next_config());
            write_text_file(fs::path(f.out) / name, write_csv(s.trace));
            truth += truth_line(name, letters);
        }
        write_text_file(fs::path(f.out) / "truth.txt", truth);
        if (f.verbose) err << "wrote " << *repeat << " streams of " << letters << " to " << f.out << "\n";
        return kExitOk;
    }

    SynthConfig c = cfg.synth;
    const SynthStream s = gen_stream(letters, c);
    if (f.out.empty()) {
        out << write_csv(s.trace);
        err << letters << "\n";
    } else {
        write_text_file(f.out, write_csv(s.trace));
        write_text_file(f.out + ".truth", truth_line(fs::path(f.out).filename().string(), letters));
    }
    return kExitOk;
}

// ---------------------------------------------------------------- plot

std::vector<LabelledCurve> curves_from_file(const std::string& path, const PipelineConfig& cfg) {
    const std::string text = read_text_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw FormatError(path + " is not JSON: " + e.what());
    }
    std::vector<LabelledCurve> out;
    if (j.contains("templates")) {
        for (auto& t : training_set_from_json(text).templates) out.push_back({t.letter, std::move(t.curve)});
        return out;
    }
    try {
        for (const auto& c : j.at("curves")) {
            std::vector<Point2> pts;
            for (const auto& p : c.at("points")) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
            GestureCurve curve = detect_axis(pts, cfg.pve_cutoff);
            out.push_back({c.at("letter").get<std::string>().at(0), std::move(curve)});
        }
    } catch (const json::exception& e) {
        throw FormatError(path + " holds neither templates nor curves: " + e.what());
    }
    return out;
}

int cmd_plot(const std::string& input, const std::string& kind, const std::string& letter, const Flags& f,
             std::ostream&, std::ostream& err) {
    const PipelineConfig cfg = resolve(f);
    const std::string prefix = svg_prefix(f.out, "plot");
    std::vector<std::string> written;
    if (kind == "variance") {
        const auto [variance, cutoffs] = segments_from_json(read_text_file(input));
        write_text_file(prefix + ".svg", variance_svg(variance, cutoffs));
        written.push_back(prefix + ".svg");
    } else if (kind == "xy") {
        auto curves = curves_from_file(input, cfg);
        if (!letter.empty()) {
            const char want = normalize_letter(letter[0]);
            std::erase_if(curves, [&](const LabelledCurve& c) { return c.letter != want; });
        }
        write_text_file(prefix + ".svg", xy_svg(curves));
        written.push_back(prefix + ".svg");
    } else if (kind == "axes") {
        const Trace trace = read_trace(input, cfg);
        write_text_file(prefix + ".svg", axes_svg(trace.samples));
        written.push_back(prefix + ".svg");
    } else if (kind == "heatmap") {
        const TrainingSet set = load_training(input);
        for (AxisClass a : kAxisClasses) {
            const std::string path = prefix + "_" + std::string(to_string(a)) + ".svg";
            write_text_file(path, heatmap_svg(distance_matrix(set, a)));
            written.push_back(path);
        }
    }
    if (f.verbose)
        for (const auto& w : written) err << "wrote " << w << "\n";
    return kExitOk;
}

}  // namespace

PipelineConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(j, {"window", "spar", "pve_cutoff", "alpha", "synth", "io"}, "config");
    PipelineConfig cfg;
    if (j.contains("window")) {
        cfg.window = get_as<std::size_t>(j["window"], "window");
        cfg.window_set = true;
    }
    if (j.contains("spar")) {
        cfg.spar = get_as<double>(j["spar"], "spar");
        cfg.spar_set = true;
    }
    if (j.contains("pve_cutoff")) {
        cfg.pve_cutoff = get_as<double>(j["pve_cutoff"], "pve_cutoff");
        cfg.pve_cutoff_set = true;
    }
    if (j.contains("alpha")) cfg.alpha = get_as<double>(j["alpha"], "alpha");
    if (j.contains("synth")) {
        const json& s = j["synth"];
        check_keys(s,
                   {"sample_period_ms", "pulse_duration", "pulse_amplitude", "noise_sd", "jerk_duration",
                    "jerk_amplitude_sd", "amplitude_jitter", "duration_jitter", "seed"},
                   "synth");
        auto& c = cfg.synth;
        if (s.contains("sample_period_ms")) c.sample_period_ms = get_as<double>(s["sample_period_ms"], "sample_period_ms");
        if (s.contains("pulse_duration")) c.pulse_duration = get_as<std::size_t>(s["pulse_duration"], "pulse_duration");
        if (s.contains("pulse_amplitude")) c.pulse_amplitude = get_as<double>(s["pulse_amplitude"], "pulse_amplitude");
        if (s.contains("noise_sd")) c.noise_sd = get_as<double>(s["noise_sd"], "noise_sd");
        if (s.contains("jerk_duration")) c.jerk_duration = get_as<std::size_t>(s["jerk_duration"], "jerk_duration");
        if (s.contains("jerk_amplitude_sd")) c.jerk_amplitude_sd = get_as<double>(s["jerk_amplitude_sd"], "jerk_amplitude_sd");
        if (s.contains("amplitude_jitter")) c.amplitude_jitter = get_as<double>(s["amplitude_jitter"], "amplitude_jitter");
        if (s.contains("duration_jitter")) c.duration_jitter = get_as<double>(s["duration_jitter"], "duration_jitter");
        if (s.contains("seed")) c.seed = get_as<std::uint64_t>(s["seed"], "seed");
    }
    if (j.contains("io")) {
        const json& io = j["io"];
        check_keys(io, {"time", "x", "y", "z"}, "io");
        if (io.contains("time")) cfg.io.time = column_from_json(io["time"], "time");
        if (io.contains("x")) cfg.io.x = column_from_json(io["x"], "x");
        if (io.contains("y")) cfg.io.y = column_from_json(io["y"], "y");
        if (io.contains("z")) cfg.io.z = column_from_json(io["z"], "z");
    }
    validate(cfg);
    return cfg;
}

PipelineConfig load_config(const fs::path& path) { return parse_config(read_text_file(path)); }

void validate(const PipelineConfig& config) {
    if (config.window < 2) throw ConfigError("window must be at least 2");
    validate(SmoothingConfig{config.spar, 0.0, config.pve_cutoff});
    if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    validate(config.synth);
    if (config.synth.jerk_duration < config.window)
        throw ConfigError("synth jerk_duration must be at least the window length");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Accelerometer gesture typing: segment, train, classify, evaluate, synth, plot", "accelerograph"};
    app.require_subcommand(1);
    Flags f;

    std::string input, training, curves_out, letters, kind, letter;
    std::vector<std::string> positional;
    std::optional<std::size_t> gamma, n, k, random, repeat;
    bool corpus = false;
    std::size_t per_letter = 20;

    auto* seg = app.add_subcommand("segment", "split a recording into letter segments");
    seg->add_option("input", input, "CSV recording")->required();
    seg->add_flag("--plot", f.plot, "also write the moving-variance plot as SVG");
    add_common(seg, f);

    auto* train = app.add_subcommand("train", "build a training set from <LETTER>_<id>.csv files");
    train->add_option("dir", input, "directory of labelled recordings")->required();
    train->add_option("--threads", f.threads, "worker threads");
    add_common(train, f);

    auto* cls = app.add_subcommand("classify", "print the letters of a recording");
    cls->add_option("input", input, "CSV recording")->required();
    cls->add_option("training", training, "training set JSON")->required();
    cls->add_option("--curves-out", curves_out, "write the normalized curves as JSON");
    add_common(cls, f);

    auto* eval = app.add_subcommand("evaluate", "error rate and confidence interval");
    eval->add_option("args", positional, "TEST_DIR TRUTH_FILE TRAINING_SET");
    eval->add_option("--gamma", gamma, "misclassification count (skips classification)");
    eval->add_option("--n", n, "repetitions per letter");
    eval->add_option("--k", k, "distinct letters");
    eval->add_option("--alpha", f.alpha, "one minus the confidence level");
    eval->add_option("--threads", f.threads, "worker threads");
    add_common(eval, f);

    auto* syn = app.add_subcommand("synth", "generate synthetic recordings");
    syn->add_option("letters", letters, "letters to gesture");
    syn->add_option("--random", random, "draw K letters from the alphabet frequencies");
    syn->add_option("--repeat", repeat, "write N recordings of the same letters plus truth.txt into --out");
    syn->add_flag("--corpus", corpus, "write a training corpus into --out");
    syn->add_option("--per-letter", per_letter, "recordings per letter for --corpus");
    syn->add_option("--noise", f.noise, "noise standard deviation");
    add_common(syn, f);

    auto* plot = app.add_subcommand("plot", "SVG plots of pipeline artifacts");
    plot->add_option("input", input, "segments JSON, training set, curves JSON or CSV")->required();
    plot->add_option("--kind", kind, "variance, xy, axes or heatmap")
        ->required()
        ->check(CLI::IsMember({"variance", "xy", "axes", "heatmap"}));
    plot->add_option("--letter", letter, "xy: only curves of this letter");
    add_common(plot, f);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (seg->parsed()) return cmd_segment(input, f, out, err);
        if (train->parsed()) return cmd_train(input, f, out, err);
        if (cls->parsed()) return cmd_classify(input, training, curves_out, f, out, err);
        if (eval->parsed()) return cmd_evaluate(positional, gamma, n, k, f, out, err);
        if (syn->parsed()) return cmd_synth(letters, random, repeat, corpus, per_letter, f, out, err);
        if (plot->parsed()) return cmd_plot(input, kind, letter, f, out, err);
    } catch (const Failure& e) {
        err << "error: " << e.message << "\n";
        return e.code;
    } catch (const CLI::ValidationError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NoJerksDetected& e) {
        err << "error: " << e.what() << "\n";
        return kExitSegmentation;
    } catch (const SegmentationMismatch& e) {
        err << "error: " << e.what() << "\n";
        return kExitSegmentation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitUsage;
}

}  // namespace accelerograph::cli
