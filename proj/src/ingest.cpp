#include "accelerograph/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "accelerograph/errors.hpp"

namespace accelerograph {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t begin = 0;
    while (true) {
        const auto comma = line.find(',', begin);
        out.push_back(trim(line.substr(begin, comma == std::string_view::npos ? comma : comma - begin)));
        if (comma == std::string_view::npos) break;
        begin = comma + 1;
    }
    return out;
}

std::optional<double> parse_double(std::string_view text) {
    if (text.empty()) return std::nullopt;
    if (text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

std::size_t resolve_column(const ColumnRef& ref, const std::vector<std::string_view>& header,
                           std::string_view role) {
    if (const auto* index = std::get_if<std::size_t>(&ref)) {
        if (*index >= header.size())
            throw ConfigError("column index " + std::to_string(*index) + " for " + std::string(role) +
                              " is out of range (" + std::to_string(header.size()) + " columns)");
        return *index;
    }
    const auto& name = std::get<std::string>(ref);
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError("missing column '" + name + "' for " + std::string(role));
    return static_cast<std::size_t>(std::distance(header.begin(), it));
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

double lower_median_gap(const std::vector<AccelSample>& samples) {
    std::vector<double> gaps;
    gaps.reserve(samples.size());
    for (std::size_t i = 1; i < samples.size(); ++i) gaps.push_back(samples[i].t - samples[i - 1].t);
    const std::size_t mid = (gaps.size() - 1) / 2;
    std::nth_element(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(mid), gaps.end());
    return gaps[mid];
}

[[noreturn]] void corrupt(const std::string& what) { throw CorruptSet("corrupt training set: " + what); }

}  // namespace

ColumnRef parse_column_ref(std::string_view text) {
    text = trim(text);
    if (!text.empty() && std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        std::size_t index = 0;
        std::from_chars(text.data(), text.data() + text.size(), index);
        return index;
    }
    return std::string(text);
}

Trace parse_csv(std::string_view text, const CsvOptions& options) {
    std::vector<std::string_view> lines;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        const auto nl = text.find('\n', begin);
        const auto line = text.substr(begin, nl == std::string_view::npos ? nl : nl - begin);
        lines.push_back(line);
        if (nl == std::string_view::npos) break;
        begin = nl + 1;
    }
    auto line_it = std::find_if(lines.begin(), lines.end(), [](std::string_view l) { return !trim(l).empty(); });
    if (line_it == lines.end()) throw FormatError("CSV input is empty");

    std::string_view header_line = *line_it;
    if (header_line.starts_with("\xEF\xBB\xBF")) header_line.remove_prefix(3);
    const auto header = split_fields(header_line);
    const std::size_t ct = resolve_column(options.columns.time, header, "time");
    const std::size_t cx = resolve_column(options.columns.x, header, "x");
    const std::size_t cy = resolve_column(options.columns.y, header, "y");
    const std::size_t cz = resolve_column(options.columns.z, header, "z");
    const std::size_t needed = std::max({ct, cx, cy, cz}) + 1;

    Trace trace;
    std::size_t line_no = static_cast<std::size_t>(std::distance(lines.begin(), line_it)) + 1;
    for (++line_it; line_it != lines.end(); ++line_it) {
        ++line_no;
        if (trim(*line_it).empty()) continue;
        const auto fields = split_fields(*line_it);
        if (fields.size() < needed)
            throw FormatError("line " + std::to_string(line_no) + ": expected at least " +
                              std::to_string(needed) + " fields");
        AccelSample s;
        const std::size_t cols[4] = {ct, cx, cy, cz};
        double* dest[4] = {&s.t, &s.ax, &s.ay, &s.az};
        for (int k = 0; k < 4; ++k) {
            const auto v = parse_double(fields[cols[k]]);
            if (!v || !std::isfinite(*v))
                throw FormatError("line " + std::to_string(line_no) + ": unparseable field '" +
                                  std::string(fields[cols[k]]) + "'");
            *dest[k] = *v;
        }
        if (!trace.samples.empty() && !(s.t > trace.samples.back().t))
            throw FormatError("line " + std::to_string(line_no) + ": time is not strictly increasing");
        trace.samples.push_back(s);
    }
    if (trace.samples.size() < std::max<std::size_t>(options.min_samples, 2))
        throw TooShort("trace has " + std::to_string(trace.samples.size()) + " samples, need at least " +
                       std::to_string(std::max<std::size_t>(options.min_samples, 2)));
    trace.sample_period = lower_median_gap(trace.samples);
    return trace;
}

Trace read_csv_file(const std::filesystem::path& path, const CsvOptions& options) {
    return parse_csv(read_text_file(path), options);
}

std::string write_csv(const Trace& trace) {
    std::string out = "time,x,y,z\n";
    for (const auto& s : trace.samples) {
        out += format_double(s.t);
        out += ',';
        out += format_double(s.ax);
        out += ',';
        out += format_double(s.ay);
        out += ',';
        out += format_double(s.az);
        out += '\n';
    }
    return out;
}

Trace normalize_trace(const Trace& trace) {
    if (trace.samples.size() < 2) throw TooShort("normalization needs at least 2 samples");
    const double period = lower_median_gap(trace.samples);
    if (!(period > 0.0)) throw FormatError("time is not strictly increasing");
    bool uniform = true;
    for (std::size_t i = 1; i < trace.samples.size() && uniform; ++i) {
        const double gap = trace.samples[i].t - trace.samples[i - 1].t;
        if (std::abs(gap - period) > 0.2 * period) uniform = false;
    }
    Trace out;
    out.sample_period = period;
    if (uniform) {
        out.samples = trace.samples;
        return out;
    }
    const double t0 = trace.samples.front().t;
    const double t_end = trace.samples.back().t;
    const auto steps = static_cast<std::size_t>(std::floor((t_end - t0) / period + 1e-9));
    std::size_t seg = 0;
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = t0 + period * static_cast<double>(k);
        while (seg + 2 < trace.samples.size() && trace.samples[seg + 1].t <= t) ++seg;
        const AccelSample& a = trace.samples[seg];
        const AccelSample& b = trace.samples[seg + 1];
        const double f = std::clamp((t - a.t) / (b.t - a.t), 0.0, 1.0);
        out.samples.push_back({t, a.ax + f * (b.ax - a.ax), a.ay + f * (b.ay - a.ay), a.az + f * (b.az - a.az)});
    }
    return out;
}

std::string training_set_to_json(const TrainingSet& set) {
    json doc;
    doc["meta"] = {{"window_length", set.meta.window_length},
                   {"spar", set.meta.spar},
                   {"pve_cutoff", set.meta.pve_cutoff},
                   {"format_version", set.meta.format_version}};
    json templates = json::array();
    for (const auto& t : set.templates) {
        json points = json::array();
        for (const auto& p : t.curve.points) points.push_back({p.x, p.y});
        templates.push_back({{"letter", std::string(1, t.letter)},
                             {"axis_class", std::string(to_string(t.curve.axis_class))},
                             {"source_id", t.source_id},
                             {"points", std::move(points)}});
    }
    doc["templates"] = std::move(templates);
    return doc.dump(1) + "\n";
}

TrainingSet training_set_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("training set is not valid JSON: ") + e.what());
    }
    TrainingSet set;
    try {
        const json& meta = doc.at("meta");
        set.meta.format_version = meta.at("format_version").get<int>();
        if (set.meta.format_version != kTrainingFormatVersion)
            throw VersionError("unsupported training set format_version " +
                               std::to_string(set.meta.format_version) + " (expected " +
                               std::to_string(kTrainingFormatVersion) + ")");
        set.meta.window_length = meta.at("window_length").get<std::size_t>();
        set.meta.spar = meta.at("spar").get<double>();
        set.meta.pve_cutoff = meta.at("pve_cutoff").get<double>();
    } catch (const json::exception& e) {
        corrupt(std::string("bad meta block: ") + e.what());
    }
    if (set.meta.window_length < 2) corrupt("window_length must be at least 2");
    if (!(set.meta.pve_cutoff > 0.0 && set.meta.pve_cutoff < 1.0)) corrupt("pve_cutoff outside (0, 1)");
    if (!(set.meta.spar >= 0.0 && set.meta.spar <= 1.5)) corrupt("spar outside [0, 1.5]");

    try {
        for (const json& entry : doc.at("templates")) {
            TrainingTemplate t;
            const auto letter = entry.at("letter").get<std::string>();
            if (letter.size() != 1 || letter[0] < 'A' || letter[0] > 'Z')
                corrupt("template letter '" + letter + "' is not A-Z");
            t.letter = letter[0];
            t.source_id = entry.at("source_id").get<std::string>();
            AxisClass declared;
            try {
                declared = axis_class_from_string(entry.at("axis_class").get<std::string>());
            } catch (const FormatError& e) {
                corrupt(e.what());
            }
            const json& points = entry.at("points");
            if (points.size() != kCurvePoints)
                corrupt("template " + t.source_id + " has " + std::to_string(points.size()) +
                        " points, expected " + std::to_string(kCurvePoints));
            std::vector<Point2> pts;
            pts.reserve(kCurvePoints);
            for (const json& p : points) {
                if (!p.is_array() || p.size() != 2) corrupt("template " + t.source_id + " has a malformed point");
                const Point2 q{p[0].get<double>(), p[1].get<double>()};
                if (!(q.x >= 0.0 && q.x <= 1.0 && q.y >= 0.0 && q.y <= 1.0))
                    corrupt("template " + t.source_id + " has a point outside the unit square");
                pts.push_back(q);
            }
            try {
                t.curve = detect_axis(pts, set.meta.pve_cutoff);
            } catch (const DegenerateSegment& e) {
                corrupt("template " + t.source_id + ": " + e.what());
            }
            if (t.curve.axis_class != declared)
                corrupt("template " + t.source_id + " declares axis '" + std::string(to_string(declared)) +
                        "' but its points route to '" + std::string(to_string(t.curve.axis_class)) + "'");
            set.templates.push_back(std::move(t));
        }
    } catch (const json::exception& e) {
        corrupt(std::string("bad template entry: ") + e.what());
    }
    return set;
}

void save_training_set(const TrainingSet& set, const std::filesystem::path& path) {
    write_text_file(path, training_set_to_json(set));
}

TrainingSet load_training_set(const std::filesystem::path& path) {
    return training_set_from_json(read_text_file(path));
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

}  // namespace accelerograph
