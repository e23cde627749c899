#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "accelerograph/curve.hpp"
#include "accelerograph/model.hpp"

namespace accelerograph {

inline constexpr int kTrainingFormatVersion = 1;
inline constexpr std::size_t kMinTraceSamples = 20;

/// A CSV column, addressed by header name or by 0-based index.
using ColumnRef = std::variant<std::string, std::size_t>;

/// Digits-only text becomes an index, anything else a header name.
ColumnRef parse_column_ref(std::string_view text);

struct ColumnMap {
    ColumnRef time = std::string("time");
    ColumnRef x = std::string("x");
    ColumnRef y = std::string("y");
    ColumnRef z = std::string("z");
};

struct CsvOptions {
    ColumnMap columns;
    std::size_t min_samples = kMinTraceSamples;
};

/// Parses a headed, comma-separated accelerometer log. Any unparseable row is
/// an error. Throws ConfigError (missing column), FormatError (bad field,
/// non-monotone time) or TooShort.
Trace parse_csv(std::string_view text, const CsvOptions& options = {});

Trace read_csv_file(const std::filesystem::path& path, const CsvOptions& options = {});

/// Writes `time,x,y,z` with shortest round-trip number formatting.
std::string write_csv(const Trace& trace);

/// Identity when every gap is within 20% of the (lower) median gap; otherwise
/// linear per-axis interpolation onto a uniform grid at the median gap.
Trace normalize_trace(const Trace& trace);

struct TrainingTemplate {
    char letter = 'A';
    std::string source_id;
    GestureCurve curve;  ///< curve.axis_class is the template's family

    bool operator==(const TrainingTemplate&) const = default;
};

struct TrainingMeta {
    std::size_t window_length = 10;
    double spar = kDefaultSpar;
    double pve_cutoff = kDefaultPveCutoff;
    int format_version = kTrainingFormatVersion;

    bool operator==(const TrainingMeta&) const = default;
};

struct TrainingSet {
    std::vector<TrainingTemplate> templates;
    TrainingMeta meta;

    bool operator==(const TrainingSet&) const = default;
};

std::string training_set_to_json(const TrainingSet& set);

/// Validates every template (100 points in [0,1]^2, letter A-Z, axis class
/// reproduced by re-running axis detection) and rebuilds principal series.
/// Throws VersionError, CorruptSet or FormatError (not JSON).
TrainingSet training_set_from_json(std::string_view text);

void save_training_set(const TrainingSet& set, const std::filesystem::path& path);
TrainingSet load_training_set(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace accelerograph
