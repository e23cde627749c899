#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "accelerograph/ingest.hpp"
#include "accelerograph/synth.hpp"

namespace accelerograph::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitInput = 1,
    kExitUsage = 2,
    kExitSegmentation = 3,
    kExitTraining = 4,
    kExitClassification = 5,
};

inline constexpr int kReportFormatVersion = 1;

struct PipelineConfig {
    std::size_t window = 10;
    double spar = 0.5;
    double pve_cutoff = 0.92;
    double alpha = 0.05;
    SynthConfig synth;
    ColumnMap io;

    // which of window/spar/pve_cutoff were set by a config file or a flag
    bool window_set = false;
    bool spar_set = false;
    bool pve_cutoff_set = false;
};

/// Parses a JSON config; keys absent from the file keep their defaults.
/// Throws ConfigError on unknown keys, wrong types or invalid values.
PipelineConfig parse_config(const std::string& text);
PipelineConfig load_config(const std::filesystem::path& path);
void validate(const PipelineConfig& config);

/// Runs one command line (without the program name). Normal output goes to
/// `out`, diagnostics to `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace accelerograph::cli
