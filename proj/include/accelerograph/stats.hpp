#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "accelerograph/ingest.hpp"
#include "accelerograph/segment.hpp"

namespace accelerograph {

/// Expected number of gestures (letter primitives plus separating jerks) for
/// a text of `text_length` letters drawn from the alphabet frequencies:
/// (mean gesture length + 1) * L + 1.
double expected_gestures(double text_length);

/// Standard normal quantile.
double normal_quantile(double p);

struct ErrorExperiment {
    std::size_t k = 0;       ///< distinct random letters
    std::size_t n = 0;       ///< repetitions per letter
    std::size_t gamma = 0;   ///< total misclassifications
    double alpha = 0.05;
};

struct ErrorEstimate {
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double z = 0.0;
    bool degenerate = false;  ///< zero-width interval (p_hat of 0 or 1)
};

/// Point estimate gamma/(nk) with the normal-approximation interval
/// p_hat +- z_{alpha/2} sqrt(p_hat (1 - p_hat) / nk), clamped to [0, 1].
/// Throws EmptyExperiment when nk == 0 and ConfigError on invalid fields.
ErrorEstimate error_estimate(const ErrorExperiment& experiment);

/// Letter-by-letter confusion counts: confusion[truth][predicted].
using Confusion = std::map<char, std::map<char, std::size_t>>;

struct StreamEvaluation {
    std::size_t letters = 0;
    std::size_t gamma = 0;
    std::string predicted;
    Confusion confusion;
};

/// Segments and classifies one test stream and counts mismatches against the
/// ground truth. Unclassifiable segments count as '?' predictions.
/// Throws SegmentationMismatch when the segment count differs.
StreamEvaluation run_evaluation(const Trace& test_stream, const std::string& ground_truth,
                                const TrainingSet& training, const SmoothingConfig& smoothing,
                                std::size_t window = kDefaultWindow);

}  // namespace accelerograph
