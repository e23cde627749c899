#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "accelerograph/model.hpp"

namespace accelerograph {

inline constexpr std::size_t kDefaultWindow = 10;

/// Moving variance of a base series: values[i] is the unbiased sample
/// variance of base[i .. i+window-1].
struct VarSeries {
    std::vector<double> values;
    std::size_t window = kDefaultWindow;
    std::size_t base_len = 0;
};

enum class Level : unsigned char { Low, High };

struct ClusterCut {
    double cutoff = 0.0;
    std::vector<Level> assignment;  ///< per input value
};

struct GmmFit {
    double cutoff = 0.0;
    std::size_t em_iterations = 0;
    double low_mean = 0.0, low_var = 0.0, low_weight = 0.0;
    double high_mean = 0.0, high_var = 0.0, high_weight = 0.0;
    double log_likelihood = 0.0;
    std::vector<Level> assignment;
};

struct EmOptions {
    double tolerance = 1e-6;        ///< on the log-likelihood improvement
    std::size_t max_iterations = 100;
    double variance_floor = 1e-12;
};

struct CutoffReport {
    double kmeans_cut = 0.0;
    double gmm_cut = 0.0;
    double bagged_cut = 0.0;
    std::size_t em_iterations = 0;
    bool gmm_fallback = false;  ///< EM degenerated; gmm_cut repeats kmeans_cut
    std::vector<Level> labels;  ///< after neighbours_together
};

/// A letter between two jerks, in raw sample indices (inclusive).
struct LetterSegment {
    std::size_t start = 0;
    std::size_t end = 0;
    std::vector<AccelSample> samples;

    std::size_t length() const noexcept { return end - start + 1; }
};

struct SegmentationResult {
    VarSeries variance;
    CutoffReport cutoffs;
    std::vector<LetterSegment> segments;
};

std::vector<double> squared_resultant(const Trace& trace);

/// Throws TooShort when series.size() < window or window < 2.
VarSeries moving_variance(std::span<const double> series, std::size_t window = kDefaultWindow);

/// Two-means on scalar data, centers seeded at the extremes. The cutoff is the
/// midpoint between the largest Low value and the smallest High value.
/// Throws DegenerateInput when all values coincide.
ClusterCut kmeans_cutoff(std::span<const double> values);

/// Two-component Gaussian mixture fitted by EM, initialized from the two-means
/// split; hard assignment by posterior, cutoff by the same midpoint rule.
/// Throws DegenerateInput for unusable input and DegenerateFit when the
/// mixture collapses.
GmmFit gmm_cutoff(std::span<const double> values, const EmOptions& options = {});

double bagged_cutoff(double kmeans_cut, double gmm_cut);

/// Hysteresis labelling: the state flips only when the current point and its
/// next two neighbours all sit on the other side of the cutoff. For the last
/// two points only the neighbours that exist are consulted.
std::vector<Level> neighbours_together(std::span<const double> values, double cutoff);

/// How a Low run of variance indices [s, e] maps to samples.
enum class Alignment : unsigned char {
    Interior,  ///< [s + window - 1, e]: samples whose every covering window is Low
    Center,    ///< [s + window/2, e + window/2]
};

/// Letters are Low runs strictly between High runs, at least `window`
/// variance points long, mapped into sample space by `align`.
/// Throws NoJerksDetected if fewer than two High runs exist.
std::vector<LetterSegment> extract_segments(std::span<const Level> labels, std::size_t window,
                                            const Trace& trace, Alignment align = Alignment::Interior);

/// k-means, GMM (with k-means fallback), bagging and hysteresis in one step.
CutoffReport compute_cutoffs(const VarSeries& variance, const EmOptions& options = {});

/// End-to-end segmentation of a trace.
SegmentationResult segment_trace(const Trace& trace, std::size_t window = kDefaultWindow,
                                 const EmOptions& options = {});

}  // namespace accelerograph
