#pragma once

#include <optional>
#include <string>
#include <vector>

#include "accelerograph/curve.hpp"
#include "accelerograph/ingest.hpp"

namespace accelerograph {

struct Neighbour {
    char letter = '?';
    double distance = 0.0;
    std::string source_id;
};

struct ClassificationResult {
    char letter = '?';
    double distance = 0.0;
    AxisClass axis_class = AxisClass::BothAxes;
    std::string source_id;               ///< template that won
    std::optional<Neighbour> runner_up;  ///< nearest template of a different letter
};

/// Discretized soap-bubble distance: sum over the 100 time points of the
/// Euclidean gap. BothAxes compares (x, y) points; the single-axis modes
/// compare principal series. Throws ShapeError on length mismatch or missing
/// principal series.
double soap_distance(const GestureCurve& a, const GestureCurve& b, AxisClass mode);

/// Nearest neighbour among templates of the curve's axis family. Equal
/// distances resolve alphabetically by letter, then by source id.
/// Throws NoTemplatesForAxis when the family has no templates.
ClassificationResult classify(const GestureCurve& curve, const TrainingSet& training);

struct DistanceMatrix {
    AxisClass axis_class = AxisClass::BothAxes;
    std::vector<char> letters;             ///< row/column labels
    std::vector<std::string> source_ids;
    std::vector<std::vector<double>> values;

    std::size_t size() const noexcept { return letters.size(); }
};

/// Pairwise distances among the templates of one family, ordered by
/// (letter, source_id).
DistanceMatrix distance_matrix(const TrainingSet& training, AxisClass axis_class);

}  // namespace accelerograph
