#pragma once

#include <span>
#include <string>
#include <vector>

#include "accelerograph/classify.hpp"
#include "accelerograph/curve.hpp"
#include "accelerograph/segment.hpp"

namespace accelerograph {

/// Moving variance against index with one horizontal line per cutoff,
/// labelled "k-means", "GMM" and "bagged".
std::string variance_svg(const VarSeries& variance, const CutoffReport& cutoffs);

struct LabelledCurve {
    char letter = '?';
    GestureCurve curve;
};

/// Overlay of unit-square curves, one <path> per curve.
std::string xy_svg(std::span<const LabelledCurve> curves);

/// ax and ay against time.
std::string axes_svg(std::span<const AccelSample> samples);

/// Distance matrix as coloured cells, blue for near and red for far.
std::string heatmap_svg(const DistanceMatrix& matrix);

}  // namespace accelerograph
