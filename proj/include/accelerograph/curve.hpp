#pragma once

#include <span>
#include <vector>

#include "accelerograph/model.hpp"
#include "accelerograph/spline.hpp"

namespace accelerograph {

inline constexpr std::size_t kCurvePoints = 100;
inline constexpr double kDefaultSpar = 0.5;
inline constexpr double kDefaultPveCutoff = 0.92;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point2&) const = default;
};

/// The canonical comparison object for one letter.
struct GestureCurve {
    std::vector<Point2> points;             ///< kCurvePoints points in [0,1]^2
    AxisClass axis_class = AxisClass::BothAxes;
    double pve = 0.0;                       ///< share of variance on the first principal axis
    std::vector<double> principal_series;   ///< filled for single-axis curves only

    bool operator==(const GestureCurve&) const = default;
};

struct SmoothingConfig {
    double spar = kDefaultSpar;
    double lambda_override = 0.0;  ///< used instead of the spar mapping when > 0
    double pve_cutoff = kDefaultPveCutoff;
};

/// Throws ConfigError when spar lies outside [0, 1.5] or the cutoff outside (0, 1).
void validate(const SmoothingConfig& config);

AxisSmoother smooth_axis(std::span<const double> times, std::span<const double> values,
                         const SmoothingConfig& config = {});

/// Evaluates both smoothers at kCurvePoints equally spaced times spanning
/// [t_min, t_max] inclusive.
std::vector<Point2> resample_100(const AxisSmoother& sx, const AxisSmoother& sy, double t_min,
                                 double t_max);

/// The evaluation grid used by resample_100.
std::vector<double> evaluation_times(double t_min, double t_max);

/// Shifts both axes to start at 0 and divides both by the larger range.
/// Throws DegenerateSegment when neither axis moves.
std::vector<Point2> scale_unit_square(std::span<const Point2> points);

/// PCA routing. BothAxes when pve <= cutoff; otherwise the dominant loading
/// of the first eigenvector picks the axis (ties go to X), the eigenvector is
/// oriented so that loading is positive, and the centered projections onto it
/// are min-max rescaled into `principal_series`.
GestureCurve detect_axis(std::span<const Point2> points, double pve_cutoff = kDefaultPveCutoff);

/// Full per-letter normalization: per-axis smoothing of (t, ax) and (t, ay),
/// resampling, unit-square scaling and axis detection.
GestureCurve build_curve(std::span<const AccelSample> samples, const SmoothingConfig& config = {});

}  // namespace accelerograph
