#include "accelerograph/curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "accelerograph/errors.hpp"

namespace accelerograph {

namespace {

struct Eigen2 {
    double major = 0.0;
    double minor = 0.0;
    Point2 direction;  // unit eigenvector of the major eigenvalue
};

// Closed-form eigen decomposition of the symmetric matrix [[a, b], [b, c]].
Eigen2 symmetric_eigen(double a, double b, double c) {
    const double mean = 0.5 * (a + c);
    const double half_diff = 0.5 * (a - c);
    const double radius = std::hypot(half_diff, b);
    Eigen2 e;
    e.major = mean + radius;
    e.minor = mean - radius;
    if (b == 0.0) {
        e.direction = a >= c ? Point2{1.0, 0.0} : Point2{0.0, 1.0};
        return e;
    }
    // Two algebraically equivalent forms; keep the better conditioned one.
    Point2 v1{e.major - c, b};
    Point2 v2{b, e.major - a};
    const double n1 = std::hypot(v1.x, v1.y);
    const double n2 = std::hypot(v2.x, v2.y);
    const Point2 v = n1 >= n2 ? v1 : v2;
    const double norm = std::max(n1, n2);
    e.direction = {v.x / norm, v.y / norm};
    return e;
}

}  // namespace

void validate(const SmoothingConfig& config) {
    if (!(config.spar >= 0.0 && config.spar <= 1.5))
        throw ConfigError("spar must lie in [0, 1.5], got " + std::to_string(config.spar));
    if (!(config.pve_cutoff > 0.0 && config.pve_cutoff < 1.0))
        throw ConfigError("pve cutoff must lie in (0, 1), got " + std::to_string(config.pve_cutoff));
    if (!(config.lambda_override >= 0.0) || !std::isfinite(config.lambda_override))
        throw ConfigError("lambda override must be finite and >= 0");
}

AxisSmoother smooth_axis(std::span<const double> times, std::span<const double> values,
                         const SmoothingConfig& config) {
    return AxisSmoother::fit(times, values, config.spar, config.lambda_override);
}

std::vector<double> evaluation_times(double t_min, double t_max) {
    std::vector<double> t(kCurvePoints);
    const double step = (t_max - t_min) / static_cast<double>(kCurvePoints - 1);
    for (std::size_t i = 0; i < kCurvePoints; ++i) t[i] = t_min + step * static_cast<double>(i);
    t.back() = t_max;
    return t;
}

std::vector<Point2> resample_100(const AxisSmoother& sx, const AxisSmoother& sy, double t_min,
                                 double t_max) {
    std::vector<Point2> out;
    out.reserve(kCurvePoints);
    for (double t : evaluation_times(t_min, t_max)) out.push_back({sx(t), sy(t)});
    return out;
}

std::vector<Point2> scale_unit_square(std::span<const Point2> points) {
    if (points.empty()) throw DegenerateSegment("cannot scale an empty curve");
    auto [xmin_it, xmax_it] = std::minmax_element(
        points.begin(), points.end(), [](const Point2& a, const Point2& b) { return a.x < b.x; });
    auto [ymin_it, ymax_it] = std::minmax_element(
        points.begin(), points.end(), [](const Point2& a, const Point2& b) { return a.y < b.y; });
    const double xmin = xmin_it->x;
    const double ymin = ymin_it->y;
    const double range = std::max(xmax_it->x - xmin, ymax_it->y - ymin);
    if (!(range > 0.0)) throw DegenerateSegment("motionless segment: both axis ranges are zero");
    std::vector<Point2> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back({(p.x - xmin) / range, (p.y - ymin) / range});
    return out;
}

GestureCurve detect_axis(std::span<const Point2> points, double pve_cutoff) {
    if (points.size() < 2) throw DegenerateSegment("axis detection needs at least two points");
    const double n = static_cast<double>(points.size());
    double mx = 0.0, my = 0.0;
    for (const auto& p : points) {
        mx += p.x;
        my += p.y;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& p : points) {
        const double dx = p.x - mx;
        const double dy = p.y - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    sxx /= n - 1.0;
    sxy /= n - 1.0;
    syy /= n - 1.0;
    if (!(sxx + syy > 0.0)) throw DegenerateSegment("zero covariance");

    const Eigen2 e = symmetric_eigen(sxx, sxy, syy);
    GestureCurve curve;
    curve.points.assign(points.begin(), points.end());
    curve.pve = std::clamp(e.major / (e.major + e.minor), 0.5, 1.0);

    if (curve.pve <= pve_cutoff) {
        curve.axis_class = AxisClass::BothAxes;
        return curve;
    }

    Point2 dir = e.direction;
    if (std::abs(dir.x) >= std::abs(dir.y)) {
        curve.axis_class = AxisClass::XAxis;
        if (dir.x < 0.0) dir = {-dir.x, -dir.y};
    } else {
        curve.axis_class = AxisClass::YAxis;
        if (dir.y < 0.0) dir = {-dir.x, -dir.y};
    }

    std::vector<double> proj;
    proj.reserve(points.size());
    for (const auto& p : points) proj.push_back((p.x - mx) * dir.x + (p.y - my) * dir.y);
    const auto [lo, hi] = std::minmax_element(proj.begin(), proj.end());
    const double low = *lo;
    const double span = *hi - low;
    if (!(span > 0.0)) throw DegenerateSegment("principal projection has zero range");
    for (double& v : proj) v = (v - low) / span;
    curve.principal_series = std::move(proj);
    return curve;
}

GestureCurve build_curve(std::span<const AccelSample> samples, const SmoothingConfig& config) {
    validate(config);
    std::vector<double> t, x, y;
    t.reserve(samples.size());
    x.reserve(samples.size());
    y.reserve(samples.size());
    for (const auto& s : samples) {
        t.push_back(s.t);
        x.push_back(s.ax);
        y.push_back(s.ay);
    }
    const AxisSmoother sx = smooth_axis(t, x, config);
    const AxisSmoother sy = smooth_axis(t, y, config);
    const auto raw = resample_100(sx, sy, sx.t_min(), sx.t_max());
    const auto scaled = scale_unit_square(raw);
    return detect_axis(scaled, config.pve_cutoff);
}

}  // namespace accelerograph
