#include "accelerograph/segment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "accelerograph/errors.hpp"

namespace accelerograph {

namespace {

constexpr std::size_t kMaxLloydIterations = 1000;

double log_normal_pdf(double x, double mean, double var) {
    const double d = x - mean;
    return -0.5 * (std::log(2.0 * std::numbers::pi * var) + d * d / var);
}

double log_add(double a, double b) {
    const double hi = std::max(a, b);
    if (hi == -std::numeric_limits<double>::infinity()) return hi;
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

std::vector<double> squared_resultant(const Trace& trace) {
    std::vector<double> out;
    out.reserve(trace.samples.size());
    for (const auto& s : trace.samples) out.push_back(s.ax * s.ax + s.ay * s.ay + s.az * s.az);
    return out;
}

VarSeries moving_variance(std::span<const double> series, std::size_t window) {
    if (window < 2) throw ConfigError("moving-variance window must be at least 2");
    if (series.size() < window)
        throw TooShort("series of length " + std::to_string(series.size()) +
                       " is shorter than the window " + std::to_string(window));
    VarSeries out;
    out.window = window;
    out.base_len = series.size();
    const std::size_t count = series.size() - window + 1;
    out.values.resize(count);
    const double w = static_cast<double>(window);
    for (std::size_t i = 0; i < count; ++i) {
        // deviations are taken from the first sample so a flat window is exactly zero
        const auto win = series.subspan(i, window);
        const double shift = win.front();
        double mean = 0.0;
        for (double a : win) mean += a - shift;
        mean /= w;
        double ss = 0.0;
        for (double a : win) ss += (a - shift - mean) * (a - shift - mean);
        out.values[i] = ss / (w - 1.0);
    }
    return out;
}

ClusterCut kmeans_cutoff(std::span<const double> values) {
    if (values.empty()) throw DegenerateInput("k-means needs at least two distinct values");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back())
        throw DegenerateInput("all values identical: no jerk/letter contrast");

    std::vector<double> prefix(sorted.size() + 1, 0.0);
    for (std::size_t i = 0; i < sorted.size(); ++i) prefix[i + 1] = prefix[i] + sorted[i];

    // With sorted data every Lloyd assignment is a split index: [0, split) Low.
    double low_center = sorted.front();
    double high_center = sorted.back();
    std::size_t split = 0;
    for (std::size_t iter = 0; iter < kMaxLloydIterations; ++iter) {
        const double boundary = 0.5 * (low_center + high_center);
        // ties to Low
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), boundary);
        const auto next = static_cast<std::size_t>(std::distance(sorted.begin(), it));
        if (iter > 0 && next == split) break;
        split = next;
        low_center = prefix[split] / static_cast<double>(split);
        high_center = (prefix.back() - prefix[split]) / static_cast<double>(sorted.size() - split);
    }

    ClusterCut out;
    const double max_low = sorted[split - 1];
    const double min_high = sorted[split];
    out.cutoff = 0.5 * (max_low + min_high);
    out.assignment.reserve(values.size());
    for (double v : values) out.assignment.push_back(v > max_low ? Level::High : Level::Low);
    return out;
}

GmmFit gmm_cutoff(std::span<const double> values, const EmOptions& options) {
    if (values.size() < 4) throw DegenerateInput("EM mixture fit needs at least 4 values");
    const ClusterCut init = kmeans_cutoff(values);
    const std::size_t n = values.size();
    const double floor = options.variance_floor;

    double mean[2] = {0.0, 0.0};
    double var[2] = {0.0, 0.0};
    double weight[2] = {0.0, 0.0};
    double count[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const int c = init.assignment[i] == Level::High ? 1 : 0;
        mean[c] += values[i];
        count[c] += 1.0;
    }
    for (int c = 0; c < 2; ++c) mean[c] /= count[c];
    for (std::size_t i = 0; i < n; ++i) {
        const int c = init.assignment[i] == Level::High ? 1 : 0;
        var[c] += (values[i] - mean[c]) * (values[i] - mean[c]);
    }
    for (int c = 0; c < 2; ++c) {
        var[c] = std::max(var[c] / count[c], floor);
        weight[c] = count[c] / static_cast<double>(n);
    }

    std::vector<double> resp_high(n, 0.0);
    double log_lik = -std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    for (; iterations < options.max_iterations;) {
        // E-step
        double ll = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double l0 = std::log(weight[0]) + log_normal_pdf(values[i], mean[0], var[0]);
            const double l1 = std::log(weight[1]) + log_normal_pdf(values[i], mean[1], var[1]);
            const double total = log_add(l0, l1);
            resp_high[i] = std::exp(l1 - total);
            ll += total;
        }
        ++iterations;
        if (!std::isfinite(ll)) throw DegenerateFit("EM log-likelihood is not finite");

        // M-step
        double r_sum[2] = {0.0, 0.0};
        double r_x[2] = {0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            const double r1 = resp_high[i];
            const double r0 = 1.0 - r1;
            r_sum[0] += r0;
            r_sum[1] += r1;
            r_x[0] += r0 * values[i];
            r_x[1] += r1 * values[i];
        }
        for (int c = 0; c < 2; ++c) {
            if (!(r_sum[c] > 1e-12 * static_cast<double>(n)))
                throw DegenerateFit("EM mixture component lost all its mass");
            mean[c] = r_x[c] / r_sum[c];
            weight[c] = r_sum[c] / static_cast<double>(n);
        }
        double r_ss[2] = {0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            const double r1 = resp_high[i];
            r_ss[0] += (1.0 - r1) * (values[i] - mean[0]) * (values[i] - mean[0]);
            r_ss[1] += r1 * (values[i] - mean[1]) * (values[i] - mean[1]);
        }
        for (int c = 0; c < 2; ++c) var[c] = std::max(r_ss[c] / r_sum[c], floor);

        const bool converged = ll - log_lik < options.tolerance;
        log_lik = ll;
        if (converged) break;
    }

    for (int c = 0; c < 2; ++c)
        if (var[c] <= floor) throw DegenerateFit("EM mixture component collapsed onto the variance floor");

    GmmFit fit;
    const int low = mean[0] <= mean[1] ? 0 : 1;
    const int high = 1 - low;
    fit.low_mean = mean[low];
    fit.low_var = var[low];
    fit.low_weight = weight[low];
    fit.high_mean = mean[high];
    fit.high_var = var[high];
    fit.high_weight = weight[high];
    fit.em_iterations = iterations;
    fit.log_likelihood = log_lik;

    // Hard assignment by posterior. Points below the low mean that the wider
    // component claims through its tail stay Low.
    fit.assignment.resize(n);
    double max_low = -std::numeric_limits<double>::infinity();
    double min_high = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double x = values[i];
        const double lh = std::log(weight[high]) + log_normal_pdf(x, mean[high], var[high]);
        const double ll = std::log(weight[low]) + log_normal_pdf(x, mean[low], var[low]);
        const bool is_high = lh > ll && x > mean[low];
        fit.assignment[i] = is_high ? Level::High : Level::Low;
        if (is_high) min_high = std::min(min_high, x);
        else max_low = std::max(max_low, x);
    }
    if (!std::isfinite(max_low) || !std::isfinite(min_high))
        throw DegenerateFit("EM hard assignment left a cluster empty");
    if (max_low >= min_high) throw DegenerateFit("EM hard assignment does not split the values");
    fit.cutoff = 0.5 * (max_low + min_high);
    return fit;
}

double bagged_cutoff(double kmeans_cut, double gmm_cut) { return 0.5 * (kmeans_cut + gmm_cut); }

std::vector<Level> neighbours_together(std::span<const double> values, double cutoff) {
    const std::size_t n = values.size();
    if (n < 3) throw TooShort("hysteresis labelling needs at least 3 points");
    std::vector<Level> labels(n, Level::Low);
    Level state = Level::Low;
    for (std::size_t i = 0; i < n; ++i) {
        // Near the end only the neighbours that exist are consulted.
        const std::size_t last = std::min(i + 2, n - 1);
        bool all_above = true;
        bool all_below = true;
        for (std::size_t j = i; j <= last; ++j) {
            if (values[j] > cutoff) all_below = false;
            else all_above = false;
        }
        if (state == Level::Low && all_above) state = Level::High;
        else if (state == Level::High && all_below) state = Level::Low;
        labels[i] = state;
    }
    return labels;
}

std::vector<LetterSegment> extract_segments(std::span<const Level> labels, std::size_t window,
                                            const Trace& trace, Alignment align) {
    struct Run {
        Level level;
        std::size_t begin;
        std::size_t end;  // inclusive
    };
    std::vector<Run> runs;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (runs.empty() || runs.back().level != labels[i]) runs.push_back({labels[i], i, i});
        else runs.back().end = i;
    }
    const auto high_runs = std::count_if(runs.begin(), runs.end(),
                                         [](const Run& r) { return r.level == Level::High; });
    if (high_runs < 2) throw NoJerksDetected("no jerks detected");

    std::size_t first_high = 0;
    while (runs[first_high].level != Level::High) ++first_high;
    std::size_t last_high = runs.size() - 1;
    while (runs[last_high].level != Level::High) --last_high;

    std::vector<LetterSegment> segments;
    for (std::size_t r = first_high + 1; r < last_high; ++r) {
        const Run& run = runs[r];
        if (run.level != Level::Low) continue;
        if (run.end - run.begin + 1 < window) continue;
        LetterSegment seg;
        if (align == Alignment::Center) {
            seg.start = run.begin + window / 2;
            seg.end = run.end + window / 2;
        } else {
            seg.start = run.begin + window - 1;
            seg.end = run.end;
        }
        seg.end = std::min(seg.end, trace.samples.size() - 1);
        if (seg.start > seg.end) continue;
        seg.samples.assign(trace.samples.begin() + static_cast<std::ptrdiff_t>(seg.start),
                           trace.samples.begin() + static_cast<std::ptrdiff_t>(seg.end) + 1);
        segments.push_back(std::move(seg));
    }
    return segments;
}

CutoffReport compute_cutoffs(const VarSeries& variance, const EmOptions& options) {
    CutoffReport report;
    const ClusterCut km = kmeans_cutoff(variance.values);
    report.kmeans_cut = km.cutoff;
    try {
        const GmmFit gmm = gmm_cutoff(variance.values, options);
        report.gmm_cut = gmm.cutoff;
        report.em_iterations = gmm.em_iterations;
    } catch (const DegenerateFit&) {
        report.gmm_cut = km.cutoff;
        report.gmm_fallback = true;
    } catch (const DegenerateInput&) {
        report.gmm_cut = km.cutoff;
        report.gmm_fallback = true;
    }
    report.bagged_cut = bagged_cutoff(report.kmeans_cut, report.gmm_cut);
    report.labels = neighbours_together(variance.values, report.bagged_cut);
    return report;
}

SegmentationResult segment_trace(const Trace& trace, std::size_t window, const EmOptions& options) {
    if (window < 2) throw ConfigError("window must be at least 2");
    if (trace.samples.size() < 2 * window)
        throw TooShort("trace of " + std::to_string(trace.samples.size()) +
                       " samples is shorter than twice the window");
    SegmentationResult result;
    result.variance = moving_variance(squared_resultant(trace), window);
    try {
        result.cutoffs = compute_cutoffs(result.variance, options);
    } catch (const DegenerateInput&) {
        throw NoJerksDetected("no jerks detected: moving variance is constant");
    }
    result.segments = extract_segments(result.cutoffs.labels, window, trace);
    return result;
}

}  // namespace accelerograph
