#include "accelerograph/stats.hpp"

#include <cmath>
#include <numbers>

#include "accelerograph/classify.hpp"
#include "accelerograph/curve.hpp"
#include "accelerograph/errors.hpp"
#include "accelerograph/model.hpp"

namespace accelerograph {

double expected_gestures(double text_length) {
    // per letter: its primitives plus the closing jerk; plus the opening jerk
    return (mean_gesture_length() + 1.0) * text_length + 1.0;
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("normal quantile needs p in (0, 1)");

    // Acklam's rational approximation (relative error < 1.2e-9) ...
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // ... polished by one Halley step against the exact CDF.
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

ErrorEstimate error_estimate(const ErrorExperiment& experiment) {
    const std::size_t trials = experiment.n * experiment.k;
    if (trials == 0) throw EmptyExperiment("error estimate needs n*k > 0");
    if (experiment.gamma > trials) throw ConfigError("gamma exceeds n*k");
    if (!(experiment.alpha > 0.0 && experiment.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");

    ErrorEstimate est;
    const double nk = static_cast<double>(trials);
    est.p_hat = static_cast<double>(experiment.gamma) / nk;
    est.z = normal_quantile(1.0 - experiment.alpha / 2.0);
    const double half = est.z * std::sqrt(est.p_hat * (1.0 - est.p_hat) / nk);
    est.ci_low = std::max(0.0, est.p_hat - half);
    est.ci_high = std::min(1.0, est.p_hat + half);
    est.degenerate = experiment.gamma == 0 || experiment.gamma == trials;
    return est;
}

StreamEvaluation run_evaluation(const Trace& test_stream, const std::string& ground_truth,
                                const TrainingSet& training, const SmoothingConfig& smoothing,
                                std::size_t window) {
    const SegmentationResult seg = segment_trace(test_stream, window);
    if (seg.segments.size() != ground_truth.size())
        throw SegmentationMismatch(ground_truth.size(), seg.segments.size());

    StreamEvaluation out;
    out.letters = ground_truth.size();
    for (std::size_t i = 0; i < seg.segments.size(); ++i) {
        const char truth = normalize_letter(ground_truth[i]);
        char predicted = '?';
        try {
            predicted = classify(build_curve(seg.segments[i].samples, smoothing), training).letter;
        } catch (const NoTemplatesForAxis&) {
        } catch (const DegenerateSegment&) {
        } catch (const TooFewPoints&) {
        }
        out.predicted += predicted;
        ++out.confusion[truth][predicted];
        if (predicted != truth) ++out.gamma;
    }
    return out;
}

}  // namespace accelerograph
