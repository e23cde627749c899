#pragma once

#include <span>
#include <vector>

namespace accelerograph {

/// Natural cubic smoothing spline in value/second-derivative form.
///
/// The fit minimizes  sum_i w_i (y_i - f(x_i))^2 + lambda * int f''(u)^2 du
/// over natural cubic splines with knots at the distinct abscissae. The
/// solution is obtained with Reinsch's banded formulation:
///
///     (R + lambda Q' W^-1 Q) gamma = Q' y,      g = y - lambda W^-1 Q gamma
///
/// where Q (n x n-2) holds divided-difference coefficients, R (n-2 x n-2)
/// is the tridiagonal Gram matrix of the second-derivative hat functions,
/// g are the fitted values at the knots and gamma the interior second
/// derivatives. The pentadiagonal system is solved by banded LDL'.
class SmoothingSpline {
public:
    SmoothingSpline() = default;

    /// Fits on abscissae `x` (strictly increasing, at least 3 points) with
    /// optional positive weights (empty span means unit weights).
    static SmoothingSpline fit(std::span<const double> x, std::span<const double> y, double lambda,
                               std::span<const double> weights = {});

    double operator()(double x) const;

    std::span<const double> knots() const noexcept { return knots_; }
    /// Fitted values g_i at the knots.
    std::span<const double> values() const noexcept { return values_; }
    /// Second derivatives at the knots (zero at both ends).
    std::span<const double> second_derivatives() const noexcept { return second_; }
    double lambda() const noexcept { return lambda_; }

    /// int f''(u)^2 du over the knot range, i.e. gamma' R gamma.
    double roughness() const;

private:
    std::vector<double> knots_;
    std::vector<double> values_;
    std::vector<double> second_;
    double lambda_ = 0.0;
};

/// tr(X'WX) / tr(Sigma) for the cubic B-spline basis with knots at every
/// abscissa (ends repeated four times), where X is the basis evaluated at the
/// data and Sigma the Gram matrix of basis second derivatives. As in the
/// smoothing-spline routine of the R environment, the traces run over the
/// diagonal entries 3 .. nk-3 (1-based) only. `x` must be sorted, distinct,
/// and scaled to [0, 1].
double penalty_trace_ratio(std::span<const double> x, std::span<const double> weights = {});

/// lambda = ratio * 256^(3 spar - 1).
double lambda_from_spar(double spar, double trace_ratio) noexcept;

/// Per-axis smoother used on letter segments: duplicate times are averaged
/// (weight = multiplicity), time is rescaled to [0, 1], lambda is derived
/// from spar unless `lambda_override` is positive, and the fitted spline is
/// evaluable in the original time units.
class AxisSmoother {
public:
    static AxisSmoother fit(std::span<const double> times, std::span<const double> values,
                            double spar, double lambda_override = 0.0);

    double operator()(double t) const;

    double t_min() const noexcept { return t_min_; }
    double t_max() const noexcept { return t_max_; }
    const SmoothingSpline& spline() const noexcept { return spline_; }

private:
    SmoothingSpline spline_;
    double t_min_ = 0.0;
    double t_max_ = 0.0;
};

}  // namespace accelerograph
