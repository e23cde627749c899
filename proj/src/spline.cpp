#include "accelerograph/spline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "accelerograph/errors.hpp"

namespace accelerograph {

namespace {

// Symmetric positive-definite pentadiagonal solve by banded LDL'.
// diag[j] = A(j,j), off1[j] = A(j,j+1), off2[j] = A(j,j+2).
std::vector<double> solve_pentadiagonal(std::vector<double> diag, const std::vector<double>& off1,
                                        const std::vector<double>& off2, std::vector<double> rhs) {
    const std::size_t m = diag.size();
    std::vector<double> l1(m, 0.0);  // L(j+1, j)
    std::vector<double> l2(m, 0.0);  // L(j+2, j)
    std::vector<double> d(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        double dj = diag[j];
        if (j >= 1) dj -= l1[j - 1] * l1[j - 1] * d[j - 1];
        if (j >= 2) dj -= l2[j - 2] * l2[j - 2] * d[j - 2];
        d[j] = dj;
        if (j + 1 < m) {
            double a = off1[j];
            if (j >= 1) a -= l2[j - 1] * l1[j - 1] * d[j - 1];
            l1[j] = a / dj;
        }
        if (j + 2 < m) l2[j] = off2[j] / dj;
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (j >= 1) rhs[j] -= l1[j - 1] * rhs[j - 1];
        if (j >= 2) rhs[j] -= l2[j - 2] * rhs[j - 2];
    }
    for (std::size_t j = 0; j < m; ++j) rhs[j] /= d[j];
    for (std::size_t jj = m; jj-- > 0;) {
        if (jj + 1 < m) rhs[jj] -= l1[jj] * rhs[jj + 1];
        if (jj + 2 < m) rhs[jj] -= l2[jj] * rhs[jj + 2];
    }
    return rhs;
}

double inverse_gap(double a, double b) { return b > a ? 1.0 / (b - a) : 0.0; }

// Nonzero cubic B-spline values B_{mu-3..mu}(x) on knot vector `tau`, where
// tau[mu] <= x < tau[mu+1] (closed on the right for the last interval).
std::array<double, 4> cubic_basis(const std::vector<double>& tau, std::size_t mu, double x) {
    std::array<double, 4> n{1.0, 0.0, 0.0, 0.0};
    std::array<double, 4> left{};
    std::array<double, 4> right{};
    for (std::size_t j = 1; j <= 3; ++j) {
        left[j] = x - tau[mu + 1 - j];
        right[j] = tau[mu + j] - x;
        double saved = 0.0;
        for (std::size_t r = 0; r < j; ++r) {
            const double temp = n[r] / (right[r + 1] + left[j - r]);
            n[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        n[j] = saved;
    }
    return n;
}

std::size_t find_interval(const std::vector<double>& tau, double x) {
    // last index mu with tau[mu] <= x and tau[mu] < tau[mu+1]
    const std::size_t last = tau.size() - 5;  // interval ending at the final knot
    if (x >= tau[last + 1]) return last;
    auto it = std::upper_bound(tau.begin(), tau.end(), x);
    return static_cast<std::size_t>(std::distance(tau.begin(), it)) - 1;
}

// Degree-1 B-spline B_{m,1} evaluated on knot interval q (as a limit from inside).
double hat_on(const std::vector<double>& tau, std::size_t m, std::size_t q, double x) {
    if (q == m && tau[m + 1] > tau[m]) return (x - tau[m]) / (tau[m + 1] - tau[m]);
    if (q == m + 1 && tau[m + 2] > tau[m + 1]) return (tau[m + 2] - x) / (tau[m + 2] - tau[m + 1]);
    return 0.0;
}

double cubic_second_derivative_on(const std::vector<double>& tau, std::size_t i, std::size_t q,
                                  double x) {
    const double a = inverse_gap(tau[i], tau[i + 2]);
    const double b = inverse_gap(tau[i + 1], tau[i + 3]);
    const double c = inverse_gap(tau[i + 2], tau[i + 4]);
    const double first = inverse_gap(tau[i], tau[i + 3]);
    const double second = inverse_gap(tau[i + 1], tau[i + 4]);
    const double h0 = hat_on(tau, i, q, x);
    const double h1 = hat_on(tau, i + 1, q, x);
    const double h2 = hat_on(tau, i + 2, q, x);
    return 6.0 * (first * (h0 * a - h1 * b) - second * (h1 * b - h2 * c));
}

}  // namespace

SmoothingSpline SmoothingSpline::fit(std::span<const double> x, std::span<const double> y,
                                     double lambda, std::span<const double> weights) {
    const std::size_t n = x.size();
    if (n < 2) throw TooFewPoints("smoothing spline needs at least 2 knots");
    if (y.size() != n || (!weights.empty() && weights.size() != n))
        throw ShapeError("smoothing spline: x, y and weights differ in length");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x[i] > x[i - 1])) throw FormatError("smoothing spline knots must be strictly increasing");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be finite and >= 0");

    SmoothingSpline s;
    s.knots_.assign(x.begin(), x.end());
    s.lambda_ = lambda;
    s.second_.assign(n, 0.0);

    if (n == 2) {
        s.values_.assign(y.begin(), y.end());
        return s;
    }

    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x[i + 1] - x[i];

    const std::size_t m = n - 2;
    std::vector<double> inv_w(n, 1.0);
    if (!weights.empty()) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!(weights[i] > 0.0)) throw ConfigError("smoothing spline weights must be positive");
            inv_w[i] = 1.0 / weights[i];
        }
    }

    // Q column j corresponds to interior knot k = j + 1 and has entries on rows k-1, k, k+1.
    auto q_entry = [&](std::size_t row, std::size_t col) -> double {
        const std::size_t k = col + 1;
        if (row + 1 == k) return 1.0 / h[k - 1];
        if (row == k) return -1.0 / h[k - 1] - 1.0 / h[k];
        if (row == k + 1) return 1.0 / h[k];
        return 0.0;
    };

    std::vector<double> diag(m), off1(m, 0.0), off2(m, 0.0), rhs(m);
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t k = j + 1;
        diag[j] = (h[k - 1] + h[k]) / 3.0;
        if (j + 1 < m) off1[j] = h[k] / 6.0;
        rhs[j] = (y[k + 1] - y[k]) / h[k] - (y[k] - y[k - 1]) / h[k - 1];
    }
    // lambda * Q' W^-1 Q, accumulated row by row of Q.
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t lo = r >= 2 ? r - 2 : 0;
        const std::size_t hi = std::min(r, m - 1);
        for (std::size_t a = lo; a <= hi; ++a) {
            const double qa = q_entry(r, a);
            if (qa == 0.0) continue;
            for (std::size_t b = a; b <= hi; ++b) {
                const double v = lambda * qa * inv_w[r] * q_entry(r, b);
                if (b == a) diag[a] += v;
                else if (b == a + 1) off1[a] += v;
                else off2[a] += v;
            }
        }
    }

    const std::vector<double> gamma = solve_pentadiagonal(std::move(diag), off1, off2, std::move(rhs));

    s.values_.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        double qg = 0.0;
        const std::size_t lo = r >= 2 ? r - 2 : 0;
        const std::size_t hi = std::min(r, m - 1);
        for (std::size_t j = lo; j <= hi; ++j) qg += q_entry(r, j) * gamma[j];
        s.values_[r] = y[r] - lambda * inv_w[r] * qg;
    }
    for (std::size_t j = 0; j < m; ++j) s.second_[j + 1] = gamma[j];
    return s;
}

double SmoothingSpline::operator()(double t) const {
    const std::size_t n = knots_.size();
    if (n == 0) return 0.0;
    if (n == 1) return values_[0];
    if (t <= knots_.front()) {
        const double h = knots_[1] - knots_[0];
        const double slope = (values_[1] - values_[0]) / h - h * second_[1] / 6.0;
        return values_[0] + slope * (t - knots_[0]);
    }
    if (t >= knots_.back()) {
        const double h = knots_[n - 1] - knots_[n - 2];
        const double slope = (values_[n - 1] - values_[n - 2]) / h + h * second_[n - 2] / 6.0;
        return values_[n - 1] + slope * (t - knots_[n - 1]);
    }
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    const std::size_t i = static_cast<std::size_t>(std::distance(knots_.begin(), it)) - 1;
    const double h = knots_[i + 1] - knots_[i];
    const double dl = t - knots_[i];
    const double dr = knots_[i + 1] - t;
    const double linear = (dl * values_[i + 1] + dr * values_[i]) / h;
    const double curvature =
        (1.0 + dl / h) * second_[i + 1] + (1.0 + dr / h) * second_[i];
    return linear - dl * dr * curvature / 6.0;
}

double SmoothingSpline::roughness() const {
    const std::size_t n = knots_.size();
    if (n < 3) return 0.0;
    // gamma' R gamma with R tridiagonal: R(k,k) = (h_{k-1}+h_k)/3, R(k,k+1) = h_k/6
    double total = 0.0;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double hl = knots_[k] - knots_[k - 1];
        const double hr = knots_[k + 1] - knots_[k];
        total += second_[k] * second_[k] * (hl + hr) / 3.0;
        if (k + 2 < n) total += 2.0 * second_[k] * second_[k + 1] * hr / 6.0;
    }
    return total;
}

double penalty_trace_ratio(std::span<const double> x, std::span<const double> weights) {
    const std::size_t n = x.size();
    if (n < 4) throw TooFewPoints("trace ratio needs at least 4 distinct abscissae");
    std::vector<double> tau;
    tau.reserve(n + 6);
    tau.insert(tau.end(), 3, x.front());
    tau.insert(tau.end(), x.begin(), x.end());
    tau.insert(tau.end(), 3, x.back());
    const std::size_t nk = n + 2;

    std::vector<double> xwx(nk, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = weights.empty() ? 1.0 : weights[k];
        const std::size_t mu = find_interval(tau, x[k]);
        const auto b = cubic_basis(tau, mu, x[k]);
        for (std::size_t r = 0; r < 4; ++r) xwx[mu - 3 + r] += w * b[r] * b[r];
    }

    std::vector<double> sigma(nk, 0.0);
    for (std::size_t i = 0; i < nk; ++i) {
        double integral = 0.0;
        for (std::size_t q = i; q < i + 4; ++q) {
            const double lo = tau[q];
            const double hi = tau[q + 1];
            if (!(hi > lo)) continue;
            const double a = cubic_second_derivative_on(tau, i, q, lo);
            const double b = cubic_second_derivative_on(tau, i, q, hi);
            integral += (hi - lo) * (a * a + a * b + b * b) / 3.0;
        }
        sigma[i] = integral;
    }

    double t1 = 0.0;
    double t2 = 0.0;
    for (std::size_t i = 2; i + 3 < nk; ++i) {
        t1 += xwx[i];
        t2 += sigma[i];
    }
    return t1 / t2;
}

double lambda_from_spar(double spar, double trace_ratio) noexcept {
    return trace_ratio * std::pow(256.0, 3.0 * spar - 1.0);
}

AxisSmoother AxisSmoother::fit(std::span<const double> times, std::span<const double> values,
                               double spar, double lambda_override) {
    if (times.size() != values.size()) throw ShapeError("times and values differ in length");
    std::vector<std::size_t> order(times.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });

    std::vector<double> ux, uy, uw;
    for (std::size_t idx : order) {
        if (!std::isfinite(values[idx]) || !std::isfinite(times[idx]))
            throw FormatError("non-finite value passed to smoother");
        if (!ux.empty() && times[idx] == ux.back()) {
            const double w = uw.back();
            uy.back() = (uy.back() * w + values[idx]) / (w + 1.0);
            uw.back() = w + 1.0;
        } else {
            ux.push_back(times[idx]);
            uy.push_back(values[idx]);
            uw.push_back(1.0);
        }
    }
    if (ux.size() < 4) throw TooFewPoints("smoothing needs at least 4 distinct time points");

    AxisSmoother out;
    out.t_min_ = ux.front();
    out.t_max_ = ux.back();
    const double span = out.t_max_ - out.t_min_;
    for (double& u : ux) u = (u - out.t_min_) / span;
    ux.front() = 0.0;
    ux.back() = 1.0;

    const double lambda =
        lambda_override > 0.0 ? lambda_override : lambda_from_spar(spar, penalty_trace_ratio(ux, uw));
    out.spline_ = SmoothingSpline::fit(ux, uy, lambda, uw);
    return out;
}

double AxisSmoother::operator()(double t) const {
    return spline_((t - t_min_) / (t_max_ - t_min_));
}

}  // namespace accelerograph
