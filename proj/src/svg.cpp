#include "accelerograph/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace accelerograph {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 400.0;
constexpr double kMargin = 50.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string header(double w, double h) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
           "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "start") {
    return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"" +
           anchor + "\">" + s + "</text>\n";
}

struct Frame {
    double x0, x1, y0, y1;

    double px(double x) const {
        const double span = x1 > x0 ? x1 - x0 : 1.0;
        return kMargin + (x - x0) / span * (kWidth - 2 * kMargin);
    }
    double py(double y) const {
        const double span = y1 > y0 ? y1 - y0 : 1.0;
        return kHeight - kMargin - (y - y0) / span * (kHeight - 2 * kMargin);
    }
};

std::string axes_box(const Frame& f, const std::string& xlabel, const std::string& ylabel) {
    std::string out = "<rect x=\"" + num(kMargin) + "\" y=\"" + num(kMargin) + "\" width=\"" +
                      num(kWidth - 2 * kMargin) + "\" height=\"" + num(kHeight - 2 * kMargin) +
                      "\" fill=\"none\" stroke=\"black\"/>\n";
    out += text(kWidth / 2, kHeight - 10, xlabel, "middle");
    out += text(12, kHeight / 2, ylabel);
    out += text(kMargin, kHeight - kMargin + 15, num(f.x0), "middle");
    out += text(kWidth - kMargin, kHeight - kMargin + 15, num(f.x1), "middle");
    out += text(kMargin - 4, kHeight - kMargin, num(f.y0), "end");
    out += text(kMargin - 4, kMargin + 4, num(f.y1), "end");
    return out;
}

std::string polyline(const Frame& f, std::span<const double> xs, std::span<const double> ys, const char* colour) {
    std::string out = "<polyline fill=\"none\" stroke=\"";
    out += colour;
    out += "\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ' ';
        out += num(f.px(xs[i])) + "," + num(f.py(ys[i]));
    }
    out += "\"/>\n";
    return out;
}

}  // namespace

std::string variance_svg(const VarSeries& variance, const CutoffReport& cutoffs) {
    std::vector<double> xs(variance.values.size());
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i);
    double top = cutoffs.kmeans_cut;
    for (double v : variance.values) top = std::max(top, v);
    const Frame f{0.0, std::max(1.0, static_cast<double>(xs.size()) - 1.0), 0.0, top > 0 ? top : 1.0};

    std::string out = header(kWidth, kHeight);
    out += axes_box(f, "index", "moving variance");
    out += polyline(f, xs, variance.values, "black");

    struct Cut {
        const char* label;
        double value;
        const char* colour;
    };
    const Cut cuts[] = {{"k-means", cutoffs.kmeans_cut, "blue"},
                        {"GMM", cutoffs.gmm_cut, "green"},
                        {"bagged", cutoffs.bagged_cut, "red"}};
    for (const auto& c : cuts) {
        const double y = f.py(c.value);
        out += "<line class=\"cutoff\" x1=\"" + num(kMargin) + "\" y1=\"" + num(y) + "\" x2=\"" +
               num(kWidth - kMargin) + "\" y2=\"" + num(y) + "\" stroke=\"" + c.colour +
               "\" stroke-dasharray=\"4 2\"/>\n";
        out += text(kWidth - kMargin + 2, y + 4, c.label);
    }
    out += "</svg>\n";
    return out;
}

std::string xy_svg(std::span<const LabelledCurve> curves) {
    const double side = kHeight;
    const double inner = side - 2 * kMargin;
    std::string out = header(side, side);
    out += "<rect x=\"" + num(kMargin) + "\" y=\"" + num(kMargin) + "\" width=\"" + num(inner) + "\" height=\"" +
           num(inner) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (const auto& c : curves) {
        out += "<path class=\"curve\" data-letter=\"" + std::string(1, c.letter) +
               "\" fill=\"none\" stroke=\"black\" d=\"";
        for (std::size_t i = 0; i < c.curve.points.size(); ++i) {
            const auto& p = c.curve.points[i];
            out += i ? " L " : "M ";
            // y grows downwards in SVG; the plot keeps the usual upward axis
            out += num(kMargin + p.x * inner) + " " + num(side - kMargin - p.y * inner);
        }
        out += "\"/>\n";
    }
    out += text(side / 2, side - 10, "x", "middle");
    out += text(12, side / 2, "y");
    out += "</svg>\n";
    return out;
}

std::string axes_svg(std::span<const AccelSample> samples) {
    std::vector<double> t, x, y;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& s : samples) {
        t.push_back(s.t);
        x.push_back(s.ax);
        y.push_back(s.ay);
        lo = std::min({lo, s.ax, s.ay});
        hi = std::max({hi, s.ax, s.ay});
    }
    if (samples.empty()) lo = hi = 0.0;
    const Frame f{t.empty() ? 0.0 : t.front(), t.empty() ? 1.0 : t.back(), lo, hi > lo ? hi : lo + 1.0};
    std::string out = header(kWidth, kHeight);
    out += axes_box(f, "time (ms)", "acceleration");
    out += polyline(f, t, x, "blue");
    out += polyline(f, t, y, "red");
    out += text(kWidth - kMargin + 2, kMargin + 12, "x");
    out += text(kWidth - kMargin + 2, kMargin + 28, "y");
    out += "</svg>\n";
    return out;
}

std::string heatmap_svg(const DistanceMatrix& matrix) {
    const std::size_t n = matrix.size();
    const double cell = n ? std::max(2.0, std::min(20.0, 600.0 / static_cast<double>(n))) : 20.0;
    const double side = 2 * kMargin + cell * static_cast<double>(n);
    double top = 0.0;
    for (const auto& row : matrix.values)
        for (double v : row) top = std::max(top, v);

    std::string out = header(side, side);
    out += text(side / 2, 20, std::string("axis family: ") + std::string(to_string(matrix.axis_class)), "middle");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double s = top > 0 ? matrix.values[i][j] / top : 0.0;
            const int red = static_cast<int>(std::lround(255 * s));
            const int blue = 255 - red;
            out += "<rect x=\"" + num(kMargin + cell * static_cast<double>(j)) + "\" y=\"" +
                   num(kMargin + cell * static_cast<double>(i)) + "\" width=\"" + num(cell) + "\" height=\"" +
                   num(cell) + "\" fill=\"rgb(" + std::to_string(red) + ",0," + std::to_string(blue) + ")\"/>\n";
        }
        // label only where a new letter starts
        if (i == 0 || matrix.letters[i] != matrix.letters[i - 1]) {
            const std::string l(1, matrix.letters[i]);
            out += text(kMargin - 4, kMargin + cell * (static_cast<double>(i) + 1), l, "end");
            out += text(kMargin + cell * (static_cast<double>(i) + 0.5), kMargin - 4, l, "middle");
        }
    }
    out += "</svg>\n";
    return out;
}

}  // namespace accelerograph
