#include "accelerograph/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "accelerograph/errors.hpp"

namespace accelerograph {

namespace {

bool better(double d, char letter, const std::string& id, double best_d, char best_letter,
            const std::string& best_id) {
    return std::tie(d, letter, id) < std::tie(best_d, best_letter, best_id);
}

}  // namespace

double soap_distance(const GestureCurve& a, const GestureCurve& b, AxisClass mode) {
    double total = 0.0;
    if (mode == AxisClass::BothAxes) {
        if (a.points.size() != b.points.size())
            throw ShapeError("curves differ in point count: " + std::to_string(a.points.size()) + " vs " +
                             std::to_string(b.points.size()));
        for (std::size_t i = 0; i < a.points.size(); ++i)
            total += std::hypot(a.points[i].x - b.points[i].x, a.points[i].y - b.points[i].y);
        return total;
    }
    if (a.principal_series.empty() || b.principal_series.empty())
        throw ShapeError("single-axis distance needs principal series on both curves");
    if (a.principal_series.size() != b.principal_series.size())
        throw ShapeError("principal series differ in length");
    for (std::size_t i = 0; i < a.principal_series.size(); ++i)
        total += std::abs(a.principal_series[i] - b.principal_series[i]);
    return total;
}

ClassificationResult classify(const GestureCurve& curve, const TrainingSet& training) {
    const AxisClass mode = curve.axis_class;
    const TrainingTemplate* best = nullptr;
    double best_d = 0.0;
    std::vector<std::pair<const TrainingTemplate*, double>> scored;
    for (const auto& t : training.templates) {
        if (t.curve.axis_class != mode) continue;
        const double d = soap_distance(curve, t.curve, mode);
        scored.emplace_back(&t, d);
        if (!best || better(d, t.letter, t.source_id, best_d, best->letter, best->source_id)) {
            best = &t;
            best_d = d;
        }
    }
    if (!best)
        throw NoTemplatesForAxis("no training templates for axis family '" + std::string(to_string(mode)) + "'");

    ClassificationResult result;
    result.letter = best->letter;
    result.distance = best_d;
    result.axis_class = mode;
    result.source_id = best->source_id;

    const TrainingTemplate* second = nullptr;
    double second_d = 0.0;
    for (const auto& [t, d] : scored) {
        if (t->letter == best->letter) continue;
        if (!second || better(d, t->letter, t->source_id, second_d, second->letter, second->source_id)) {
            second = t;
            second_d = d;
        }
    }
    if (second) result.runner_up = Neighbour{second->letter, second_d, second->source_id};
    return result;
}

DistanceMatrix distance_matrix(const TrainingSet& training, AxisClass axis_class) {
    std::vector<const TrainingTemplate*> members;
    for (const auto& t : training.templates)
        if (t.curve.axis_class == axis_class) members.push_back(&t);
    std::sort(members.begin(), members.end(), [](const TrainingTemplate* a, const TrainingTemplate* b) {
        return std::tie(a->letter, a->source_id) < std::tie(b->letter, b->source_id);
    });

    DistanceMatrix m;
    m.axis_class = axis_class;
    const std::size_t n = members.size();
    m.values.assign(n, std::vector<double>(n, 0.0));
    for (const auto* t : members) {
        m.letters.push_back(t->letter);
        m.source_ids.push_back(t->source_id);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = soap_distance(members[i]->curve, members[j]->curve, axis_class);
            m.values[i][j] = d;
            m.values[j][i] = d;
        }
    }
    return m;
}

}  // namespace accelerograph
