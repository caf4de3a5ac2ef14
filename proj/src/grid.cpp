#include "regrowth/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "regrowth/error.hpp"
#include "regrowth/model.hpp"

namespace regrowth {

IncomeGrid::IncomeGrid(std::vector<double> nodes, GridSpacing spacing)
    : nodes_(std::move(nodes)), spacing_(spacing) {
    if (nodes_.size() < 2) throw Error(ErrorCode::DomainError, "income grid needs at least two nodes");
    if (nodes_.front() != 0.0) throw Error(ErrorCode::DomainError, "income grid must start at 0");
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        if (!(nodes_[i] > nodes_[i - 1]) || !std::isfinite(nodes_[i])) {
            throw Error(ErrorCode::DomainError, "income grid must be strictly increasing");
        }
    }
    if (spacing_ == GridSpacing::Linear) step_ = nodes_[1] - nodes_[0];
}

IncomeGrid IncomeGrid::linear(double x_max, std::size_t count) {
    if (count < 2 || !(x_max > 0.0)) throw Error(ErrorCode::DomainError, "linear grid needs count >= 2, x_max > 0");
    std::vector<double> nodes(count);
    for (std::size_t i = 0; i < count; ++i) {
        nodes[i] = x_max * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    nodes.back() = x_max;
    return IncomeGrid(std::move(nodes), GridSpacing::Linear);
}

IncomeGrid IncomeGrid::log_linear(double x_max, std::size_t count, double x_min) {
    if (count < 3 || !(x_min > 0.0) || !(x_max > x_min)) {
        throw Error(ErrorCode::DomainError, "log grid needs count >= 3 and 0 < x_min < x_max");
    }
    std::vector<double> nodes{0.0};
    const double ratio = std::log(x_max / x_min) / static_cast<double>(count - 2);
    for (std::size_t i = 0; i + 1 < count; ++i) nodes.push_back(x_min * std::exp(ratio * static_cast<double>(i)));
    nodes.back() = x_max;
    return IncomeGrid(std::move(nodes), GridSpacing::LogLinear);
}

IncomeGrid IncomeGrid::from_nodes(std::vector<double> nodes) {
    return IncomeGrid(std::move(nodes), GridSpacing::LogLinear);
}

std::size_t IncomeGrid::segment(double x) const noexcept {
    const std::size_t last = nodes_.size() - 2;
    if (x >= nodes_.back()) return last;
    if (!(x > 0.0)) return 0;
    if (spacing_ == GridSpacing::Linear) {
        auto j = static_cast<std::size_t>(x / step_);
        // Floating-point division can land one segment off near node boundaries.
        if (j > last) j = last;
        while (j > 0 && nodes_[j] > x) --j;
        while (j < last && nodes_[j + 1] <= x) ++j;
        return j;
    }
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    return std::min(last, static_cast<std::size_t>(it - nodes_.begin()) - 1);
}

GriddedFunction::GriddedFunction(IncomeGrid g, Eigen::MatrixXd v) : grid(std::move(g)), values(std::move(v)) {
    if (static_cast<std::size_t>(values.rows()) != grid.count()) {
        throw Error(ErrorCode::GridMismatch, "value table rows do not match the grid");
    }
}

double evaluate_value(const GriddedFunction& f, double x, Regime theta) {
    const std::size_t j = f.grid.segment(x);
    const double x0 = f.grid[j];
    const double x1 = f.grid[j + 1];
    const double v0 = f.at(j, theta);
    const double v1 = f.at(j + 1, theta);
    if (x == x1) return v1;
    return v0 + (v1 - v0) * ((x - x0) / (x1 - x0));
}

double w_norm_distance(const GriddedFunction& a, const GriddedFunction& b, const ModelSpec& spec) {
    if (!(a.grid == b.grid) || a.n_regimes() != b.n_regimes()) {
        throw Error(ErrorCode::GridMismatch, "fields live on different grids");
    }
    double worst = 0.0;
    for (std::size_t t = 0; t < a.n_regimes(); ++t) {
        for (std::size_t i = 0; i < a.grid.count(); ++i) {
            worst = std::max(worst, std::abs(a.at(i, t) - b.at(i, t)) / weight(spec, a.grid[i], t));
        }
    }
    return worst;
}

void make_concave(GriddedFunction& f) {
    const auto& x = f.grid.nodes();
    std::vector<std::size_t> hull;
    for (std::size_t t = 0; t < f.n_regimes(); ++t) {
        hull.clear();
        for (std::size_t i = 0; i < x.size(); ++i) {
            // Pop while the last hull vertex lies on or below the chord to node i.
            while (hull.size() >= 2) {
                const std::size_t a = hull[hull.size() - 2];
                const std::size_t b = hull.back();
                const double cross = (x[b] - x[a]) * (f.at(i, t) - f.at(a, t)) -
                                     (f.at(b, t) - f.at(a, t)) * (x[i] - x[a]);
                if (cross < 0.0) break;
                hull.pop_back();
            }
            hull.push_back(i);
        }
        for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
            const std::size_t a = hull[h];
            const std::size_t b = hull[h + 1];
            for (std::size_t i = a + 1; i < b; ++i) {
                const double chord = f.at(a, t) + (f.at(b, t) - f.at(a, t)) * ((x[i] - x[a]) / (x[b] - x[a]));
                f.at(i, t) = std::max(f.at(i, t), chord);
            }
        }
    }
}

std::string value_field_violation(const GriddedFunction& v, double tolerance) {
    const auto& x = v.grid.nodes();
    for (std::size_t t = 0; t < v.n_regimes(); ++t) {
        double prev_slope = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            std::ostringstream where;
            where << " at x=" << x[i] << " regime " << t + 1;
            const double value = v.at(i, t);
            if (!std::isfinite(value)) return "non-finite value" + where.str();
            if (value < -tolerance) return "negative value" + where.str();
            if (i == 0) continue;
            const double slope = (value - v.at(i - 1, t)) / (x[i] - x[i - 1]);
            if (value - v.at(i - 1, t) < -tolerance) return "decreasing" + where.str();
            // Second difference on the node scale, so the tolerance is in value units.
            if (i >= 2 && (slope - prev_slope) * (x[i] - x[i - 1]) > tolerance) {
                return "not concave" + where.str();
            }
            prev_slope = slope;
        }
    }
    return {};
}

}  // namespace regrowth
