#include "regrowth/shock.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

namespace regrowth {

ShockModel::ShockModel(LognormalShock lognormal) : kind_(lognormal) {
    if (!(lognormal.sigma > 0.0) || !std::isfinite(lognormal.mu) || !std::isfinite(lognormal.sigma)) {
        throw Error(ErrorCode::DomainError, "lognormal shock needs finite mu and sigma > 0");
    }
    const double half_var = 0.5 * lognormal.sigma * lognormal.sigma;
    mean_ = std::exp(lognormal.mu + half_var);
    reciprocal_mean_ = std::exp(-lognormal.mu + half_var);
}

ShockModel::ShockModel(DiscreteShock discrete) {
    if (discrete.points.empty() || discrete.points.size() != discrete.weights.size()) {
        throw Error(ErrorCode::DomainError, "discrete shock needs matching non-empty points and weights");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < discrete.points.size(); ++i) {
        if (!(discrete.points[i] >= 0.0) || !std::isfinite(discrete.points[i])) {
            throw Error(ErrorCode::DomainError, "discrete shock points must be finite and non-negative");
        }
        if (!(discrete.weights[i] >= 0.0)) {
            throw Error(ErrorCode::DomainError, "discrete shock weights must be non-negative");
        }
        total += discrete.weights[i];
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw Error(ErrorCode::DomainError, "discrete shock weights must sum to 1");
    }

    std::vector<std::size_t> order(discrete.points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return discrete.points[a] < discrete.points[b]; });
    DiscreteShock sorted;
    for (std::size_t i : order) {
        sorted.points.push_back(discrete.points[i]);
        sorted.weights.push_back(discrete.weights[i]);
    }

    mean_ = 0.0;
    reciprocal_mean_ = 0.0;
    for (std::size_t i = 0; i < sorted.points.size(); ++i) {
        mean_ += sorted.weights[i] * sorted.points[i];
        if (sorted.weights[i] > 0.0) {
            reciprocal_mean_ += sorted.points[i] > 0.0 ? sorted.weights[i] / sorted.points[i]
                                                       : std::numeric_limits<double>::infinity();
        }
    }
    kind_ = std::move(sorted);
}

double ShockModel::inverse_cdf(double t) const {
    if (!(t > 0.0 && t < 1.0)) {
        throw Error(ErrorCode::DomainError, "quantile level must lie in (0,1)");
    }
    if (const auto* ln = std::get_if<LognormalShock>(&kind_)) {
        const boost::math::normal_distribution<double> normal(ln->mu, ln->sigma);
        return std::exp(boost::math::quantile(normal, t));
    }
    const auto& d = std::get<DiscreteShock>(kind_);
    double cumulative = 0.0;
    for (std::size_t i = 0; i < d.points.size(); ++i) {
        cumulative += d.weights[i];
        if (cumulative >= t && d.weights[i] > 0.0) return d.points[i];
    }
    // Rounding left the cumulative sum a hair below t; take the top of the support.
    for (std::size_t i = d.points.size(); i-- > 0;) {
        if (d.weights[i] > 0.0) return d.points[i];
    }
    return d.points.back();
}

void QuadratureRule::validate() const {
    if (n_intervals < 1) {
        throw Error(ErrorCode::DomainError, "quadrature needs at least one interval");
    }
    if (!(epsilon > 0.0 && epsilon < 0.5 / n_intervals)) {
        throw Error(ErrorCode::DomainError, "quadrature clamp epsilon must lie in (0, 1/(2n))");
    }
}

QuadNodes quadrature_nodes(const ShockModel& shock, const QuadratureRule& rule) {
    QuadNodes nodes;
    if (const auto* d = std::get_if<DiscreteShock>(&shock.kind())) {
        for (std::size_t i = 0; i < d->points.size(); ++i) {
            if (d->weights[i] > 0.0) {
                nodes.z.push_back(d->points[i]);
                nodes.weight.push_back(d->weights[i]);
            }
        }
        return nodes;
    }
    rule.validate();
    const int n = rule.n_intervals;
    const double span = 1.0 - 2.0 * rule.epsilon;
    nodes.z.reserve(static_cast<std::size_t>(n) + 1);
    nodes.weight.reserve(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
        const double t = j == n ? 1.0 - rule.epsilon : rule.epsilon + span * j / n;
        nodes.z.push_back(shock.inverse_cdf(t));
        nodes.weight.push_back((j == 0 || j == n) ? 0.5 / n : 1.0 / n);
    }
    return nodes;
}

double certainty_equivalent(std::span<const double> outcomes, std::span<const double> p_row,
                            const QuadNodes& nodes, double gamma) {
    const std::size_t m = nodes.size();
    if (outcomes.size() != p_row.size() * m) {
        throw Error(ErrorCode::DomainError, "outcome table does not match regimes x shock nodes");
    }
    if (!(gamma >= 0.0)) {
        throw Error(ErrorCode::DomainError, "risk sensitivity must be non-negative");
    }
    double lowest = std::numeric_limits<double>::infinity();
    double expectation = 0.0;
    double mass = 0.0;
    for (std::size_t r = 0; r < p_row.size(); ++r) {
        if (p_row[r] <= 0.0) continue;
        for (std::size_t i = 0; i < m; ++i) {
            const double v = outcomes[r * m + i];
            if (!std::isfinite(v)) {
                throw Error(ErrorCode::NonFiniteIntegrand, "outcome is not finite");
            }
            lowest = std::min(lowest, v);
            expectation += p_row[r] * nodes.weight[i] * v;
            mass += p_row[r] * nodes.weight[i];
        }
    }
    if (!(mass > 0.0)) {
        throw Error(ErrorCode::NumericUnderflow, "outcome distribution carries no mass");
    }
    if (gamma == 0.0) return expectation / mass;

    // Dividing by the accumulated mass (same summation order) makes constant
    // outcomes map back to themselves bit-exactly.
    double sum = 0.0;
    for (std::size_t r = 0; r < p_row.size(); ++r) {
        if (p_row[r] <= 0.0) continue;
        for (std::size_t i = 0; i < m; ++i) {
            sum += p_row[r] * nodes.weight[i] * std::exp(-gamma * (outcomes[r * m + i] - lowest));
        }
    }
    if (!(sum > 0.0)) {
        throw Error(ErrorCode::NumericUnderflow, "certainty-equivalent mass underflowed");
    }
    return lowest - std::log(sum / mass) / gamma;
}

}  // namespace regrowth
