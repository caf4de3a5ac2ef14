#include "regrowth/euler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "regrowth/error.hpp"
#include "regrowth/parallel.hpp"

namespace regrowth {

DistortedWeights distorted_measure(const GriddedFunction& value, const ModelSpec& spec, Regime theta,
                                   double investment, const QuadratureRule& rule) {
    const QuadNodes nodes = quadrature_nodes(spec.shock, rule);
    const std::size_t n_reg = spec.n_regimes();
    DistortedWeights out{nodes.z, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nodes.size()),
                                                        static_cast<Eigen::Index>(n_reg))};
    Eigen::MatrixXd exponent(out.weights.rows(), out.weights.cols());
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double income = production(spec, theta, investment, nodes.z[i]);
        for (std::size_t r = 0; r < n_reg; ++r) {
            const double v = spec.gamma * evaluate_value(value, income, r);
            exponent(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r)) = v;
            if (spec.chain.probability(theta, r) > 0.0) lowest = std::min(lowest, v);
        }
    }
    double total = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t r = 0; r < n_reg; ++r) {
            const auto ii = static_cast<Eigen::Index>(i);
            const auto rr = static_cast<Eigen::Index>(r);
            const double p = spec.chain.probability(theta, r);
            const double w = p > 0.0 ? nodes.weight[i] * p * std::exp(-(exponent(ii, rr) - lowest)) : 0.0;
            out.weights(ii, rr) = w;
            total += w;
        }
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw Error(ErrorCode::DegenerateMass, "distorted measure has no mass");
    }
    out.weights /= total;
    return out;
}

double optimal_consumption(const GriddedFunction& policy, double x, Regime theta) {
    return x - evaluate_value(policy, x, theta);
}

double EulerTerms::relative() const noexcept { return std::abs(residual()) / marginal_utility; }

EulerTerms euler_terms(const GriddedFunction& value, const GriddedFunction& policy, const ModelSpec& spec,
                       double x, Regime theta, const QuadratureRule& rule) {
    if (!(x > 0.0)) throw Error(ErrorCode::DomainError, "Euler equation needs x > 0");
    return euler_terms_at(value, policy, spec, x, theta, evaluate_value(policy, x, theta), rule);
}

EulerTerms euler_terms_at(const GriddedFunction& value, const GriddedFunction& policy, const ModelSpec& spec,
                          double x, Regime theta, double y, const QuadratureRule& rule) {
    if (!(y > 0.0 && y < x)) {
        throw Error(ErrorCode::BoundaryPolicy,
                    "policy is not interior at x=" + std::to_string(x) + " regime " + std::to_string(theta + 1));
    }
    const DistortedWeights measure = distorted_measure(value, spec, theta, y, rule);
    double expectation = 0.0;
    for (std::size_t i = 0; i < measure.z.size(); ++i) {
        const double z = measure.z[i];
        const double income = production(spec, theta, y, z);
        const double slope = production_derivative(spec, theta, y, z);
        for (std::size_t r = 0; r < spec.n_regimes(); ++r) {
            const double w = measure.weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r));
            if (w == 0.0) continue;
            const double c_next = optimal_consumption(policy, income, r);
            if (!(c_next > 0.0)) {
                throw Error(ErrorCode::BoundaryPolicy,
                            "no consumption at next-period income " + std::to_string(income));
            }
            expectation += w * utility_derivative(spec, c_next) * slope;
        }
    }
    return {utility_derivative(spec, x - y), spec.beta * expectation};
}

double euler_residual(const GriddedFunction& value, const GriddedFunction& policy, const ModelSpec& spec,
                      double x, Regime theta, const QuadratureRule& rule) {
    return euler_terms(value, policy, spec, x, theta, rule).residual();
}

bool near_boundary(double investment, double x, std::size_t y_count) {
    const double step = x / static_cast<double>(y_count - 1);
    // Half-step slack absorbs rounding in the candidate positions.
    return investment < 1.5 * step || investment > x - 1.5 * step;
}

std::vector<ResidualRow> euler_profile(const GriddedFunction& value, const GriddedFunction& policy,
                                       const ModelSpec& spec, std::size_t y_count, const QuadratureRule& rule) {
    const auto& grid = value.grid;
    const std::size_t n_x = grid.count() - 1;
    std::vector<ResidualRow> rows(n_x * spec.n_regimes());
    parallel_for(rows.size(), [&](std::size_t task) {
        const Regime theta = task / n_x;
        const std::size_t i = task % n_x + 1;
        ResidualRow& row = rows[task];
        row.x = grid[i];
        row.theta = theta;
        row.excluded = near_boundary(policy.at(i, theta), grid[i], y_count);
        if (row.excluded) {
            row.residual = row.relative = std::numeric_limits<double>::quiet_NaN();
            return;
        }
        try {
            const EulerTerms terms = euler_terms(value, policy, spec, grid[i], theta, rule);
            row.residual = terms.residual();
            row.relative = terms.relative();
        } catch (const Error& e) {
            // Tomorrow's policy may sit on the boundary at tiny incomes.
            if (e.code() != ErrorCode::BoundaryPolicy) throw;
            row.excluded = true;
            row.residual = row.relative = std::numeric_limits<double>::quiet_NaN();
        }
    });
    return rows;
}

double median_relative_residual(const std::vector<ResidualRow>& rows) {
    std::vector<double> kept;
    for (const auto& row : rows) {
        if (!row.excluded) kept.push_back(row.relative);
    }
    if (kept.empty()) throw Error(ErrorCode::EmptySample, "no interior Euler nodes");
    const auto mid = kept.begin() + static_cast<std::ptrdiff_t>(kept.size() / 2);
    std::nth_element(kept.begin(), mid, kept.end());
    if (kept.size() % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(kept.begin(), mid);
    return 0.5 * (lower + upper);
}

EnvelopeReport envelope_check(const GriddedFunction& value, const GriddedFunction& policy, const ModelSpec& spec,
                              double x_floor) {
    const auto& x = value.grid.nodes();
    EnvelopeReport report{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(value.n_regimes()))};
    for (std::size_t t = 0; t < value.n_regimes(); ++t) {
        double worst = 0.0;
        for (std::size_t i = 1; i + 1 < x.size(); ++i) {
            if (x[i] < x_floor) continue;
            const double consumption = x[i] - policy.at(i, t);
            if (!(consumption > 0.0)) continue;
            const double slope = (value.at(i + 1, t) - value.at(i - 1, t)) / (x[i + 1] - x[i - 1]);
            worst = std::max(worst, std::abs(slope / utility_derivative(spec, consumption) - 1.0));
        }
        report.per_regime(static_cast<Eigen::Index>(t)) = worst;
    }
    return report;
}

}  // namespace regrowth
