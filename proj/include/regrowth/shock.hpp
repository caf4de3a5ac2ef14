#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "regrowth/error.hpp"

namespace regrowth {

struct LognormalShock {
    double mu = 0.0;
    double sigma = 1.0;
};

/// Finite-support shock; points need not be sorted on input.
struct DiscreteShock {
    std::vector<double> points;
    std::vector<double> weights;
};

/**
 * Distribution of the i.i.d. multiplicative production shock.
 *
 * The mean and the mean of the reciprocal are cached at construction; the
 * reciprocal mean is +inf when a discrete shock puts mass on zero.
 */
class ShockModel {
public:
    explicit ShockModel(LognormalShock lognormal);
    explicit ShockModel(DiscreteShock discrete);

    static ShockModel lognormal(double mu, double sigma) { return ShockModel(LognormalShock{mu, sigma}); }
    static ShockModel point_mass(double z) { return ShockModel(DiscreteShock{{z}, {1.0}}); }

    bool is_discrete() const noexcept { return std::holds_alternative<DiscreteShock>(kind_); }
    const std::variant<LognormalShock, DiscreteShock>& kind() const noexcept { return kind_; }

    double mean() const noexcept { return mean_; }
    double reciprocal_mean() const noexcept { return reciprocal_mean_; }

    /// Generalized inverse of the CDF; t must lie in the open unit interval.
    double inverse_cdf(double t) const;

private:
    std::variant<LognormalShock, DiscreteShock> kind_;
    double mean_ = 0.0;
    double reciprocal_mean_ = 0.0;
};

/// Composite trapezoid over the quantile variable t in [0,1].
struct QuadratureRule {
    int n_intervals = 18;
    /// Quantile arguments are clamped into [epsilon, 1 - epsilon].
    double epsilon = 1e-6;

    void validate() const;
};

/// Abscissae and weights of a shock expectation. Weights sum to one.
struct QuadNodes {
    std::vector<double> z;
    std::vector<double> weight;

    std::size_t size() const noexcept { return z.size(); }
};

/**
 * Discrete shocks yield their support points with their own weights.
 * Continuous shocks yield n_intervals+1 equi-spaced quantile levels on
 * [epsilon, 1-epsilon] with trapezoid weights 1/n (1/2n at the two ends),
 * so the weights integrate constants exactly.
 */
QuadNodes quadrature_nodes(const ShockModel& shock, const QuadratureRule& rule);

template <class G>
double expect_shock(G&& g, const QuadNodes& nodes) {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double v = g(nodes.z[i]);
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::NonFiniteIntegrand,
                        "integrand is not finite at z=" + std::to_string(nodes.z[i]));
        }
        sum += nodes.weight[i] * v;
    }
    return sum;
}

template <class G>
double expect_shock(G&& g, const ShockModel& shock, const QuadratureRule& rule) {
    return expect_shock(std::forward<G>(g), quadrature_nodes(shock, rule));
}

/**
 * Entropic certainty equivalent over joint (next regime, shock node) outcomes.
 *
 * `outcomes` is laid out regime-major: outcomes[r * nodes.size() + i] is the
 * value when the next regime is r and the shock is nodes.z[i]. For gamma > 0
 * the result is -(1/gamma) ln sum_r p_r sum_i w_i exp(-gamma v_ri), evaluated
 * after shifting by the smallest outcome carrying positive mass. gamma == 0
 * returns the plain expectation.
 */
double certainty_equivalent(std::span<const double> outcomes, std::span<const double> p_row,
                            const QuadNodes& nodes, double gamma);

template <class F>
double certainty_equivalent(F&& outcome, std::span<const double> p_row, double gamma,
                            const QuadNodes& nodes) {
    std::vector<double> values(p_row.size() * nodes.size());
    for (std::size_t r = 0; r < p_row.size(); ++r) {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            values[r * nodes.size() + i] = outcome(r, nodes.z[i]);
        }
    }
    return certainty_equivalent(values, p_row, nodes, gamma);
}

}  // namespace regrowth
