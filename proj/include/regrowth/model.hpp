#pragma once

#include <vector>

#include "regrowth/markov.hpp"
#include "regrowth/shock.hpp"

namespace regrowth {

/**
 * Regime-switching Cobb-Douglas growth model with power utility.
 *
 *   production  f(theta, y, z) = y^omega(theta) * z
 *   utility     u(a)           = a^sigma
 *   weight      w(x, theta)    = (r + x)^sigma
 *
 * gamma is the risk sensitivity of the entropic certainty equivalent;
 * gamma == 0 is the risk-neutral (expected utility) limit.
 */
struct ModelSpec {
    double beta = 0.9;
    double gamma = 1.0;
    double sigma = 0.5;
    double r = 633.0;
    std::vector<double> omega;
    RegimeChain chain;
    ShockModel shock;

    ModelSpec(double beta, double gamma, double sigma, double r, std::vector<double> omega,
              RegimeChain chain, ShockModel shock);

    std::size_t n_regimes() const noexcept { return omega.size(); }

    /// Single-regime model sharing every parameter, with omega of `regime`.
    ModelSpec eternal(Regime regime) const;
};

double production(const ModelSpec& spec, Regime theta, double y, double z);
/// Marginal product in y; throws Error{DomainError} at y <= 0.
double production_derivative(const ModelSpec& spec, Regime theta, double y, double z);
double utility(const ModelSpec& spec, double a);
/// Throws Error{DomainError} at a <= 0 where the derivative is unbounded.
double utility_derivative(const ModelSpec& spec, double a);
double weight(const ModelSpec& spec, double x, Regime theta);

struct AssumptionReport {
    double d = 1.0;
    double x_bar = 0.0;
    double alpha = 0.0;
    double alpha_beta = 0.0;
    double d1_value = 0.0;
    double lambda2 = 0.0;
    double kappa2 = 0.0;
    bool d3_irreducible = false;

    bool f2_holds() const noexcept { return alpha_beta < 1.0; }
    // Cobb-Douglas production sends the lower-tail limit to zero whenever
    // E[1/xi] is finite, which check_assumptions already enforces.
    bool d1_holds() const noexcept { return std::isfinite(d1_value); }
    bool d2_holds() const noexcept { return lambda2 > 0.0 && lambda2 < 1.0 && kappa2 > 0.0; }
};

/// Closed-form constants of the growth, drift and regularity conditions.
/// Throws Error{InfiniteMoment} when E[xi] or E[1/xi] is infinite.
AssumptionReport check_assumptions(const ModelSpec& spec);

/// Smallest integer r >= 1 for which alpha * beta < 1.
double minimal_weight_offset(const ModelSpec& spec);

}  // namespace regrowth
