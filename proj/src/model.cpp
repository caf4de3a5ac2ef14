#include "regrowth/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "regrowth/error.hpp"

namespace regrowth {

ModelSpec::ModelSpec(double beta_, double gamma_, double sigma_, double r_, std::vector<double> omega_,
                     RegimeChain chain_, ShockModel shock_)
    : beta(beta_), gamma(gamma_), sigma(sigma_), r(r_), omega(std::move(omega_)),
      chain(std::move(chain_)), shock(std::move(shock_)) {
    if (!(beta > 0.0 && beta < 1.0)) throw Error(ErrorCode::DomainError, "beta must lie in (0,1)");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw Error(ErrorCode::DomainError, "gamma must be >= 0");
    if (!(sigma > 0.0 && sigma < 1.0)) throw Error(ErrorCode::DomainError, "sigma must lie in (0,1)");
    if (!(r >= 1.0) || !std::isfinite(r)) throw Error(ErrorCode::DomainError, "r must be >= 1");
    if (omega.size() != chain.n_states()) {
        throw Error(ErrorCode::DomainError, "omega needs one entry per regime");
    }
    for (double w : omega) {
        if (!(w > 0.0 && w < 1.0)) throw Error(ErrorCode::DomainError, "omega entries must lie in (0,1)");
    }
}

ModelSpec ModelSpec::eternal(Regime regime) const {
    if (regime >= n_regimes()) throw Error(ErrorCode::DomainError, "regime out of range");
    return ModelSpec(beta, gamma, sigma, r, {omega[regime]}, RegimeChain(Eigen::MatrixXd::Ones(1, 1)), shock);
}

double production(const ModelSpec& spec, Regime theta, double y, double z) {
    return std::pow(y, spec.omega[theta]) * z;
}

double production_derivative(const ModelSpec& spec, Regime theta, double y, double z) {
    if (!(y > 0.0)) throw Error(ErrorCode::DomainError, "marginal product is unbounded at y=0");
    const double w = spec.omega[theta];
    return w * std::pow(y, w - 1.0) * z;
}

double utility(const ModelSpec& spec, double a) { return std::pow(a, spec.sigma); }

double utility_derivative(const ModelSpec& spec, double a) {
    if (!(a > 0.0)) throw Error(ErrorCode::DomainError, "marginal utility is unbounded at a=0");
    return spec.sigma * std::pow(a, spec.sigma - 1.0);
}

double weight(const ModelSpec& spec, double x, Regime /*theta*/) { return std::pow(spec.r + x, spec.sigma); }

namespace {

// Threshold income above which (r + x^omega zbar)/(r + x) <= 1, maximized over regimes.
double threshold_income(const ModelSpec& spec) {
    const double zbar = spec.shock.mean();
    double x_bar = 0.0;
    for (double w : spec.omega) x_bar = std::max(x_bar, std::pow(zbar, 1.0 / (1.0 - w)));
    return x_bar;
}

}  // namespace

AssumptionReport check_assumptions(const ModelSpec& spec) {
    const double zbar = spec.shock.mean();
    const double recip = spec.shock.reciprocal_mean();
    if (!std::isfinite(zbar)) throw Error(ErrorCode::InfiniteMoment, "shock mean is infinite");
    if (!std::isfinite(recip)) throw Error(ErrorCode::InfiniteMoment, "mean of 1/shock is infinite");

    AssumptionReport report;
    report.d = 1.0;
    report.x_bar = threshold_income(spec);
    report.alpha = std::pow(1.0 + report.x_bar / spec.r, spec.sigma);
    report.alpha_beta = report.alpha * spec.beta;
    double d1 = 0.0;
    double kappa2 = 0.0;
    for (double w : spec.omega) {
        d1 = std::max(d1, recip / (spec.beta * w));
        kappa2 = std::max(kappa2, zbar * (1.0 - w) * std::pow((1.0 + zbar) * w, w / (1.0 - w)));
    }
    report.d1_value = d1;
    report.lambda2 = zbar / (1.0 + zbar);
    report.kappa2 = kappa2;
    report.d3_irreducible = spec.chain.irreducible();
    return report;
}

double minimal_weight_offset(const ModelSpec& spec) {
    const double x_bar = threshold_income(spec);
    // alpha * beta < 1  <=>  r > x_bar / (beta^(-1/sigma) - 1)
    const double bound = x_bar / (std::pow(spec.beta, -1.0 / spec.sigma) - 1.0);
    double r = std::max(1.0, std::floor(bound) + 1.0);
    while (r > 1.0 && std::pow(1.0 + x_bar / (r - 1.0), spec.sigma) * spec.beta < 1.0) r -= 1.0;
    while (std::pow(1.0 + x_bar / r, spec.sigma) * spec.beta >= 1.0) r += 1.0;
    return r;
}

}  // namespace regrowth
