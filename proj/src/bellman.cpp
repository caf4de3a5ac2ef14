#include "regrowth/bellman.hpp"

#include <cmath>
#include <string>

#include "regrowth/error.hpp"
#include "regrowth/parallel.hpp"

namespace regrowth {

namespace {

// Evaluates every regime column of `v` at incomes scale * z_i, regime-major.
void fill_outcomes(const GriddedFunction& v, double scale, const QuadNodes& nodes, std::vector<double>& out) {
    const std::size_t m = nodes.size();
    const std::size_t n_reg = v.n_regimes();
    out.resize(n_reg * m);
    for (std::size_t i = 0; i < m; ++i) {
        const double x = scale * nodes.z[i];
        const std::size_t j = v.grid.segment(x);
        const double x0 = v.grid[j];
        const double x1 = v.grid[j + 1];
        const double frac = (x - x0) / (x1 - x0);
        for (std::size_t r = 0; r < n_reg; ++r) {
            const double v0 = v.at(j, r);
            const double v1 = v.at(j + 1, r);
            out[r * m + i] = x == x1 ? v1 : v0 + (v1 - v0) * frac;
        }
    }
}

class NodeObjective {
public:
    NodeObjective(const GriddedFunction& v, const ModelSpec& spec, const QuadNodes& nodes, Regime theta)
        : v_(v), spec_(spec), nodes_(nodes), theta_(theta),
          p_row_(static_cast<std::size_t>(spec.chain.n_states())) {
        for (std::size_t r = 0; r < p_row_.size(); ++r) p_row_[r] = spec.chain.probability(theta, r);
    }

    double continuation(double y) {
        fill_outcomes(v_, std::pow(y, spec_.omega[theta_]), nodes_, outcomes_);
        return certainty_equivalent(outcomes_, p_row_, nodes_, spec_.gamma);
    }

    double operator()(double x, double y) { return utility(spec_, x - y) + spec_.beta * continuation(y); }

private:
    const GriddedFunction& v_;
    const ModelSpec& spec_;
    const QuadNodes& nodes_;
    Regime theta_;
    std::vector<double> p_row_;
    std::vector<double> outcomes_;
};

struct Argmax {
    double y = 0.0;
    double value = 0.0;
};

Argmax maximize(NodeObjective& objective, double x, const InvestmentSearch& search) {
    const std::size_t n = search.y_count;
    Argmax best{0.0, objective(x, 0.0)};
    std::size_t best_k = 0;
    for (std::size_t k = 1; k < n; ++k) {
        const double y = k + 1 == n ? x : x * static_cast<double>(k) / static_cast<double>(n - 1);
        const double value = objective(x, y);
        if (value > best.value) {
            best = {y, value};
            best_k = k;
        }
    }
    if (!search.refine || x <= 0.0) return best;

    // Golden-section search on the bracket around the best candidate; the
    // objective is concave in y so the bracket contains the continuous maximum.
    const double step = x / static_cast<double>(n - 1);
    double lo = best_k == 0 ? 0.0 : step * static_cast<double>(best_k - 1);
    double hi = best_k + 1 >= n ? x : std::min(x, step * static_cast<double>(best_k + 1));
    constexpr double kInvPhi = 0.6180339887498949;
    double a = hi - kInvPhi * (hi - lo);
    double b = lo + kInvPhi * (hi - lo);
    double fa = objective(x, a);
    double fb = objective(x, b);
    for (int it = 0; it < 60 && hi - lo > 1e-12 * std::max(1.0, x); ++it) {
        if (fa < fb) {
            lo = a;
            a = b;
            fa = fb;
            b = lo + kInvPhi * (hi - lo);
            fb = objective(x, b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - kInvPhi * (hi - lo);
            fa = objective(x, a);
        }
    }
    const double y = 0.5 * (lo + hi);
    const double value = objective(x, y);
    if (value > best.value) best = {y, value};
    return best;
}

}  // namespace

double continuation_value(const GriddedFunction& v, const ModelSpec& spec, Regime theta, double y,
                          const QuadNodes& nodes) {
    NodeObjective objective(v, spec, nodes, theta);
    return objective.continuation(y);
}

namespace {

BellmanStep sweep(const GriddedFunction& v, const ModelSpec& spec, const InvestmentSearch& search,
                  const QuadratureRule& rule) {
    if (search.y_count < 2) throw Error(ErrorCode::DomainError, "y_count must be at least 2");
    if (v.n_regimes() != spec.n_regimes()) throw Error(ErrorCode::GridMismatch, "regime count mismatch");
    const QuadNodes nodes = quadrature_nodes(spec.shock, rule);
    BellmanStep step{GriddedFunction(v.grid, v.n_regimes()), GriddedFunction(v.grid, v.n_regimes())};
    const std::size_t n_x = v.grid.count();
    parallel_for(n_x * v.n_regimes(), [&](std::size_t task) {
        const Regime theta = task / n_x;
        const std::size_t i = task % n_x;
        NodeObjective objective(v, spec, nodes, theta);
        const Argmax best = maximize(objective, v.grid[i], search);
        step.value.at(i, theta) = best.value;
        step.policy.at(i, theta) = best.y;
    });
    return step;
}

}  // namespace

BellmanStep apply_bellman_operator(const GriddedFunction& v, const ModelSpec& spec,
                                   const InvestmentSearch& search, const QuadratureRule& rule) {
    if (const std::string why = value_field_violation(v); !why.empty()) {
        throw Error(ErrorCode::InvalidValueTag, why);
    }
    BellmanStep step = sweep(v, spec, search, rule);
    make_concave(step.value);
    return step;
}

Solution solve_value_function(const ModelSpec& spec, const IncomeGrid& grid, const InvestmentSearch& search,
                              const QuadratureRule& rule, const StopRule& stop) {
    if (stop.max_iters < 1) throw Error(ErrorCode::DomainError, "max_iters must be at least 1");
    GriddedFunction value(grid, spec.n_regimes());
    GriddedFunction policy(grid, spec.n_regimes());
    SolveReport report;
    for (int k = 0; k < stop.max_iters; ++k) {
        BellmanStep next = apply_bellman_operator(value, spec, search, rule);
        const double delta = w_norm_distance(next.value, value, spec);
        if (!report.sup_w_deltas.empty() && report.sup_w_deltas.back() > 0.0) {
            report.ratios.push_back(delta / report.sup_w_deltas.back());
        }
        report.sup_w_deltas.push_back(delta);
        report.iterations = k + 1;
        value = std::move(next.value);
        policy = std::move(next.policy);
        if (delta <= stop.tol_w) {
            report.converged = true;
            break;
        }
    }
    return {std::move(value), std::move(policy), std::move(report)};
}

GriddedFunction evaluate_policy(const GriddedFunction& phi, const ModelSpec& spec, const QuadratureRule& rule,
                                int horizon) {
    if (horizon < 1) throw Error(ErrorCode::DomainError, "horizon must be at least 1");
    if (phi.n_regimes() != spec.n_regimes()) throw Error(ErrorCode::GridMismatch, "regime count mismatch");
    const auto& grid = phi.grid;
    for (std::size_t t = 0; t < phi.n_regimes(); ++t) {
        for (std::size_t i = 0; i < grid.count(); ++i) {
            const double y = phi.at(i, t);
            if (!(y >= 0.0 && y <= grid[i])) {
                throw Error(ErrorCode::InfeasiblePolicy,
                            "policy leaves [0, x] at x=" + std::to_string(grid[i]) + " regime " +
                                std::to_string(t + 1));
            }
        }
    }
    const QuadNodes nodes = quadrature_nodes(spec.shock, rule);
    GriddedFunction current(grid, phi.n_regimes());
    for (std::size_t t = 0; t < phi.n_regimes(); ++t) {
        for (std::size_t i = 0; i < grid.count(); ++i) current.at(i, t) = utility(spec, grid[i] - phi.at(i, t));
    }
    for (int stage = 1; stage < horizon; ++stage) {
        GriddedFunction next(grid, phi.n_regimes());
        parallel_for(grid.count() * phi.n_regimes(), [&](std::size_t task) {
            const Regime theta = task / grid.count();
            const std::size_t i = task % grid.count();
            NodeObjective objective(current, spec, nodes, theta);
            next.at(i, theta) = objective(grid[i], phi.at(i, theta));
        });
        current = std::move(next);
    }
    return current;
}

}  // namespace regrowth
