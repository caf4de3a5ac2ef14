#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "regrowth/grid.hpp"
#include "regrowth/model.hpp"
#include "regrowth/shock.hpp"

namespace regrowth {

/// How the supremum over investment y in [0, x] is approximated.
struct InvestmentSearch {
    /// Candidates {0, x/(y_count-1), ..., x}; ties go to the smallest y.
    std::size_t y_count = 30;
    /// Golden-section polish of the best candidate inside its neighbouring
    /// candidates. Off by default.
    bool refine = false;
};

/// Risk-adjusted continuation value of investing y in regime theta:
/// the certainty equivalent of v(f(theta, y, z), theta') over (theta', z).
double continuation_value(const GriddedFunction& v, const ModelSpec& spec, Regime theta, double y,
                          const QuadNodes& nodes);

struct BellmanStep {
    GriddedFunction value;
    GriddedFunction policy;
};

/**
 * One application of the risk-sensitive Bellman operator,
 *
 *   (Lv)(x, theta) = max_y  u(x - y) + beta * continuation_value(v, theta, y),
 *
 * at every grid node and regime; `policy` holds the maximizing y.
 *
 * A finite candidate set makes the nodal maximum slightly non-concave where
 * the argmax jumps between candidates. Each regime column of the result is
 * therefore lifted to its least concave majorant, which lies between the
 * candidate maximum and the exact supremum.
 *
 * Throws Error{InvalidValueTag} when v is not a non-negative, non-decreasing,
 * concave field (tolerance kValueTagTolerance on each regime column).
 */
BellmanStep apply_bellman_operator(const GriddedFunction& v, const ModelSpec& spec,
                                   const InvestmentSearch& search, const QuadratureRule& rule);

struct StopRule {
    int max_iters = 1000;
    double tol_w = 1e-10;
};

struct SolveReport {
    int iterations = 0;
    std::vector<double> sup_w_deltas;  ///< ||V_{k+1} - V_k||_w per sweep
    std::vector<double> ratios;        ///< delta_k / delta_{k-1}, from the second sweep on
    bool converged = false;
};

struct Solution {
    GriddedFunction value;
    GriddedFunction policy;
    SolveReport report;
};

/// Value iteration from V_0 = 0 until the w-norm step falls to tol_w or
/// max_iters sweeps have run. Not converging is reported, not thrown.
Solution solve_value_function(const ModelSpec& spec, const IncomeGrid& grid, const InvestmentSearch& search,
                              const QuadratureRule& rule, const StopRule& stop);

/**
 * T-stage performance J_T of the stationary policy phi:
 * J_1 = u(x - phi), J_{T+1} = u(x - phi) + beta * certainty equivalent of J_T(f(theta, phi, z), theta').
 * Throws Error{InfeasiblePolicy} if phi leaves [0, x] at some node.
 */
GriddedFunction evaluate_policy(const GriddedFunction& phi, const ModelSpec& spec, const QuadratureRule& rule,
                                int horizon);

}  // namespace regrowth
