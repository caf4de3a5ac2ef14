#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

namespace regrowth {

/// Zero-based regime index. Files and the CLI number regimes from 1.
using Regime = std::size_t;

/**
 * Finite-state, time-homogeneous Markov chain of economic regimes.
 *
 * Rows of the transition matrix are renormalized on construction so they sum
 * to one to machine precision. Reducible chains are accepted; the flag is
 * kept so callers can report the violated irreducibility condition.
 */
class RegimeChain {
public:
    /// Validates a square row-stochastic matrix (row sums within 1e-9, no
    /// negative entries). Throws Error{NonStochasticRow} otherwise.
    explicit RegimeChain(const Eigen::MatrixXd& transition);

    std::size_t n_states() const noexcept { return static_cast<std::size_t>(transition_.rows()); }
    const Eigen::MatrixXd& transition() const noexcept { return transition_; }
    double probability(Regime from, Regime to) const { return transition_(from, to); }
    bool irreducible() const noexcept { return irreducible_; }

    friend bool operator==(const RegimeChain& a, const RegimeChain& b) {
        return a.irreducible_ == b.irreducible_ && a.transition_ == b.transition_;
    }

private:
    Eigen::MatrixXd transition_;
    bool irreducible_ = false;
};

inline constexpr double kRowSumTolerance = 1e-9;

RegimeChain validate_chain(const Eigen::MatrixXd& transition);

/// True when the digraph of positive entries is strongly connected.
bool is_irreducible(const Eigen::MatrixXd& transition);

/// Unique invariant law of an irreducible chain, from the linear system
/// (P^T - I) pi = 0 with one equation replaced by sum(pi) = 1.
/// Throws Error{ReducibleChain} when the chain is reducible.
Eigen::VectorXd stationary_distribution(const RegimeChain& chain);

}  // namespace regrowth
