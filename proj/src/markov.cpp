#include "regrowth/markov.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "regrowth/error.hpp"

namespace regrowth {

namespace {

// Reachability closure from `start` over positive entries (or their transpose).
std::vector<bool> reachable(const Eigen::MatrixXd& m, Eigen::Index start, bool transpose) {
    const Eigen::Index n = m.rows();
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::vector<Eigen::Index> stack{start};
    seen[static_cast<std::size_t>(start)] = true;
    while (!stack.empty()) {
        const Eigen::Index i = stack.back();
        stack.pop_back();
        for (Eigen::Index j = 0; j < n; ++j) {
            const double entry = transpose ? m(j, i) : m(i, j);
            if (entry > 0.0 && !seen[static_cast<std::size_t>(j)]) {
                seen[static_cast<std::size_t>(j)] = true;
                stack.push_back(j);
            }
        }
    }
    return seen;
}

}  // namespace

bool is_irreducible(const Eigen::MatrixXd& transition) {
    if (transition.rows() == 0) return false;
    for (bool transpose : {false, true}) {
        for (bool hit : reachable(transition, 0, transpose)) {
            if (!hit) return false;
        }
    }
    return true;
}

RegimeChain::RegimeChain(const Eigen::MatrixXd& transition) : transition_(transition) {
    if (transition.rows() < 1 || transition.rows() != transition.cols()) {
        throw Error(ErrorCode::NonStochasticRow, "transition matrix must be square with n >= 1");
    }
    for (Eigen::Index i = 0; i < transition_.rows(); ++i) {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < transition_.cols(); ++j) {
            const double p = transition_(i, j);
            if (!std::isfinite(p) || p < 0.0 || p > 1.0 + kRowSumTolerance) {
                throw Error(ErrorCode::NonStochasticRow,
                            "row " + std::to_string(i + 1) + " has an entry outside [0,1]");
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > kRowSumTolerance) {
            throw Error(ErrorCode::NonStochasticRow,
                        "row " + std::to_string(i + 1) + " sums to " + std::to_string(sum));
        }
        transition_.row(i) /= sum;
    }
    irreducible_ = is_irreducible(transition_);
}

RegimeChain validate_chain(const Eigen::MatrixXd& transition) { return RegimeChain(transition); }

Eigen::VectorXd stationary_distribution(const RegimeChain& chain) {
    if (!chain.irreducible()) {
        throw Error(ErrorCode::ReducibleChain, "stationary distribution is not unique");
    }
    const Eigen::Index n = chain.transition().rows();
    Eigen::MatrixXd system = chain.transition().transpose() - Eigen::MatrixXd::Identity(n, n);
    system.row(n - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;
    Eigen::VectorXd pi = system.fullPivLu().solve(rhs);
    // Round-off can leave tiny negatives on near-zero components.
    pi = pi.cwiseMax(0.0);
    return pi / pi.sum();
}

}  // namespace regrowth
