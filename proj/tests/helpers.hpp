#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "regrowth/bellman.hpp"

namespace testing {

inline Eigen::MatrixXd example_transition() {
    Eigen::MatrixXd p(3, 3);
    p << 0.5, 0.4, 0.1, 0.25, 0.5, 0.25, 0.1, 0.4, 0.5;
    return p;
}

inline regrowth::ModelSpec example_spec(double gamma = 1.0) {
    return regrowth::ModelSpec(0.9, gamma, 0.5, 633.0, {0.3, 0.5, 0.9}, regrowth::RegimeChain(example_transition()),
                               regrowth::ShockModel::lognormal(0.0, 1.0));
}

/// One-regime model with a point-mass shock.
inline regrowth::ModelSpec toy_spec(double omega, double z, double gamma, double r = 1.0) {
    return regrowth::ModelSpec(0.9, gamma, 0.5, r, {omega}, regrowth::RegimeChain(Eigen::MatrixXd::Ones(1, 1)),
                               regrowth::ShockModel::point_mass(z));
}

/// Random non-negative, non-decreasing, concave field built from sorted
/// decreasing slopes.
inline regrowth::GriddedFunction random_value_field(const regrowth::IncomeGrid& grid, std::size_t n_regimes,
                                                    std::mt19937_64& gen, double scale = 1.0) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    regrowth::GriddedFunction v(grid, n_regimes);
    for (std::size_t t = 0; t < n_regimes; ++t) {
        std::vector<double> slopes(grid.count() - 1);
        for (auto& s : slopes) s = scale * unit(gen);
        std::sort(slopes.rbegin(), slopes.rend());
        double level = scale * unit(gen);
        v.at(0, t) = level;
        for (std::size_t i = 1; i < grid.count(); ++i) {
            level += slopes[i - 1] * (grid[i] - grid[i - 1]);
            v.at(i, t) = level;
        }
    }
    return v;
}

}  // namespace testing
