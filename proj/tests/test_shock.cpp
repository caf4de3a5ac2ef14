#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "regrowth/error.hpp"
#include "regrowth/shock.hpp"

using namespace regrowth;

namespace {

double lognormal_cdf(double z) { return 0.5 * std::erfc(-std::log(z) / std::sqrt(2.0)); }

double bisect_quantile(double t) {
    double lo = 1e-12, hi = 1e6;
    for (int k = 0; k < 200; ++k) {
        const double mid = std::sqrt(lo * hi);
        (lognormal_cdf(mid) < t ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
}

ErrorCode code_of(const auto& call) {
    try {
        call();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::ConfigError;
}

}  // namespace

TEST_CASE("inverse CDF") {
    const auto ln = ShockModel::lognormal(0.0, 1.0);
    CHECK(ln.inverse_cdf(0.5) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(ln.inverse_cdf(0.975) - bisect_quantile(0.975)) < 1e-8);
    for (double t : {1e-6, 0.01, 0.3, 0.9, 1 - 1e-6}) {
        CHECK(ln.inverse_cdf(t) == doctest::Approx(bisect_quantile(t)).epsilon(1e-9));
    }
    const auto point = ShockModel::point_mass(2.0);
    for (double t : {1e-9, 0.5, 0.999}) CHECK(point.inverse_cdf(t) == 2.0);

    const ShockModel two(DiscreteShock{{3.0, 1.0}, {0.5, 0.5}});
    CHECK(two.inverse_cdf(0.25) == 1.0);
    CHECK(two.inverse_cdf(0.75) == 3.0);

    CHECK(code_of([&] { ln.inverse_cdf(0.0); }) == ErrorCode::DomainError);
    CHECK(code_of([&] { ln.inverse_cdf(1.0); }) == ErrorCode::DomainError);
}

TEST_CASE("inverse CDF is non-decreasing") {
    const auto ln = ShockModel::lognormal(0.3, 0.7);
    double prev = 0.0;
    for (int k = 1; k < 1000; ++k) {
        const double z = ln.inverse_cdf(k / 1000.0);
        CHECK(z >= prev);
        prev = z;
    }
}

TEST_CASE("moments") {
    const auto ln = ShockModel::lognormal(0.2, 0.6);
    CHECK(ln.mean() == doctest::Approx(std::exp(0.2 + 0.18)));
    CHECK(ln.reciprocal_mean() == doctest::Approx(std::exp(-0.2 + 0.18)));
    const ShockModel with_zero(DiscreteShock{{0.0, 2.0}, {0.5, 0.5}});
    CHECK(with_zero.mean() == doctest::Approx(1.0));
    CHECK(std::isinf(with_zero.reciprocal_mean()));
    CHECK_THROWS_AS(ShockModel(DiscreteShock{{1.0, 2.0}, {0.5, 0.6}}), Error);
    CHECK_THROWS_AS(ShockModel(DiscreteShock{{-1.0}, {1.0}}), Error);
}

TEST_CASE("quadrature rule validation") {
    CHECK_NOTHROW(QuadratureRule{18, 1e-6}.validate());
    CHECK_THROWS_AS((QuadratureRule{18, 1.0 / 36.0}.validate()), Error);
    CHECK_THROWS_AS((QuadratureRule{0, 1e-6}.validate()), Error);
    CHECK_THROWS_AS((QuadratureRule{18, 0.0}.validate()), Error);
}

TEST_CASE("quadrature nodes") {
    const auto nodes = quadrature_nodes(ShockModel::lognormal(0, 1), {18, 1e-6});
    REQUIRE(nodes.size() == 19);
    double total = 0.0;
    for (double w : nodes.weight) total += w;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(nodes.weight.front() == doctest::Approx(1.0 / 36.0));
    CHECK(nodes.weight[1] == doctest::Approx(1.0 / 18.0));
    CHECK(nodes.z.front() == doctest::Approx(bisect_quantile(1e-6)).epsilon(1e-8));
    CHECK(nodes.z.back() == doctest::Approx(bisect_quantile(1 - 1e-6)).epsilon(1e-8));
    CHECK(nodes.z[9] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("expect_shock") {
    const QuadratureRule rule;
    const auto one = [](double) { return 1.0; };
    const auto identity = [](double z) { return z; };
    CHECK(std::abs(expect_shock(one, ShockModel::lognormal(0, 1), rule) - 1.0) <= 2e-6);
    CHECK(expect_shock(identity, ShockModel(DiscreteShock{{1.0, 3.0}, {0.5, 0.5}}), rule) == 2.0);

    // The quantile trapezoid converges slowly for the lognormal mean because
    // of the heavy upper tail; the bias at the default n = 18 is large.
    const auto ln = ShockModel::lognormal(0, 1);
    const double fine = expect_shock(identity, ln, {1024, 1e-6});
    CHECK(std::abs(fine - std::exp(0.5)) < 0.04);
    const double coarse = expect_shock(identity, ln, rule);
    CHECK(coarse == doctest::Approx(4.5596).epsilon(1e-4));
    CHECK(std::abs(expect_shock(identity, ln, {4096, 1e-6}) - std::exp(0.5)) < std::abs(fine - std::exp(0.5)));

    CHECK(code_of([&] { expect_shock([](double) { return std::nan(""); }, ln, rule); }) ==
          ErrorCode::NonFiniteIntegrand);
}

TEST_CASE("certainty equivalent examples") {
    const QuadNodes nodes = quadrature_nodes(ShockModel::lognormal(0, 1), QuadratureRule{});
    const std::vector<double> p{0.25, 0.5, 0.25};
    std::vector<double> zeros(3 * nodes.size(), 0.0);
    CHECK(certainty_equivalent(zeros, p, nodes, 1.0) == 0.0);
    CHECK(certainty_equivalent(zeros, p, nodes, 0.0) == 0.0);
    for (double c : {0.5, 3.0, 250.0}) {
        std::vector<double> constant(3 * nodes.size(), c);
        for (double gamma : {0.1, 1.0, 7.0}) {
            CHECK(std::abs(certainty_equivalent(constant, p, nodes, gamma) - c) <= 1e-12 * std::max(1.0, c));
        }
    }

    const QuadNodes two = quadrature_nodes(ShockModel(DiscreteShock{{1.0, 2.0}, {0.5, 0.5}}), QuadratureRule{});
    const std::vector<double> outcomes{0.0, std::log(2.0)};
    const double hand = -std::log(0.5 * 1.0 + 0.5 * 0.5);
    CHECK(certainty_equivalent(outcomes, std::vector<double>{1.0}, two, 1.0) == doctest::Approx(hand).epsilon(1e-14));
    CHECK(hand == doctest::Approx(0.28768).epsilon(1e-5));
}

TEST_CASE("certainty equivalent: callable overload and zero-probability regimes") {
    const QuadNodes nodes = quadrature_nodes(ShockModel::lognormal(0, 1), QuadratureRule{});
    const std::vector<double> p{0.0, 1.0};
    // Regime 0 carries no mass, so its (huge) outcomes must not matter.
    const double rho = certainty_equivalent([](std::size_t r, double z) { return r == 0 ? 1e300 : std::sqrt(z); },
                                            p, 1.0, nodes);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += nodes.weight[i] * std::exp(-std::sqrt(nodes.z[i]));
    CHECK(rho == doctest::Approx(-std::log(sum)).epsilon(1e-13));
}

TEST_CASE("risk-neutral limit is continuous") {
    const QuadNodes nodes = quadrature_nodes(ShockModel::lognormal(0, 1), QuadratureRule{});
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> unit(0.0, 5.0);
    const std::vector<double> p{0.1, 0.4, 0.5};
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> v(3 * nodes.size());
        for (auto& x : v) x = unit(gen);
        CHECK(std::abs(certainty_equivalent(v, p, nodes, 1e-8) - certainty_equivalent(v, p, nodes, 0.0)) <= 1e-6);
    }
}
