#include <cmath>
#include <random>

#include "doctest.h"
#include "wgf/cheb.hpp"

using namespace wgf;

TEST_CASE("fejer rule: weight sum and polynomial exactness") {
    for (int n : {2, 3, 8, 16, 31}) {
        const auto rule = fejer_rule(n);
        double sum = 0.0;
        for (double w : rule.weights) {
            CHECK(w > 0.0);
            sum += w;
        }
        CHECK(sum == doctest::Approx(2.0).epsilon(1e-15));
    }
    for (int n : {3, 8, 16}) {
        const auto rule = fejer_rule(n);
        double ix2 = 0.0;
        for (int j = 0; j < n; ++j) ix2 += rule.weights[j] * rule.nodes[j] * rule.nodes[j];
        CHECK(ix2 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    }
    CHECK_THROWS_AS(fejer_rule(1), std::domain_error);
}

TEST_CASE("fejer rule integrates exp") {
    const auto rule = fejer_rule(16);
    double v = 0.0;
    for (int j = 0; j < 16; ++j) v += rule.weights[j] * std::exp(rule.nodes[j]);
    CHECK(v == doctest::Approx(std::exp(1.0) - std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("fejer rule exact through degree n-1") {
    const int n = 9;
    const auto rule = fejer_rule(n);
    for (int d = 0; d <= n - 1; ++d) {
        double q = 0.0;
        for (int j = 0; j < n; ++j) q += rule.weights[j] * std::pow(rule.nodes[j], d);
        const double exact = (d % 2 == 0) ? 2.0 / (d + 1) : 0.0;
        CHECK(q == doctest::Approx(exact).epsilon(1e-13));
    }
}

TEST_CASE("chebyshev interpolation reproduces smooth functions") {
    const auto& ops = cheb_ops(18);
    std::vector<double> f(18);
    for (int j = 0; j < 18; ++j) f[j] = std::sin(3.0 * ops.nodes[j]) + ops.nodes[j];
    for (double u : {-0.95, -0.3, 0.0, 0.47, 0.99}) {
        CHECK(ops.interp(f.data(), u) ==
              doctest::Approx(std::sin(3.0 * u) + u).epsilon(1e-10));
    }
    // exact reproduction at the nodes themselves
    CHECK(ops.interp(f.data(), ops.nodes[4]) == f[4]);
}

TEST_CASE("interp weights match barycentric evaluation") {
    const auto& ops = cheb_ops(10);
    std::vector<double> f(10);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (auto& v : f) v = dist(rng);
    std::vector<double> row(10);
    for (double u : {-0.77, 0.12, 0.9}) {
        ops.interp_weights(u, row.data());
        double v = 0.0;
        for (int j = 0; j < 10; ++j) v += row[j] * f[j];
        CHECK(v == doctest::Approx(ops.interp(f.data(), u)).epsilon(1e-13));
    }
}

TEST_CASE("spectral differentiation matches analytic derivative") {
    const auto& ops = cheb_ops(16);
    Eigen::VectorXd f(16);
    for (int j = 0; j < 16; ++j) f[j] = std::exp(0.8 * ops.nodes[j]);
    const Eigen::VectorXd df = ops.diff * f;
    for (int j = 0; j < 16; ++j)
        CHECK(df[j] == doctest::Approx(0.8 * std::exp(0.8 * ops.nodes[j])).epsilon(1e-10));
}

TEST_CASE("coefficient transform exact for polynomials") {
    const auto& ops = cheb_ops(8);
    // f = T_3(x): coefficients should be the unit vector e_3
    Eigen::VectorXd f(8);
    for (int j = 0; j < 8; ++j) {
        const double x = ops.nodes[j];
        f[j] = 4.0 * x * x * x - 3.0 * x;
    }
    const Eigen::VectorXd c = ops.vals_to_coeffs * f;
    for (int k = 0; k < 8; ++k)
        CHECK(c[k] == doctest::Approx(k == 3 ? 1.0 : 0.0).epsilon(1e-13));
}
