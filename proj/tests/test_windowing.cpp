#include <cmath>

#include "doctest.h"
#include "wgf/windowing.hpp"

using namespace wgf;

TEST_CASE("slow-rise window branches") {
    WindowParams p{10.0, 0.5, 0.0};
    CHECK(eval_w(0.0, p) == 1.0);
    CHECK(eval_w(5.0, p) == 1.0);           // plateau boundary s=0
    CHECK(eval_w(-3.0, p) == 1.0);          // symmetric in d
    CHECK(eval_w(10.0, p) == 0.0);          // support boundary s=1
    CHECK(eval_w(12.0, p) == 0.0);
    // direct substitution at s = 1/2
    const double expected = std::exp(-2.0 * std::exp(-4.0) / 0.25);
    CHECK(eval_w(7.5, p) == doctest::Approx(expected).epsilon(1e-15));
    CHECK(eval_w(7.5, p) == doctest::Approx(0.8637).epsilon(1e-3));
    CHECK(eval_w(-7.5, p) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("window domain errors") {
    WindowParams p{10.0, 0.5, 0.0};
    CHECK_THROWS_AS(eval_w(std::nan(""), p), std::domain_error);
    CHECK_THROWS_AS(eval_w(INFINITY, p), std::domain_error);
    CHECK_THROWS_AS(eval_w(1.0, WindowParams{-1.0, 0.5, 0.0}), std::domain_error);
    CHECK_THROWS_AS(eval_w(1.0, WindowParams{10.0, 1.5, 0.0}), std::domain_error);
    CHECK_THROWS_AS(eval_w(1.0, WindowParams{10.0, 0.5, -1.0}), std::domain_error);
}

TEST_CASE("window bounds, support and monotonicity") {
    WindowParams p{7.0, 0.5, 0.0};
    const int grid = 1000;
    double prev = 1.0;
    for (int i = 0; i <= grid; ++i) {
        const double d = p.alpha * p.A + (p.A - p.alpha * p.A) * i / grid;
        const double w = eval_w(d, p);
        CHECK(w >= 0.0);
        CHECK(w <= 1.0);
        CHECK(w <= prev + 1e-15);  // non-increasing in |d| on [alpha A, A]
        prev = w;
    }
    for (double d : {0.0, 1.0, 3.4999}) CHECK(eval_w(d, p) == 1.0);
    for (double d : {7.0, 7.5, 100.0}) CHECK(eval_w(d, p) == 0.0);
}

TEST_CASE("window boundary derivatives vanish") {
    WindowParams p{10.0, 0.5, 0.0};
    const double h = 1e-4 * p.A;
    auto derivs_small_at = [&](double d0) {
        double f[7];
        for (int i = -3; i <= 3; ++i) f[i + 3] = eval_w(d0 + i * h, p);
        const double d1 = (f[4] - f[2]) / (2 * h);
        const double d2 = (f[4] - 2 * f[3] + f[2]) / (h * h);
        const double d3 = (f[5] - 2 * f[4] + 2 * f[2] - f[1]) / (2 * h * h * h);
        CHECK(std::abs(d1) < 1e-6);
        CHECK(std::abs(d2) < 1e-6);
        CHECK(std::abs(d3) < 1e-6);
    };
    derivs_small_at(p.alpha * p.A);  // s = 0+
    derivs_small_at(p.A);            // s = 1-
}

TEST_CASE("surface window on SIWs") {
    WindowParams p{4.0, 0.5, 0.0};
    SIWDescriptor plus;
    plus.origin = Vec3(0, 0, 1);
    plus.axis = Vec3(0, 0, 1);
    plus.radius = 0.5;
    plus.label = 1;
    SIWDescriptor minus = plus;
    minus.origin = Vec3(0, 0, -1);
    minus.axis = Vec3(0, 0, -1);
    minus.label = 2;
    std::vector<SIWDescriptor> siws{plus, minus};

    // not inside any SIW -> 1 (outside the cross-section radius)
    CHECK(eval_W(Vec3(2.0, 0, 5.0), siws, p) == 1.0);
    // the band between the SIW origin planes is not claimed either
    CHECK(eval_W(Vec3(0.5, 0, 0.0), siws, p) == 1.0);
    // d = 0 at the SIW origin
    CHECK(eval_W(Vec3(0.5, 0, 1.0), siws, p) == 1.0);
    // support boundary d = A
    CHECK(eval_W(Vec3(0.5, 0, 5.0), siws, p) == 0.0);
    CHECK(eval_W(Vec3(0.5, 0, -5.0), siws, p) == 0.0);
    // interior of the rise region
    const double w = eval_W(Vec3(0.5, 0, 4.0), siws, p);
    CHECK(w > 0.0);
    CHECK(w < 1.0);
    CHECK(w == doctest::Approx(eval_w(3.0, p)).epsilon(1e-15));

    CHECK(siw_label_at(Vec3(0.5, 0, 3.0), siws) == 1);
    CHECK(siw_label_at(Vec3(0.5, 0, -3.0), siws) == 2);
    CHECK(!siw_label_at(Vec3(3.0, 0, 3.0), siws).has_value());

    // overlapping SIWs must be rejected
    SIWDescriptor clash = plus;
    clash.origin = Vec3(0, 0, 2);
    clash.label = 3;
    std::vector<SIWDescriptor> bad{plus, clash};
    CHECK_THROWS_AS(eval_W(Vec3(0.5, 0, 3.0), bad, p), ConfigError);
}

TEST_CASE("SIW descriptor validation") {
    SIWDescriptor s;
    s.axis = Vec3(0, 0, 2);
    s.radius = 1.0;
    CHECK_THROWS_AS(s.validate(), std::domain_error);
    s.axis = Vec3(0, 0, 1);
    s.radius = -1.0;
    CHECK_THROWS_AS(s.validate(), std::domain_error);
    s.radius = 1.0;
    CHECK_NOTHROW(s.validate());
}
