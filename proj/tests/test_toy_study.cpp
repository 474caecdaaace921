#include <cmath>

#include "doctest.h"
#include "wgf/toy_study.hpp"

using namespace wgf;

namespace {
ToyParams params(double kz_frac) {
    ToyParams p;
    p.k0 = 2.0 * pi;
    p.kz = kz_frac * p.k0;
    p.alpha = 0.5;
    return p;
}
}  // namespace

TEST_CASE("reference value for kz = 0") {
    // I = sqrt(1/2) exp(-i pi/4) - finite part; check against a long
    // brute-force windowed evaluation instead of the closed form itself.
    const Complex ref = toy_reference(2.0 * pi, 0.0);
    ToyParams p = params(0.0);
    const Complex brute = toy_windowed(2000.0, p);
    CHECK(std::abs(ref - brute) < 1e-9);
}

TEST_CASE("reference magnitude decays with kappa (Riemann-Lebesgue)") {
    double prev = std::abs(toy_reference(2.0 * pi, 0.0));
    for (double k0 : {4.0 * pi, 16.0 * pi, 64.0 * pi, 256.0 * pi}) {
        const double cur = std::abs(toy_reference(k0, 0.0));
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK(prev < 1e-2);
}

TEST_CASE("reference rejects vanishing oscillation") {
    CHECK_THROWS_AS(toy_reference(2.0 * pi, 2.0 * pi), std::domain_error);
    CHECK_THROWS_AS(toy_reference(2.0 * pi, 3.0 * pi), std::domain_error);
}

TEST_CASE("windowed evaluation cross-checks the reference at large A") {
    ToyParams p = params(0.1);
    const Complex ref = toy_reference(p.k0, p.kz);
    CHECK(std::abs(toy_windowed(1000.0, p) - ref) < 1e-9);
}

TEST_CASE("truncated integral basics") {
    ToyParams p = params(0.1);
    CHECK(std::abs(toy_truncated(1.0, p)) == 0.0);
    CHECK_THROWS_AS(toy_truncated(0.5, p), std::domain_error);
    // degenerate window equals plain truncation
    for (double A : {7.0, 31.0, 120.0}) {
        CHECK(std::abs(toy_windowed(A, p, true) - toy_truncated(A, p)) < 1e-13);
    }
}

TEST_CASE("windowing beats truncation at moderate window sizes") {
    ToyParams p = params(0.1);
    const Complex ref = toy_reference(p.k0, p.kz);
    const double err_tr = std::abs(toy_truncated(100.0, p) - ref);
    const double err_w = std::abs(toy_windowed(100.0, p) - ref);
    CHECK(err_tr / err_w > 1e3);
}

TEST_CASE("convergence study: rates and normalized collapse") {
    ToyParams p = params(0.1);
    for (double A = 10.0; A <= 10240.0; A *= 2.0) p.A_values.push_back(A);
    const auto rows = convergence_study(p);
    REQUIRE(rows.size() == p.A_values.size());

    // truncation decays like A^(-1/2)
    const double tr_order = fitted_order(rows, 100.0, 10000.0, false);
    CHECK(tr_order == doctest::Approx(0.5).epsilon(0.2));

    // windowed error no worse than truncated once a couple of net
    // wavelengths fit in the window
    for (const auto& r : rows)
        if (r.normA >= 2.0) CHECK(r.err_w <= r.err_tr * (1.0 + 1e-12));

    // windowed local order at least 3 where the error is away from the
    // quadrature floor
    for (const auto& r : rows)
        if (r.normA >= 20.0 && r.err_w > 1e-10 && std::isfinite(r.order_w))
            CHECK(r.order_w >= 3.0);
}

TEST_CASE("normalized-abscissa collapse across kz") {
    // windowed errors at matched A*|k0-kz|/(2 pi) agree within one order of
    // magnitude between kz = 0.1 k0 and kz = 0.9 k0
    ToyParams slow = params(0.9);
    ToyParams fast = params(0.1);
    const Complex ref_slow = toy_reference(slow.k0, slow.kz);
    const Complex ref_fast = toy_reference(fast.k0, fast.kz);
    for (double normA : {6.0, 10.0}) {
        const double A_slow = normA * 2.0 * pi / (slow.k0 - slow.kz);
        const double A_fast = normA * 2.0 * pi / (fast.k0 - fast.kz);
        const double e_slow = std::abs(toy_windowed(A_slow, slow) - ref_slow);
        const double e_fast = std::abs(toy_windowed(A_fast, fast) - ref_fast);
        CHECK(e_slow / e_fast < 10.0);
        CHECK(e_fast / e_slow < 10.0);
    }
}

TEST_CASE("study validates input") {
    ToyParams p = params(0.1);
    p.A_values = {10.0, 20.0, 15.0, 40.0};
    CHECK_THROWS_AS(convergence_study(p), std::domain_error);
    p.A_values = {10.0, 20.0};
    CHECK_THROWS_AS(convergence_study(p), std::domain_error);
}
