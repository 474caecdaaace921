#include <cmath>
#include <random>

#include "doctest.h"
#include "wgf/kernels.hpp"
#include "wgf/quadrature.hpp"

using namespace wgf;

namespace {

// potential of a uniform unit square at an interior point: four corner
// rectangles, each int dx dy / sqrt(x^2+y^2) = a asinh(b/a) + b asinh(a/b)
double square_potential(double px, double py) {
    auto corner = [](double a, double b) {
        return a * std::asinh(b / a) + b * std::asinh(a / b);
    };
    double total = 0.0;
    for (double a : {px, 1.0 - px})
        for (double b : {py, 1.0 - py}) total += corner(a, b);
    return total / (4.0 * pi);
}

Complex laplace_kernel(const Vec3& r, const Vec3& rp) { return green(0.0, r, rp); }

// single layer of a nodal density over the whole mesh: smooth far rule plus
// polar tables near
Complex mesh_single_layer(const SurfaceMesh& mesh, const std::vector<Complex>& density,
                          const Vec3& target,
                          const std::function<Complex(const Vec3&, const Vec3&)>& kernel,
                          const SingularRuleParams& params = {}) {
    Complex total{0.0, 0.0};
    for (size_t p = 0; p < mesh.patches.size(); ++p) {
        const auto& patch = mesh.patches[p];
        const size_t base = mesh.patch_offset[p];
        if (patch_distance(patch, target) <= params.near_threshold * patch.diameter) {
            const auto w = singular_weights(patch, target, kernel, params);
            for (int s = 0; s < patch.nodes(); ++s) total += w[s] * density[base + s];
        } else {
            for (int s = 0; s < patch.nodes(); ++s)
                total += kernel(target, patch.x[s]) * patch.weight[s] * density[base + s];
        }
    }
    return total;
}

}  // namespace

TEST_CASE("planar oracle: single layer over the flat unit patch") {
    const auto mesh = build_plane_rect(1.0, 1.0, 12);
    const auto& patch = mesh.patches[0];
    std::vector<Complex> one(patch.nodes(), Complex{1.0, 0.0});

    for (auto [px, py] : {std::pair{0.5, 0.5}, std::pair{0.3, 0.7}, std::pair{0.05, 0.45}}) {
        const Vec3 target(px, py, 0.0);
        const auto w = singular_weights(patch, target, laplace_kernel);
        Complex val{0.0, 0.0};
        for (int s = 0; s < patch.nodes(); ++s) val += w[s];
        CHECK(std::abs(val - square_potential(px, py)) < 1e-10);
    }
}

TEST_CASE("near-singular: target just off the patch") {
    const auto mesh = build_plane_rect(1.0, 1.0, 12);
    const auto& patch = mesh.patches[0];
    // off-surface analytic value via the potential of the square at height h:
    // compare against a finely subdivided smooth quadrature oracle instead
    const Vec3 target(0.4, 0.55, 0.04);
    const auto w = singular_weights(patch, target, laplace_kernel);
    Complex val{0.0, 0.0};
    for (int s = 0; s < patch.nodes(); ++s) val += w[s];

    // brute-force midpoint oracle; its own error is O(h^2/dist)
    double oracle = 0.0;
    const int M = 4000;
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) {
            const Vec3 rp((i + 0.5) / M, (j + 0.5) / M, 0.0);
            oracle += 1.0 / (4.0 * pi * (target - rp).norm()) / (M * (double)M);
        }
    CHECK(std::abs(val.real() - oracle) < 5e-7);
}

TEST_CASE("smooth and singular rules agree in the far field") {
    const auto mesh = build_plane_rect(1.0, 1.0, 12);
    const auto& patch = mesh.patches[0];
    SingularRuleParams wide;
    wide.near_threshold = 5.0;
    const Vec3 target(0.5, 0.5, 2.0 * patch.diameter);
    const auto w = singular_weights(patch, target, laplace_kernel, wide);
    Complex singular{0.0, 0.0}, smooth{0.0, 0.0};
    for (int s = 0; s < patch.nodes(); ++s) {
        singular += w[s];
        smooth += laplace_kernel(target, patch.x[s]) * patch.weight[s];
    }
    CHECK(std::abs(singular - smooth) < 1e-10);
}

TEST_CASE("threshold contract is enforced") {
    const auto mesh = build_plane_rect(1.0, 1.0, 8);
    const Vec3 target(0.5, 0.5, 4.0);
    CHECK_THROWS_AS(singular_weights(mesh.patches[0], target, laplace_kernel), std::logic_error);
}

TEST_CASE("sphere single layer equals the radius") {
    const auto mesh = build_sphere(1.0, 1, 12);
    std::vector<Complex> one(mesh.num_nodes(), Complex{1.0, 0.0});
    // targets: a few surface nodes across patches
    for (size_t g : {size_t(0), size_t(77), size_t(300), size_t(501), size_t(863)}) {
        const Complex val = mesh_single_layer(mesh, one, mesh.node_x(g), laplace_kernel);
        CHECK(std::abs(val - 1.0) < 1e-8);
    }
}

TEST_CASE("rule convergence: doubling orders is stable") {
    const auto mesh = build_sphere(1.0, 1, 12);
    std::vector<Complex> one(mesh.num_nodes(), Complex{1.0, 0.0});
    SingularRuleParams fine;
    fine.n_ang = 24;
    fine.n_rad = 24;
    const Vec3 target = mesh.node_x(100);
    const Complex v0 = mesh_single_layer(mesh, one, target, laplace_kernel);
    const Complex v1 = mesh_single_layer(mesh, one, target, laplace_kernel, fine);
    CHECK(std::abs(v0 - v1) < 1e-9);
}

TEST_CASE("gauss jump identity on sphere and cylinder") {
    // sum over components of int (grad' G0)_c n_c(r') dsigma = +1/2 on the
    // surface
    auto gauss_at = [](const SurfaceMesh& mesh, size_t g) {
        Complex total{0.0, 0.0};
        for (int c = 0; c < 3; ++c) {
            std::vector<Complex> nc(mesh.num_nodes());
            for (size_t s = 0; s < mesh.num_nodes(); ++s) nc[s] = mesh.node_normal(s)[c];
            auto kernel = [c](const Vec3& r, const Vec3& rp) {
                const Vec3 d = r - rp;
                const double R = d.norm();
                return Complex{d[c] / (4.0 * pi * R * R * R), 0.0};
            };
            total += mesh_single_layer(mesh, nc, mesh.node_x(g), kernel);
        }
        return total;
    };
    const auto sphere = build_sphere(1.0, 1, 12);
    for (size_t g : {size_t(10), size_t(400)})
        CHECK(std::abs(gauss_at(sphere, g) - 0.5) < 1e-8);

    WindowParams w{0.8, 0.5, 0.0};
    const auto cyl = build_circular_guide(0.4, 0.0, 1.6, SiwEnd::None, 3, 4, 12, w);
    for (size_t g : {size_t(5), size_t(700)})
        CHECK(std::abs(gauss_at(cyl, g) - 0.5) < 1e-8);
}

TEST_CASE("patch interpolation: smooth reproduction and domain check") {
    const auto mesh = build_sphere(1.0, 1, 12);
    const auto& patch = mesh.patches[2];
    std::vector<Complex> f(patch.nodes());
    const auto nodes = cheb_nodes(12);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j)
            f[i * 12 + j] = std::exp(0.3 * nodes[i]) * std::cos(1.7 * nodes[j]);
    CHECK(std::abs(cheb_interp(patch, f, 0.21, -0.57) -
                   std::exp(0.3 * 0.21) * std::cos(1.7 * -0.57)) < 1e-10);
    CHECK_THROWS_AS(cheb_interp(patch, f, 1.2, 0.0), std::domain_error);
}

TEST_CASE("surface divergence: rotation field on the sphere") {
    const auto mesh = build_sphere(1.0, 1, 12);
    for (const auto& patch : mesh.patches) {
        std::vector<CVec3> a(patch.nodes());
        for (int k = 0; k < patch.nodes(); ++k)
            a[k] = Vec3::UnitZ().cross(patch.x[k]).cast<Complex>();
        const auto div = surface_div(patch, a);
        for (const auto& d : div) CHECK(std::abs(d) < 1e-10);
    }
}

TEST_CASE("surface divergence: constant gradient field on a plane") {
    const auto mesh = build_plane_rect(2.0, 1.0, 10);
    const auto& patch = mesh.patches[0];
    std::vector<CVec3> a(patch.nodes(), CVec3::UnitX());  // grad of f = x
    const auto div = surface_div(patch, a);
    for (const auto& d : div) CHECK(std::abs(d) < 1e-12);
}

TEST_CASE("surface divergence matches a finite-difference oracle") {
    const auto mesh = build_sphere(1.0, 1, 12);
    const auto& patch = mesh.patches[4];
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    double cu[7], cv[7];
    for (int i = 0; i < 7; ++i) {
        cu[i] = dist(rng);
        cv[i] = dist(rng);
    }
    // degree-6 polynomial contravariant components
    auto alpha = [&](double u, double v) {
        return cu[0] + cu[1] * u + cu[2] * v + cu[3] * u * u * v + cu[4] * v * v * v +
               cu[5] * u * u * u * v * v + cu[6] * std::pow(u, 3) * std::pow(v, 3);
    };
    auto beta = [&](double u, double v) {
        return cv[0] + cv[1] * v + cv[2] * u + cv[3] * u * v * v + cv[4] * u * u * u +
               cv[5] * u * u * v * v * v + cv[6] * std::pow(u, 2) * std::pow(v, 4);
    };
    auto J_of = [&](double u, double v) {
        const auto jet = patch.chart->eval(u, v);
        return jet.xu.cross(jet.xv).norm();
    };

    std::vector<CVec3> a(patch.nodes());
    const auto nodes = cheb_nodes(12);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) {
            const int k = i * 12 + j;
            a[k] = (alpha(nodes[i], nodes[j]) * patch.xu[k] +
                    beta(nodes[i], nodes[j]) * patch.xv[k])
                       .cast<Complex>();
        }
    const auto div = surface_div(patch, a);

    const double h = 1e-3;
    auto fd4 = [&](auto&& f, double x) {
        return (f(x - 2 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2 * h)) / (12.0 * h);
    };
    for (int i = 2; i < 10; ++i) {
        for (int j = 2; j < 10; ++j) {
            const double u = nodes[i], v = nodes[j];
            const double du =
                fd4([&](double t) { return J_of(t, v) * alpha(t, v); }, u);
            const double dv =
                fd4([&](double t) { return J_of(u, t) * beta(u, t); }, v);
            const double expected = (du + dv) / J_of(u, v);
            CHECK(std::abs(div[i * 12 + j].real() - expected) < 1e-8);
        }
    }
}
