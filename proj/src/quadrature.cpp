#include "wgf/quadrature.hpp"

#include <cmath>

namespace wgf {

namespace {

template <typename Scalar>
Scalar interp_impl(const Patch& patch, std::span<const Scalar> values, double u, double v) {
    if (values.size() != static_cast<size_t>(patch.nodes()))
        throw std::invalid_argument("cheb_interp: sample count mismatch");
    if (std::abs(u) > 1.0 || std::abs(v) > 1.0)
        throw std::domain_error("cheb_interp: target outside [-1,1]^2");
    const int n = patch.degree;
    const auto& ops = cheb_ops(n);
    // interpolate along v for each u-line, then along u
    std::vector<Scalar> line(n);
    for (int i = 0; i < n; ++i) line[i] = ops.interp(values.data() + i * n, v);
    return ops.interp(line.data(), u);
}

}  // namespace

Complex cheb_interp(const Patch& patch, std::span<const Complex> values, double u, double v) {
    return interp_impl(patch, values, u, v);
}

double cheb_interp(const Patch& patch, std::span<const double> values, double u, double v) {
    return interp_impl(patch, values, u, v);
}

std::vector<Complex> surface_div(const Patch& patch, std::span<const CVec3> a) {
    const int n = patch.degree;
    if (a.size() != static_cast<size_t>(n * n))
        throw std::invalid_argument("surface_div: sample count mismatch");
    const auto& ops = cheb_ops(n);

    // contravariant components scaled by the Jacobian
    std::vector<Complex> Jau(n * n), Jav(n * n), out(n * n);
    for (int k = 0; k < n * n; ++k) {
        const Vec3& xu = patch.xu[k];
        const Vec3& xv = patch.xv[k];
        const double g11 = xu.dot(xu), g12 = xu.dot(xv), g22 = xv.dot(xv);
        const double det = g11 * g22 - g12 * g12;
        const Complex pu = xu.x() * a[k].x() + xu.y() * a[k].y() + xu.z() * a[k].z();
        const Complex pv = xv.x() * a[k].x() + xv.y() * a[k].y() + xv.z() * a[k].z();
        const Complex au = (g22 * pu - g12 * pv) / det;
        const Complex av = (g11 * pv - g12 * pu) / det;
        Jau[k] = patch.jac[k] * au;
        Jav[k] = patch.jac[k] * av;
    }
    // d_u along columns of constant j, d_v along rows of constant i
    for (int k = 0; k < n * n; ++k) out[k] = Complex{0.0, 0.0};
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            Complex acc{0.0, 0.0};
            for (int l = 0; l < n; ++l) acc += ops.diff(i, l) * Jau[l * n + j];
            out[i * n + j] += acc;
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Complex acc{0.0, 0.0};
            for (int l = 0; l < n; ++l) acc += ops.diff(j, l) * Jav[i * n + l];
            out[i * n + j] += acc;
        }
    }
    for (int k = 0; k < n * n; ++k) out[k] /= patch.jac[k];
    return out;
}

namespace {

// Gauss-Legendre nodes/weights on [0,1] (Newton on Legendre polynomials).
void gauss01(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(pi * (i + 0.75) / (n + 0.5));
        double p0, p1, dp;
        for (int it = 0; it < 100; ++it) {
            p0 = 1.0;
            p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[n - 1 - i] = 0.5 * (1.0 + t);
        w[n - 1 - i] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
}

}  // namespace

PolarRule polar_rule(double u0, double v0, const SingularRuleParams& p) {
    PolarRule rule;
    const double cx[4] = {1.0, -1.0, -1.0, 1.0};
    const double cy[4] = {1.0, 1.0, -1.0, -1.0};
    std::vector<double> gx, gw;
    gauss01(p.n_rad, gx, gw);
    for (int tri = 0; tri < 4; ++tri) {
        const double p1x = cx[tri] - u0, p1y = cy[tri] - v0;
        const double p2x = cx[(tri + 1) % 4] - u0, p2y = cy[(tri + 1) % 4] - v0;
        const double cross = p1x * p2y - p1y * p2x;
        if (std::abs(cross) < 1e-14) continue;  // degenerate (center on an edge)
        const double th1 = std::atan2(p1y, p1x);
        double dth = std::atan2(p2y, p2x) - th1;
        while (dth <= 0.0) dth += 2.0 * pi;
        const int n_ang = std::clamp(static_cast<int>(std::ceil(p.n_ang * dth / (0.5 * pi))), 4,
                                     4 * p.n_ang);
        const auto ang = fejer_rule(n_ang);
        const double ex = p2x - p1x, ey = p2y - p1y;
        for (int ia = 0; ia < n_ang; ++ia) {
            const double th = th1 + 0.5 * dth * (ang.nodes[ia] + 1.0);
            const double wth = 0.5 * dth * ang.weights[ia];
            const double dx = std::cos(th), dy = std::sin(th);
            // ray hits the segment corner_tri -> corner_tri+1
            const double rho_max = (p1x * ey - p1y * ex) / (dx * ey - dy * ex);
            for (int ir = 0; ir < p.n_rad; ++ir) {
                // quadratic grading toward the singular point
                const double sigma = gx[ir];
                const double rho = rho_max * sigma * sigma;
                const double drho = 2.0 * rho_max * sigma * gw[ir];
                rule.u.push_back(u0 + rho * dx);
                rule.v.push_back(v0 + rho * dy);
                rule.w.push_back(wth * drho * rho);  // includes the polar rho factor
            }
        }
    }
    return rule;
}

void closest_param(const Patch& patch, const Vec3& target, double& u0, double& v0) {
    const int n = patch.degree;
    const auto nodes = cheb_nodes(n);
    // nearest node as the starting guess
    int best = 0;
    double bd = 1e300;
    for (int k = 0; k < n * n; ++k) {
        const double d = (patch.x[k] - target).squaredNorm();
        if (d < bd) {
            bd = d;
            best = k;
        }
    }
    u0 = nodes[best / n];
    v0 = nodes[best % n];
    for (int it = 0; it < 60; ++it) {
        const auto jet = patch.chart->eval(u0, v0);
        const Vec3 r = jet.x - target;
        Eigen::Matrix2d JtJ;
        JtJ << jet.xu.dot(jet.xu), jet.xu.dot(jet.xv), jet.xu.dot(jet.xv), jet.xv.dot(jet.xv);
        Eigen::Vector2d g(jet.xu.dot(r), jet.xv.dot(r));
        const Eigen::Vector2d step = JtJ.ldlt().solve(g);
        double nu = std::clamp(u0 - step[0], -1.0, 1.0);
        double nv = std::clamp(v0 - step[1], -1.0, 1.0);
        const double moved = std::abs(nu - u0) + std::abs(nv - v0);
        u0 = nu;
        v0 = nv;
        if (moved < 1e-14) break;
    }
}

double patch_distance(const Patch& patch, const Vec3& target) {
    return std::max(0.0, (target - patch.centroid).norm() - patch.bound_radius);
}

Eigen::VectorXcd singular_weights(const Patch& patch, const Vec3& target,
                                  const std::function<Complex(const Vec3&, const Vec3&)>& kernel,
                                  const SingularRuleParams& params) {
    if (patch_distance(patch, target) > params.near_threshold * patch.diameter)
        throw std::logic_error("singular_weights: target beyond the near-field threshold");
    double u0, v0;
    closest_param(patch, target, u0, v0);
    const auto rule = polar_rule(u0, v0, params);
    const int n = patch.degree;
    const auto& ops = cheb_ops(n);
    Eigen::VectorXcd wts = Eigen::VectorXcd::Zero(n * n);
    std::vector<double> lu(n), lv(n);
    for (size_t q = 0; q < rule.u.size(); ++q) {
        const auto jet = patch.chart->eval(rule.u[q], rule.v[q]);
        const double jac = jet.xu.cross(jet.xv).norm();
        const Complex kv = kernel(target, jet.x) * (jac * rule.w[q]);
        ops.interp_weights(rule.u[q], lu.data());
        ops.interp_weights(rule.v[q], lv.data());
        for (int i = 0; i < n; ++i) {
            const Complex kvi = kv * lu[i];
            for (int j = 0; j < n; ++j) wts[i * n + j] += kvi * lv[j];
        }
    }
    return wts;
}

}  // namespace wgf
