#include "wgf/cheb.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace wgf {

Rule1D fejer_rule(int n) {
    if (n < 2) throw std::domain_error("fejer_rule: n must be >= 2");
    Rule1D rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int j = 0; j < n; ++j) {
        // theta descending in j gives ascending nodes
        const double theta = (2.0 * (n - 1 - j) + 1.0) * pi / (2.0 * n);
        double sum = 0.0;
        for (int m = 1; m <= n / 2; ++m) sum += std::cos(2.0 * m * theta) / (4.0 * m * m - 1.0);
        rule.nodes[j] = std::cos(theta);
        rule.weights[j] = (2.0 / n) * (1.0 - 2.0 * sum);
    }
    return rule;
}

std::vector<double> cheb_nodes(int n) {
    std::vector<double> x(n);
    for (int j = 0; j < n; ++j)
        x[j] = std::cos((2.0 * (n - 1 - j) + 1.0) * pi / (2.0 * n));
    return x;
}

void cheb_coeff_derivative(const std::vector<double>& c, std::vector<double>& dc) {
    const int n = static_cast<int>(c.size());
    dc.assign(n, 0.0);
    if (n < 2) return;
    dc[n - 1] = 0.0;
    dc[n - 2] = 2.0 * (n - 1) * c[n - 1];
    for (int k = n - 2; k >= 1; --k) dc[k - 1] = dc[k + 1] + 2.0 * k * c[k];
    dc[0] *= 0.5;
}

void ChebOps::interp_weights(double u, double* row) const {
    for (int j = 0; j < n; ++j) {
        const double d = u - nodes[j];
        if (d == 0.0) {
            for (int k = 0; k < n; ++k) row[k] = (k == j) ? 1.0 : 0.0;
            return;
        }
    }
    double den = 0.0;
    for (int j = 0; j < n; ++j) {
        row[j] = bary_w[j] / (u - nodes[j]);
        den += row[j];
    }
    for (int j = 0; j < n; ++j) row[j] /= den;
}

namespace {

ChebOps make_ops(int n) {
    ChebOps ops;
    ops.n = n;
    ops.nodes = cheb_nodes(n);
    ops.bary_w.resize(n);
    for (int j = 0; j < n; ++j) {
        const double theta = (2.0 * (n - 1 - j) + 1.0) * pi / (2.0 * n);
        // (-1)^j sin(theta_j) pattern in descending-node indexing; flip for ascending
        ops.bary_w[j] = ((n - 1 - j) % 2 == 0 ? 1.0 : -1.0) * std::sin(theta);
    }

    // Discrete Chebyshev transform at first-kind points.
    ops.vals_to_coeffs.resize(n, n);
    for (int k = 0; k < n; ++k) {
        const double scale = (k == 0 ? 1.0 : 2.0) / n;
        for (int j = 0; j < n; ++j) {
            const double theta = (2.0 * (n - 1 - j) + 1.0) * pi / (2.0 * n);
            ops.vals_to_coeffs(k, j) = scale * std::cos(k * theta);
        }
    }

    // Nodal differentiation: synthesize derivative coefficients at the nodes.
    Eigen::MatrixXd synth(n, n);  // T_k(x_j)
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            synth(j, k) = std::cos(k * std::acos(std::clamp(ops.nodes[j], -1.0, 1.0)));
    Eigen::MatrixXd dcoeff(n, n);  // coefficient derivative operator
    dcoeff.setZero();
    for (int col = 0; col < n; ++col) {
        std::vector<double> c(n, 0.0), dc;
        c[col] = 1.0;
        cheb_coeff_derivative(c, dc);
        for (int k = 0; k < n; ++k) dcoeff(k, col) = dc[k];
    }
    ops.diff = synth * dcoeff * ops.vals_to_coeffs;
    return ops;
}

}  // namespace

const ChebOps& cheb_ops(int n) {
    static std::map<int, ChebOps> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_ops(n)).first;
    return it->second;
}

}  // namespace wgf
