#pragma once

#include <vector>

#include "wgf/types.hpp"

namespace wgf {

/// 1D quadrature rule on [-1,1].
struct Rule1D {
    std::vector<double> nodes;    // ascending
    std::vector<double> weights;  // positive, sum to 2
};

/// Fejer rule of the first kind on n open Chebyshev points; exact for
/// polynomials of degree <= n-1.
Rule1D fejer_rule(int n);

/// Open Chebyshev (first kind) points in ascending order.
std::vector<double> cheb_nodes(int n);

/// Cached dense operators for degree-n Chebyshev grids.
struct ChebOps {
    int n{0};
    Eigen::MatrixXd vals_to_coeffs;  // c = V * f, exact for degree < n
    Eigen::MatrixXd diff;            // f'(nodes) = D * f(nodes)
    std::vector<double> nodes;
    std::vector<double> bary_w;      // barycentric weights

    /// Interpolant value at u in [-1,1] from nodal values (barycentric).
    /// Scalar must be double or std::complex<double>.
    template <typename Scalar>
    Scalar interp(const Scalar* f, double u) const {
        Scalar num = Scalar(0);
        double den = 0.0;
        for (int j = 0; j < n; ++j) {
            const double d = u - nodes[j];
            if (d == 0.0) return f[j];
            const double c = bary_w[j] / d;
            num += c * f[j];
            den += c;
        }
        return num / den;
    }

    /// Row of interpolation weights: value(u) = sum_j row[j] * f[j].
    void interp_weights(double u, double* row) const;
};

/// Shared per-degree cache; safe for concurrent lookups.
const ChebOps& cheb_ops(int n);

/// Chebyshev coefficient differentiation (c of degree n -> c' of degree n).
void cheb_coeff_derivative(const std::vector<double>& c, std::vector<double>& dc);

}  // namespace wgf
