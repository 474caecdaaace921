#pragma once

#include <functional>
#include <span>

#include "wgf/geometry.hpp"

namespace wgf {

/// Spectral interpolation of patch nodal data at (u,v) in [-1,1]^2.
Complex cheb_interp(const Patch& patch, std::span<const Complex> values, double u, double v);
double cheb_interp(const Patch& patch, std::span<const double> values, double u, double v);

/// Surface divergence of a tangential field sampled at the patch nodes:
/// div_G a = (1/J)[d_u(J a^u) + d_v(J a^v)] with contravariant components
/// recovered through the first fundamental form.
std::vector<Complex> surface_div(const Patch& patch, std::span<const CVec3> a);

struct SingularRuleParams {
    int n_ang{12};            // angular Fejer points per unit quarter-turn
    int n_rad{12};            // radial Gauss points per ray
    double near_threshold{1.0};  // in source-patch diameters
};

/// Parameter-space polar quadrature centered at (u0,v0) covering [-1,1]^2;
/// weights include the polar rho factor.
struct PolarRule {
    std::vector<double> u, v, w;
};
PolarRule polar_rule(double u0, double v0, const SingularRuleParams& p);

/// Closest-point parameters of target on the patch (projected Gauss-Newton).
void closest_param(const Patch& patch, const Vec3& target, double& u0, double& v0);

/// Distance proxy used by the near-field classification: Euclidean distance
/// from the target to the patch bounding sphere.
double patch_distance(const Patch& patch, const Vec3& target);

/// Dense node-weight table replacing the smooth rule: applying the returned
/// weights to nodal density samples integrates kernel(target, r') times the
/// spectral density interpolant over the patch. Throws when the target is
/// outside the near-field threshold (the smooth rule applies there).
Eigen::VectorXcd singular_weights(const Patch& patch, const Vec3& target,
                                  const std::function<Complex(const Vec3&, const Vec3&)>& kernel,
                                  const SingularRuleParams& params = {});

}  // namespace wgf
