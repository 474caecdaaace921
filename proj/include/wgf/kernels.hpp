#pragma once

#include "wgf/types.hpp"

namespace wgf {

/// Free-space Helmholtz Green function exp(ik|r-r'|)/(4 pi |r-r'|).
Complex green(Complex k, const Vec3& r, const Vec3& rp);

/// Gradient of the Green function with respect to the target r.
CVec3 grad_green(Complex k, const Vec3& r, const Vec3& rp);

/// Both at once, sharing the exponential.
void green_pair(Complex k, const Vec3& r, const Vec3& rp, Complex& g, CVec3& grad);

}  // namespace wgf
