#include "wgf/kernels.hpp"

#include <cmath>

namespace wgf {

namespace {

inline Complex phase_over_4piR(Complex k, double R) {
    // exp(ikR)/(4 pi R) with a fast path for lossless materials
    if (k.imag() == 0.0) {
        const double kr = k.real() * R;
        return Complex{std::cos(kr), std::sin(kr)} / (4.0 * pi * R);
    }
    return std::exp(iu * k * R) / (4.0 * pi * R);
}

}  // namespace

Complex green(Complex k, const Vec3& r, const Vec3& rp) {
    const double R = (r - rp).norm();
    if (R == 0.0) throw std::domain_error("green: r == r' singularity");
    return phase_over_4piR(k, R);
}

CVec3 grad_green(Complex k, const Vec3& r, const Vec3& rp) {
    Complex g;
    CVec3 grad;
    green_pair(k, r, rp, g, grad);
    return grad;
}

void green_pair(Complex k, const Vec3& r, const Vec3& rp, Complex& g, CVec3& grad) {
    const Vec3 d = r - rp;
    const double R = d.norm();
    if (R == 0.0) throw std::domain_error("green_pair: r == r' singularity");
    g = phase_over_4piR(k, R);
    const Complex factor = g * (iu * k - 1.0 / R) / R;
    grad = factor * d.cast<Complex>();
}

}  // namespace wgf
