#pragma once

#include <string>
#include <vector>

#include "wgf/types.hpp"

namespace wgf {

struct BesselValue {
    double value;
    double derivative;
};

/// J_n(x) and J_n'(x) by backward (Miller) recurrence, x in (0, 50].
BesselValue bessel_j(int order, double x);

/// K_n(x) and K_n'(x); modified Bessel of the second kind.
BesselValue bessel_k(int order, double x);

/// One bound mode of the circular step-index waveguide, azimuthal dependence
/// exp(i m_az phi), axial dependence exp(i kz z).
struct ModeSolution {
    int m_az{1};
    double kz{0.0};
    double u{0.0};  // core transverse parameter a*sqrt(ki^2 - kz^2)
    double w{0.0};  // cladding decay parameter a*sqrt(kz^2 - ke^2)
    double residual{0.0};
    double core_radius{0.0};
    double omega{0.0};
    MaterialPair mats;
    Eigen::Vector4cd amps{Eigen::Vector4cd::Zero()};  // core Ez, core Hz, clad Ez, clad Hz
};

/// Evaluation frame: the mode propagates along `prop` with transverse axes
/// e1, e2 (e1 x e2 = prop); phase is zero at the origin.
struct ModeFrame {
    Vec3 origin{Vec3::Zero()};
    Vec3 prop{Vec3::UnitZ()};
    Vec3 e1{Vec3::UnitX()};
    Vec3 e2{Vec3::UnitY()};

    static ModeFrame along(const Vec3& origin, const Vec3& prop);
};

struct EmField {
    CVec3 E{CVec3::Zero()};
    CVec3 H{CVec3::Zero()};
};

/// All bound modes with azimuthal order up to m_az_max, sorted by descending
/// kz. Returns an empty list when the contrast cannot guide.
std::vector<ModeSolution> solve_modes(const Material& core, const Material& clad, double radius,
                                      double omega, int m_az_max);

/// Fields of the mode at r, in the given frame (default frame: +z axis
/// through the origin). Unit axial power normalization.
EmField mode_fields(const ModeSolution& mode, const Vec3& r);
EmField mode_fields(const ModeSolution& mode, const ModeFrame& frame, const Vec3& r);

/// Axial power by independent radial quadrature (should be 1 after
/// normalization).
double mode_axial_power(const ModeSolution& mode);

/// Dispersion function whose roots are the bound modes, parametrized by
/// kz in (ke, ki); exposed for diagnostics and tests.
double dispersion_residual(const ModeSolution& mode);

/// CSV columns: m_az, kz_over_k0, u, w, residual.
void write_modes_csv(const std::vector<ModeSolution>& modes, const std::string& path);

}  // namespace wgf
