#pragma once

#include <variant>

#include "wgf/modes.hpp"
#include "wgf/operators.hpp"

namespace wgf {

struct PlaneWave {
    Vec3 direction{Vec3::UnitZ()};
    CVec3 polarization{CVec3::UnitX()};
    Complex amplitude{1.0, 0.0};
};

struct Dipole {
    Vec3 location{Vec3::Zero()};
    CVec3 moment{CVec3::UnitX()};
};

/// Complex-source-point dipole: an exact Maxwell solution that limits to a
/// Gaussian beam of Rayleigh range `waist_b` along `direction`.
struct Beam {
    Vec3 location{Vec3::Zero()};
    Vec3 direction{Vec3::UnitZ()};
    double waist_b{1.0};
    CVec3 moment{CVec3::UnitX()};
};

struct BoundModeExc {
    ModeSolution mode;
    int siw_label{1};
    Complex amplitude{1.0, 0.0};
    /// Axial cut of the incident-trace support, measured along the
    /// propagation direction in the mode frame; infinity keeps the traces on
    /// the whole uniform extension of the incident guide.
    double support_cut{std::numeric_limits<double>::infinity()};
};

using Excitation = std::variant<PlaneWave, Dipole, Beam, BoundModeExc>;

/// Fields of an electric dipole with moment p at x0 radiating in the given
/// material.
EmField dipole_field(const Dipole& dip, const Material& mat, const Vec3& r);
EmField plane_wave_field(const PlaneWave& pw, const Material& mat, const Vec3& r);
EmField beam_field(const Beam& beam, const Material& mat, const Vec3& r);

/// Propagation frame of a bound-mode excitation on the labeled SIW: the mode
/// travels opposite to the SIW axis (toward the structure), phase zero at
/// the SIW origin.
ModeFrame mode_frame_for(const BoundModeExc& exc, const SurfaceMesh& mesh);

/// Incident fields in region `side` per the Type I / Type II bookkeeping.
/// For exterior-launched Type I excitations the interior incident field is
/// zero; a bound mode evaluates through its own region logic.
EmField incident_field(const Excitation& exc, const MaterialPair& mats, Side side,
                       const SurfaceMesh& mesh, const Vec3& r);

/// Plane-wave/beam directions must have a positive projection onto every SIW
/// axis; violation throws ConfigError unless relax is set.
void check_positive_projection(const Excitation& exc, const SurfaceMesh& mesh,
                               bool relax = false);

/// Tangential traces with the Eq.-6 sign conventions (minus n x field on the
/// interior side, plus on the exterior side). Bound-mode traces are nonzero
/// only on the uniform extension of the incident guide, up to the support
/// cut.
SurfaceDensity incident_traces(const Excitation& exc, const SurfaceMesh& mesh,
                               const MaterialPair& mats, Side side);

}  // namespace wgf
