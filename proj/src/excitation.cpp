#include "wgf/excitation.hpp"

#include <cmath>

namespace wgf {

namespace {

// shared dipole kernel over a possibly complex source offset
EmField dipole_core(const Eigen::Vector3cd& d, const CVec3& p, const Material& mat) {
    const Complex R2 = d.x() * d.x() + d.y() * d.y() + d.z() * d.z();
    Complex R = std::sqrt(R2);
    if (R.real() < 0.0) R = -R;
    if (std::abs(R) == 0.0) throw std::domain_error("dipole_field: evaluation at the source");
    const Complex k = mat.k;
    const Complex G = std::exp(iu * k * R) / (4.0 * pi * R);
    const Eigen::Vector3cd rhat = d / R;
    const Complex g1 = (iu * k - 1.0 / R) * G;
    const Complex g1p = G * (1.0 / R2 + (iu * k - 1.0 / R) * (iu * k - 1.0 / R));
    // plain bilinear product (Eigen's dot would conjugate the left factor)
    const Complex rdotp = rhat.x() * p.x() + rhat.y() * p.y() + rhat.z() * p.z();
    EmField f;
    f.E = (k * k * G * p + g1p * rdotp * rhat + (g1 / R) * (p - rdotp * rhat)) / mat.epsilon;
    f.H = -iu * mat.omega * g1 * rhat.cross(p);
    return f;
}

}  // namespace

EmField dipole_field(const Dipole& dip, const Material& mat, const Vec3& r) {
    return dipole_core((r - dip.location).cast<Complex>(), dip.moment, mat);
}

EmField plane_wave_field(const PlaneWave& pw, const Material& mat, const Vec3& r) {
    const Vec3 d = pw.direction.normalized();
    if (std::abs(pw.polarization.dot(d.cast<Complex>())) > 1e-12 * pw.polarization.norm())
        throw std::domain_error("plane_wave_field: polarization must be orthogonal to direction");
    const Complex phase = pw.amplitude * std::exp(iu * mat.k * d.dot(r));
    EmField f;
    f.E = phase * pw.polarization;
    f.H = (mat.k / (mat.omega * mat.mu)) * phase * d.cast<Complex>().cross(pw.polarization);
    return f;
}

EmField beam_field(const Beam& beam, const Material& mat, const Vec3& r) {
    Eigen::Vector3cd d = (r - beam.location).cast<Complex>();
    d -= iu * beam.waist_b * beam.direction.normalized().cast<Complex>();
    return dipole_core(d, beam.moment, mat);
}

ModeFrame mode_frame_for(const BoundModeExc& exc, const SurfaceMesh& mesh) {
    for (const auto& siw : mesh.siws)
        if (siw.label == exc.siw_label) return ModeFrame::along(siw.origin, -siw.axis);
    throw ConfigError("mode_frame_for: SIW label " + std::to_string(exc.siw_label) +
                      " not present in the mesh");
}

EmField incident_field(const Excitation& exc, const MaterialPair& mats, Side side,
                       const SurfaceMesh& mesh, const Vec3& r) {
    EmField zero;
    if (const auto* pw = std::get_if<PlaneWave>(&exc))
        return side == Side::Exterior ? plane_wave_field(*pw, mats.exterior, r) : zero;
    if (const auto* dp = std::get_if<Dipole>(&exc))
        return side == Side::Exterior ? dipole_field(*dp, mats.exterior, r) : zero;
    if (const auto* bm = std::get_if<Beam>(&exc))
        return side == Side::Exterior ? beam_field(*bm, mats.exterior, r) : zero;
    const auto& mode = std::get<BoundModeExc>(exc);
    EmField f = mode_fields(mode.mode, mode_frame_for(mode, mesh), r);
    f.E *= mode.amplitude;
    f.H *= mode.amplitude;
    return f;
}

void check_positive_projection(const Excitation& exc, const SurfaceMesh& mesh, bool relax) {
    Vec3 dir;
    if (const auto* pw = std::get_if<PlaneWave>(&exc))
        dir = pw->direction.normalized();
    else if (const auto* bm = std::get_if<Beam>(&exc))
        dir = bm->direction.normalized();
    else
        return;
    for (const auto& siw : mesh.siws) {
        if (dir.dot(siw.axis) <= 0.0 && !relax)
            throw ConfigError(
                "incident direction has a non-positive projection on the axis of SIW " +
                std::to_string(siw.label) +
                "; the windowed Type I truncation assumes positive projections");
    }
}

namespace {

CVec3 n_cross(const Vec3& n, const CVec3& a) {
    return CVec3(n.y() * a.z() - n.z() * a.y(), n.z() * a.x() - n.x() * a.z(),
                 n.x() * a.y() - n.y() * a.x());
}

}  // namespace

SurfaceDensity incident_traces(const Excitation& exc, const SurfaceMesh& mesh,
                               const MaterialPair& mats, Side side) {
    const size_t N = mesh.num_nodes();
    SurfaceDensity out = SurfaceDensity::zero(N);
    const double sign = side == Side::Interior ? -1.0 : 1.0;
    const auto* bm = std::get_if<BoundModeExc>(&exc);

    ModeFrame frame;
    if (bm) frame = mode_frame_for(*bm, mesh);

    for (size_t p = 0; p < mesh.patches.size(); ++p) {
        if (bm) {
            const auto& labels = mesh.guide_labels[p];
            if (std::find(labels.begin(), labels.end(), bm->siw_label) == labels.end()) continue;
        }
        const auto& patch = mesh.patches[p];
        for (int k = 0; k < patch.nodes(); ++k) {
            const size_t g = mesh.patch_offset[p] + k;
            const Vec3& r = patch.x[k];
            if (bm && frame.prop.dot(r - frame.origin) > bm->support_cut) continue;
            const EmField f = incident_field(exc, mats, side, mesh, r);
            out.m[g] = sign * n_cross(patch.normal[k], f.E);
            out.j[g] = sign * n_cross(patch.normal[k], f.H);
        }
    }
    return out;
}

}  // namespace wgf
