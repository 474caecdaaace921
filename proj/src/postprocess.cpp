#include "wgf/postprocess.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace wgf {

namespace {

CVec3 n_cross(const Vec3& n, const CVec3& a) {
    return CVec3(n.y() * a.z() - n.z() * a.y(), n.z() * a.x() - n.x() * a.z(),
                 n.x() * a.y() - n.y() * a.x());
}

std::vector<char> near_flags(const SurfaceMesh& mesh, std::span<const Vec3> points) {
    std::vector<char> flags(points.size(), 0);
    for (size_t t = 0; t < points.size(); ++t)
        for (const auto& p : mesh.patches)
            if (patch_distance(p, points[t]) < 0.15 * p.diameter) {
                flags[t] = 1;
                break;
            }
    return flags;
}

// E_l and H_l of the direct representation from kernel-level potentials
struct RepFields {
    CVec3 E, H;
};
RepFields representation(const LayerPotentials& pm, const LayerPotentials& pj, size_t t, int l,
                         const Material& mat) {
    const Complex k2 = mat.k * mat.k;
    RepFields f;
    const CVec3 B_j = k2 * pj.single[l][t] + pj.gradd[l][t];
    const CVec3 B_m = k2 * pm.single[l][t] + pm.gradd[l][t];
    f.E = pm.curl[l][t] + (iu / (mat.omega * mat.epsilon)) * B_j;
    f.H = pj.curl[l][t] - (iu / (mat.omega * mat.mu)) * B_m;
    return f;
}

}  // namespace

RegionClassifier make_solid_angle_classifier(const SurfaceMesh& mesh) {
    return [&mesh](const Vec3& r) {
        double total = 0.0;
        for (const auto& p : mesh.patches)
            for (int k = 0; k < p.nodes(); ++k) {
                const Vec3 d = p.x[k] - r;
                const double R = d.norm();
                total += p.weight[k] * p.normal[k].dot(d) / (4.0 * pi * R * R * R);
            }
        return total > 0.5;
    };
}

FieldGrid eval_fields_type1(const SurfaceDensity& sol, const Excitation& exc,
                            const SurfaceMesh& mesh, const MaterialPair& mats,
                            std::span<const Vec3> points, const RegionClassifier& inside,
                            bool windowed, bool add_incident) {
    const size_t N = mesh.num_nodes();
    const size_t T = points.size();

    // exterior traces from the interior unknowns and the incident jump
    std::vector<CVec3> me(N), je(N);
    for (size_t g = 0; g < N; ++g) {
        const Vec3& r = mesh.node_x(g);
        const Vec3& n = mesh.node_normal(g);
        const EmField fe = incident_field(exc, mats, Side::Exterior, mesh, r);
        const EmField fi = incident_field(exc, mats, Side::Interior, mesh, r);
        me[g] = -sol.m[g] + n_cross(n, fi.E - fe.E);
        je[g] = -sol.j[g] + n_cross(n, fi.H - fe.H);
    }

    PotentialEvaluator ev(mesh, mats, std::vector<Vec3>(points.begin(), points.end()));
    const std::vector<double>* window = windowed ? &mesh.W : nullptr;
    const auto pots = ev.apply_many({std::span<const CVec3>(sol.m), std::span<const CVec3>(sol.j),
                                     std::span<const CVec3>(me), std::span<const CVec3>(je)},
                                    window);

    FieldGrid grid;
    grid.points.assign(points.begin(), points.end());
    grid.E.resize(T);
    grid.H.resize(T);
    grid.region.resize(T);
    grid.near_flag = near_flags(mesh, points);
    grid.incident_added = add_incident;
    for (size_t t = 0; t < T; ++t) {
        const bool interior = inside(points[t]);
        grid.region[t] = interior ? 0 : 1;
        RepFields f;
        if (interior)
            f = representation(pots[0], pots[1], t, 0, mats.interior);
        else
            f = representation(pots[2], pots[3], t, 1, mats.exterior);
        grid.E[t] = f.E;
        grid.H[t] = f.H;
        if (add_incident) {
            const EmField finc = incident_field(exc, mats, interior ? Side::Interior : Side::Exterior,
                                                mesh, points[t]);
            grid.E[t] += finc.E;
            grid.H[t] += finc.H;
        }
    }
    return grid;
}

FieldGrid eval_fields_type2(const SurfaceDensity& sol, const BoundModeExc& exc,
                            const SurfaceMesh& mesh, const MaterialPair& mats,
                            std::span<const Vec3> points, const RegionClassifier& inside,
                            const std::vector<const GammaPerpContext*>& perps) {
    const size_t N = mesh.num_nodes();
    const size_t T = points.size();

    // windowed scattered currents plus the incident traces on their support
    const SurfaceDensity inc = incident_traces(exc, mesh, mats, Side::Interior);
    std::vector<CVec3> dm(N), dj(N);
    for (size_t g = 0; g < N; ++g) {
        dm[g] = mesh.W[g] * sol.m[g] + inc.m[g];
        dj[g] = mesh.W[g] * sol.j[g] + inc.j[g];
    }

    PotentialEvaluator ev(mesh, mats, std::vector<Vec3>(points.begin(), points.end()));
    const auto pots =
        ev.apply_many({std::span<const CVec3>(dm), std::span<const CVec3>(dj)}, nullptr);

    FieldGrid grid;
    grid.points.assign(points.begin(), points.end());
    grid.E.assign(T, CVec3::Zero());
    grid.H.assign(T, CVec3::Zero());
    grid.region.resize(T);
    grid.near_flag = near_flags(mesh, points);
    grid.incident_added = true;
    for (size_t t = 0; t < T; ++t) {
        const bool interior = inside(points[t]);
        grid.region[t] = interior ? 0 : 1;
        const int l = interior ? 0 : 1;
        const double side_sign = interior ? 1.0 : -1.0;
        const RepFields f = representation(pots[0], pots[1], t, l,
                                           interior ? mats.interior : mats.exterior);
        grid.E[t] = side_sign * f.E;
        grid.H[t] = side_sign * f.H;
    }

    // cross-section replacements of the infinite tails
    for (const auto* perp : perps) {
        const SurfaceDensity tr_i = perp->masked_traces(exc, mesh, Side::Interior);
        const SurfaceDensity tr_e = perp->masked_traces(exc, mesh, Side::Exterior);
        PotentialEvaluator pe(perp->disc, mats, std::vector<Vec3>(points.begin(), points.end()));
        const auto dp = pe.apply_many(
            {std::span<const CVec3>(tr_i.m), std::span<const CVec3>(tr_i.j),
             std::span<const CVec3>(tr_e.m), std::span<const CVec3>(tr_e.j)},
            nullptr);
        for (size_t t = 0; t < T; ++t) {
            const bool interior = grid.region[t] == 0;
            const int l = interior ? 0 : 1;
            const RepFields f = representation(dp[interior ? 0 : 2], dp[interior ? 1 : 3], t, l,
                                               interior ? mats.interior : mats.exterior);
            grid.E[t] -= f.E;
            grid.H[t] -= f.H;
        }
    }
    return grid;
}

Vec3 poynting(const CVec3& E, const CVec3& H) {
    return 0.5 * E.cross(H.conjugate()).real();
}

double flux_through_disc(const SurfaceMesh& disc, const FieldGrid& grid) {
    if (grid.points.size() != disc.num_nodes())
        throw std::invalid_argument("flux_through_disc: grid must sample the disc nodes");
    double flux = 0.0;
    for (size_t g = 0; g < disc.num_nodes(); ++g)
        flux += disc.node_weight(g) * poynting(grid.E[g], grid.H[g]).dot(disc.node_normal(g));
    return flux;
}

std::vector<double> error_vs_mode(const FieldGrid& grid, const BoundModeExc& exc,
                                  const SurfaceMesh& mesh) {
    const ModeFrame frame = mode_frame_for(exc, mesh);
    double scale = 0.0;
    std::vector<CVec3> ref(grid.points.size());
    for (size_t t = 0; t < grid.points.size(); ++t) {
        EmField f = mode_fields(exc.mode, frame, grid.points[t]);
        ref[t] = exc.amplitude * f.E;
        scale = std::max(scale, ref[t].norm());
    }
    std::vector<double> err(grid.points.size());
    for (size_t t = 0; t < grid.points.size(); ++t)
        err[t] = (grid.E[t] - ref[t]).norm() / scale;
    return err;
}

void write_fields_csv(const FieldGrid& grid, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_fields_csv: cannot open " + path);
    out << "x,y,z,region,near,ReEx,ImEx,ReEy,ImEy,ReEz,ImEz,"
           "ReHx,ImHx,ReHy,ImHy,ReHz,ImHz,Sx,Sy,Sz\n";
    char buf[1024];
    for (size_t t = 0; t < grid.points.size(); ++t) {
        const Vec3 S = poynting(grid.E[t], grid.H[t]);
        std::snprintf(buf, sizeof(buf),
                      "%.17g,%.17g,%.17g,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      grid.points[t].x(), grid.points[t].y(), grid.points[t].z(), grid.region[t],
                      static_cast<int>(grid.near_flag[t]), grid.E[t].x().real(),
                      grid.E[t].x().imag(), grid.E[t].y().real(), grid.E[t].y().imag(),
                      grid.E[t].z().real(), grid.E[t].z().imag(), grid.H[t].x().real(),
                      grid.H[t].x().imag(), grid.H[t].y().real(), grid.H[t].y().imag(),
                      grid.H[t].z().real(), grid.H[t].z().imag(), S.x(), S.y(), S.z());
        out << buf;
    }
}

}  // namespace wgf
