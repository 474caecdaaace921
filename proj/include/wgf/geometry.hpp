#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wgf/cheb.hpp"
#include "wgf/types.hpp"
#include "wgf/windowing.hpp"

namespace wgf {

/// Analytic parametrization of one curvilinear quadrilateral patch over
/// [-1,1]^2.
class Chart {
public:
    struct Jet {
        Vec3 x;
        Vec3 xu;
        Vec3 xv;
    };
    virtual ~Chart() = default;
    virtual Jet eval(double u, double v) const = 0;
};

/// One patch: its chart plus cached data on the open Chebyshev tensor grid.
/// Node (i,j) refers to u-index i and v-index j, flattened as i*n + j.
struct Patch {
    std::shared_ptr<const Chart> chart;
    int degree{0};
    std::vector<Vec3> x, normal, xu, xv;
    std::vector<double> jac;     // |xu x xv| at nodes
    std::vector<double> weight;  // fejer x fejer x jac
    Vec3 centroid{Vec3::Zero()};
    double bound_radius{0.0};    // max node distance from centroid
    double diameter{0.0};        // 2 * bound_radius

    int nodes() const { return degree * degree; }
};

enum class SiwEnd { None, Minus, Plus, Both };

struct SurfaceMesh {
    std::vector<Patch> patches;
    std::vector<SIWDescriptor> siws;
    WindowParams window{1.0, 0.5, 0.0};

    // per global node
    std::vector<double> W;        // surface window value
    std::vector<int> siw_label;   // 0 = none
    // per patch: labels of SIWs whose infinite uniform guide contains the
    // patch (used to support mode traces along the incident guide)
    std::vector<std::vector<int>> guide_labels;

    int degree{0};
    std::vector<size_t> patch_offset;  // global index of patch p's first node

    size_t num_nodes() const { return patch_offset.empty() ? 0 : patch_offset.back(); }
    size_t node_index(int p, int i, int j) const {
        return patch_offset[p] + static_cast<size_t>(i) * degree + j;
    }
    int patch_of(size_t g) const;
    const Vec3& node_x(size_t g) const;
    const Vec3& node_normal(size_t g) const;
    double node_weight(size_t g) const;

    double total_area() const;
    void finalize();  // fills offsets, W, siw labels; checks invariants
};

SurfaceMesh build_sphere(double radius, int per_face_divisions, int degree,
                         const Vec3& center = Vec3::Zero());

/// Open/terminated circular waveguide section along the z axis over
/// [z_min, z_max]. SIW ends stay open with the window populated; other ends
/// are closed by a tangentially fitted spherical cap.
SurfaceMesh build_circular_guide(double radius, double z_min, double z_max, SiwEnd siw_ends,
                                 int axial_patches, int azimuthal_patches, int degree,
                                 const WindowParams& window);

/// Required disc radius for a transverse mode decay rate (1/length units)
/// and target amplitude ratio at the rim.
double gamma_perp_required_radius(double core_radius, double transverse_decay, double decay_tol);

/// Planar disc with its rim at R_max, meshed as a blended square-plus-sector
/// core out to core_radius and geometrically graded annuli beyond; node
/// normals along +axis. Patch boundaries respect the core circle.
SurfaceMesh build_disc(const Vec3& center, const Vec3& axis, double core_radius, double R_max,
                       int degree);

/// Planar disc normal to the SIW axis at axial distance cut_position from
/// the SIW origin: central square-plus-blend core patches out to the core
/// radius, then geometrically graded annular rings out to R_max.
/// R_max <= 0 selects the radius required by (transverse_decay, decay_tol).
SurfaceMesh build_gamma_perp(const SIWDescriptor& siw, double cut_position, double R_max,
                             int degree, double transverse_decay, double decay_tol = 1e-12);

/// Demo geometry: 90-degree circular-guide bend (quarter torus) joining two
/// straight SIW legs, in the x-z plane.
SurfaceMesh build_bend_demo(double radius, double bend_radius, double leg_length,
                            int azimuthal_patches, int arc_patches, int leg_axial_patches,
                            int degree, const WindowParams& window);

/// Single flat rectangular patch spanning [0,Lx]x[0,Ly] at z=0 (test helper).
SurfaceMesh build_plane_rect(double Lx, double Ly, int degree);

struct AuditResult {
    double max_matched_gap{0.0};   // worst distance from an edge sample to its partner curve
    int boundary_edge_count{0};    // edges with no partner (open ends)
    int matched_edge_count{0};
};

/// Patch-adjacency audit: every interior edge sample must lie on some other
/// patch's edge curve.
AuditResult audit_watertight(const SurfaceMesh& mesh, double match_tol = 1e-7);

/// One CSV record per node: patch id, u, v, x, y, z, nx, ny, nz, weight,
/// W_A, siw label.
void mesh_dump_csv(const SurfaceMesh& mesh, const std::string& path);

}  // namespace wgf
