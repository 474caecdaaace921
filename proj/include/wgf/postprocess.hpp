#pragma once

#include <functional>

#include "wgf/muller.hpp"

namespace wgf {

struct FieldGrid {
    std::vector<Vec3> points;
    std::vector<CVec3> E, H;
    std::vector<int> region;      // 0 = interior, 1 = exterior
    std::vector<char> near_flag;  // too close to the surface for reliable values
    bool incident_added{false};
};

/// true when the point lies in the core region.
using RegionClassifier = std::function<bool(const Vec3&)>;

/// Solid-angle classifier for closed meshes (Gauss integral over the surface).
RegionClassifier make_solid_angle_classifier(const SurfaceMesh& mesh);

/// Total (or scattered-only) fields of a Type I solve via the direct
/// representation with side-correct densities.
FieldGrid eval_fields_type1(const SurfaceDensity& sol, const Excitation& exc,
                            const SurfaceMesh& mesh, const MaterialPair& mats,
                            std::span<const Vec3> points, const RegionClassifier& inside,
                            bool windowed, bool add_incident);

/// Total fields of a Type II solve: windowed scattered part, incident traces
/// over the retained boundary, and the cross-section replacements of the
/// infinite tails.
FieldGrid eval_fields_type2(const SurfaceDensity& sol, const BoundModeExc& exc,
                            const SurfaceMesh& mesh, const MaterialPair& mats,
                            std::span<const Vec3> points, const RegionClassifier& inside,
                            const std::vector<const GammaPerpContext*>& perps);

/// Time-averaged Poynting vector (1/2) Re(E x H*).
Vec3 poynting(const CVec3& E, const CVec3& H);

/// Power flux through a disc mesh whose nodes carry the grid fields:
/// integrates S . n with the disc quadrature weights.
double flux_through_disc(const SurfaceMesh& disc, const FieldGrid& grid);

/// Per-point |E - E_mode| / max |E_mode| for a Type II comparison run.
std::vector<double> error_vs_mode(const FieldGrid& grid, const BoundModeExc& exc,
                                  const SurfaceMesh& mesh);

/// CSV: x,y,z,region,near,Re/Im of E and H components, Sx,Sy,Sz.
void write_fields_csv(const FieldGrid& grid, const std::string& path);

}  // namespace wgf
