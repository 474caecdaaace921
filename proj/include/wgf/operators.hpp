#pragma once

#include <span>

#include "wgf/kernels.hpp"
#include "wgf/quadrature.hpp"

namespace wgf {

/// Paired tangential surface currents sampled at mesh nodes.
struct SurfaceDensity {
    std::vector<CVec3> m, j;

    static SurfaceDensity zero(size_t n) {
        SurfaceDensity d;
        d.m.assign(n, CVec3::Zero());
        d.j.assign(n, CVec3::Zero());
        return d;
    }
};

/// Max |n . a| over nodes (tangentiality check).
double max_normal_component(const SurfaceMesh& mesh, std::span<const CVec3> a);

enum class Side { Interior = 0, Exterior = 1 };
enum class AlphaKind { Epsilon, Mu };

/// Kernel-level layer potentials of one density at the evaluator targets,
/// for both material wavenumbers: single = int G_l a, curl = int grad(G_l) x a,
/// gradd = int grad(G_l) div_G a.
struct LayerPotentials {
    std::vector<CVec3> single[2], curl[2], gradd[2];
};

/// Matrix-free evaluation engine: smooth Fejer rule globally plus dense
/// precomputed polar corrections for every (target, source patch) pair
/// within the near-field threshold.
class PotentialEvaluator {
public:
    /// Targets are the mesh nodes themselves (on-surface operators).
    PotentialEvaluator(const SurfaceMesh& mesh, const MaterialPair& mats,
                       SingularRuleParams params = {});

    /// External targets (off-surface or another surface's nodes).
    PotentialEvaluator(const SurfaceMesh& mesh, const MaterialPair& mats,
                       std::vector<Vec3> targets, SingularRuleParams params = {});

    const SurfaceMesh& mesh() const { return mesh_; }
    const MaterialPair& materials() const { return mats_; }
    bool self_targets() const { return self_; }
    size_t num_targets() const { return targets_.size(); }
    size_t near_pair_count() const;

    /// window: optional per-source-node factor multiplying density samples.
    LayerPotentials apply(std::span<const CVec3> a, const std::vector<double>* window) const;

    /// Several densities in one kernel sweep.
    std::vector<LayerPotentials> apply_many(const std::vector<std::span<const CVec3>>& densities,
                                            const std::vector<double>* window) const;

private:
    void build_tables();

    const SurfaceMesh& mesh_;
    MaterialPair mats_;
    SingularRuleParams params_;
    bool self_;
    std::vector<Vec3> targets_;
    std::vector<Vec3> src_x_;      // flattened node positions
    std::vector<double> src_w_;    // flattened quadrature weights

    struct NearEntry {
        int patch;
        Eigen::VectorXcd wG[2];      // accurate-minus-smooth scalar weights
        Eigen::Matrix3Xcd wGrad[2];  // same for the gradient kernel
    };
    std::vector<std::vector<NearEntry>> near_;
};

/// Eq.-4 on-surface operators (principal value for R; the identity jump is
/// carried by the Muller assembly).
struct BoundaryOps {
    std::vector<CVec3> S, R, T;
};
BoundaryOps project_boundary_ops(const LayerPotentials& pots, std::span<const Vec3> normals,
                                 Side side);
BoundaryOps boundary_ops(const PotentialEvaluator& ev, Side side, std::span<const CVec3> a);

/// Eq.-5 weakly-singular combinations.
struct DeltaOps {
    std::vector<CVec3> R_delta, K_delta;
};
DeltaOps combine_delta_ops(const LayerPotentials& pots, std::span<const Vec3> normals,
                           const MaterialPair& mats, AlphaKind kind);
DeltaOps delta_ops(const PotentialEvaluator& ev, std::span<const CVec3> a, AlphaKind kind,
                   bool windowed);

/// Off-surface vector potentials of Eq. 3; targets must stay outside the
/// near zone unless allow_near is set.
std::vector<CVec3> potential_A(Complex k, const SurfaceMesh& mesh, std::span<const CVec3> a,
                               std::span<const Vec3> targets, bool allow_near = false);
std::vector<CVec3> potential_B(Complex k, const SurfaceMesh& mesh, std::span<const CVec3> a,
                               std::span<const Vec3> targets, bool allow_near = false);

}  // namespace wgf
