#include "wgf/operators.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wgf {

double max_normal_component(const SurfaceMesh& mesh, std::span<const CVec3> a) {
    double worst = 0.0;
    for (size_t g = 0; g < mesh.num_nodes(); ++g) {
        const Vec3& n = mesh.node_normal(g);
        const Complex nd = n.x() * a[g].x() + n.y() * a[g].y() + n.z() * a[g].z();
        worst = std::max(worst, std::abs(nd));
    }
    return worst;
}

PotentialEvaluator::PotentialEvaluator(const SurfaceMesh& mesh, const MaterialPair& mats,
                                       SingularRuleParams params)
    : mesh_(mesh), mats_(mats), params_(params), self_(true) {
    mats_.validate();
    targets_.resize(mesh.num_nodes());
    for (size_t g = 0; g < targets_.size(); ++g) targets_[g] = mesh.node_x(g);
    build_tables();
}

PotentialEvaluator::PotentialEvaluator(const SurfaceMesh& mesh, const MaterialPair& mats,
                                       std::vector<Vec3> targets, SingularRuleParams params)
    : mesh_(mesh), mats_(mats), params_(params), self_(false), targets_(std::move(targets)) {
    mats_.validate();
    build_tables();
}

size_t PotentialEvaluator::near_pair_count() const {
    size_t n = 0;
    for (const auto& v : near_) n += v.size();
    return n;
}

void PotentialEvaluator::build_tables() {
    src_x_.resize(mesh_.num_nodes());
    src_w_.resize(mesh_.num_nodes());
    for (size_t p = 0; p < mesh_.patches.size(); ++p) {
        const size_t base = mesh_.patch_offset[p];
        for (int s = 0; s < mesh_.patches[p].nodes(); ++s) {
            src_x_[base + s] = mesh_.patches[p].x[s];
            src_w_[base + s] = mesh_.patches[p].weight[s];
        }
    }
    const Complex kk[2] = {mats_.interior.k, mats_.exterior.k};
    near_.assign(targets_.size(), {});

#pragma omp parallel for schedule(dynamic, 8)
    for (size_t t = 0; t < targets_.size(); ++t) {
        const Vec3& rt = targets_[t];
        for (size_t p = 0; p < mesh_.patches.size(); ++p) {
            const Patch& patch = mesh_.patches[p];
            if (patch_distance(patch, rt) > params_.near_threshold * patch.diameter) continue;

            const int n = patch.degree;
            const auto& ops = cheb_ops(n);
            NearEntry entry;
            entry.patch = static_cast<int>(p);
            for (int l = 0; l < 2; ++l) {
                entry.wG[l] = Eigen::VectorXcd::Zero(n * n);
                entry.wGrad[l] = Eigen::Matrix3Xcd::Zero(3, n * n);
            }

            double u0, v0;
            closest_param(patch, rt, u0, v0);
            const auto rule = polar_rule(u0, v0, params_);
            std::vector<double> lu(n), lv(n), lw(n * n);
            for (size_t q = 0; q < rule.u.size(); ++q) {
                const auto jet = patch.chart->eval(rule.u[q], rule.v[q]);
                const double jac = jet.xu.cross(jet.xv).norm();
                const double wq = jac * rule.w[q];
                ops.interp_weights(rule.u[q], lu.data());
                ops.interp_weights(rule.v[q], lv.data());
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) lw[i * n + j] = lu[i] * lv[j];
                for (int l = 0; l < 2; ++l) {
                    Complex g;
                    CVec3 grad;
                    green_pair(kk[l], rt, jet.x, g, grad);
                    const Complex gw = g * wq;
                    const CVec3 gradw = grad * wq;
                    for (int s = 0; s < n * n; ++s) {
                        entry.wG[l][s] += gw * lw[s];
                        entry.wGrad[l].col(s) += gradw * lw[s];
                    }
                }
            }
            // subtract what the smooth sweep will add for this patch
            const size_t base = mesh_.patch_offset[p];
            for (int s = 0; s < n * n; ++s) {
                if (self_ && base + s == t) continue;  // smooth sweep skips the self node
                for (int l = 0; l < 2; ++l) {
                    Complex g;
                    CVec3 grad;
                    green_pair(kk[l], rt, patch.x[s], g, grad);
                    entry.wG[l][s] -= g * patch.weight[s];
                    entry.wGrad[l].col(s) -= grad * patch.weight[s];
                }
            }
#pragma omp critical(near_tables)
            near_[t].push_back(std::move(entry));
        }
    }
    // deterministic ordering regardless of scheduling
    for (auto& v : near_)
        std::sort(v.begin(), v.end(),
                  [](const NearEntry& a, const NearEntry& b) { return a.patch < b.patch; });
}

LayerPotentials PotentialEvaluator::apply(std::span<const CVec3> a,
                                          const std::vector<double>* window) const {
    return std::move(apply_many({a}, window)[0]);
}

std::vector<LayerPotentials> PotentialEvaluator::apply_many(
    const std::vector<std::span<const CVec3>>& densities, const std::vector<double>* window) const {
    const size_t N = mesh_.num_nodes();
    const size_t T = targets_.size();
    const int D = static_cast<int>(densities.size());
    const Complex kk[2] = {mats_.interior.k, mats_.exterior.k};

    // windowed samples, their surface divergence, and weighted copies
    std::vector<std::vector<CVec3>> b(D), wb(D);
    std::vector<std::vector<Complex>> q(D), wq(D);
    for (int d = 0; d < D; ++d) {
        if (densities[d].size() != N)
            throw std::invalid_argument("apply_many: density size mismatch");
        b[d].resize(N);
        wb[d].resize(N);
        q[d].resize(N);
        wq[d].resize(N);
        for (size_t g = 0; g < N; ++g)
            b[d][g] = window ? (*window)[g] * densities[d][g] : densities[d][g];
        for (size_t p = 0; p < mesh_.patches.size(); ++p) {
            const auto& patch = mesh_.patches[p];
            const size_t base = mesh_.patch_offset[p];
            const auto div = surface_div(patch, {b[d].data() + base,
                                                 static_cast<size_t>(patch.nodes())});
            for (int s = 0; s < patch.nodes(); ++s) {
                q[d][base + s] = div[s];
                wb[d][base + s] = patch.weight[s] * b[d][base + s];
                wq[d][base + s] = patch.weight[s] * q[d][base + s];
            }
        }
    }

    std::vector<LayerPotentials> out(D);
    for (int d = 0; d < D; ++d)
        for (int l = 0; l < 2; ++l) {
            out[d].single[l].assign(T, CVec3::Zero());
            out[d].curl[l].assign(T, CVec3::Zero());
            out[d].gradd[l].assign(T, CVec3::Zero());
        }

#pragma omp parallel for schedule(dynamic, 16)
    for (size_t t = 0; t < T; ++t) {
        const Vec3 rt = targets_[t];
        for (size_t s = 0; s < N; ++s) {
            if (self_ && s == t) continue;
            Complex g[2];
            CVec3 grad[2];
            green_pair(kk[0], rt, src_x_[s], g[0], grad[0]);
            green_pair(kk[1], rt, src_x_[s], g[1], grad[1]);
            for (int d = 0; d < D; ++d) {
                const CVec3& vb = wb[d][s];
                const Complex& vq = wq[d][s];
                for (int l = 0; l < 2; ++l) {
                    out[d].single[l][t] += g[l] * vb;
                    out[d].curl[l][t] += grad[l].cross(vb);
                    out[d].gradd[l][t] += grad[l] * vq;
                }
            }
        }
        for (const auto& entry : near_[t]) {
            const size_t base = mesh_.patch_offset[entry.patch];
            const int nn = mesh_.patches[entry.patch].nodes();
            for (int s = 0; s < nn; ++s) {
                for (int d = 0; d < D; ++d) {
                    const CVec3& vb = b[d][base + s];
                    const Complex& vq = q[d][base + s];
                    for (int l = 0; l < 2; ++l) {
                        out[d].single[l][t] += entry.wG[l][s] * vb;
                        out[d].curl[l][t] += CVec3(entry.wGrad[l].col(s)).cross(vb);
                        out[d].gradd[l][t] += CVec3(entry.wGrad[l].col(s)) * vq;
                    }
                }
            }
        }
    }
    return out;
}

namespace {

CVec3 n_cross(const Vec3& n, const CVec3& a) {
    return CVec3(n.y() * a.z() - n.z() * a.y(), n.z() * a.x() - n.x() * a.z(),
                 n.x() * a.y() - n.y() * a.x());
}

std::vector<Vec3> mesh_normals(const SurfaceMesh& mesh) {
    std::vector<Vec3> n(mesh.num_nodes());
    for (size_t g = 0; g < n.size(); ++g) n[g] = mesh.node_normal(g);
    return n;
}

}  // namespace

BoundaryOps project_boundary_ops(const LayerPotentials& pots, std::span<const Vec3> normals,
                                 Side side) {
    const int l = static_cast<int>(side);
    const size_t T = normals.size();
    BoundaryOps ops;
    ops.S.resize(T);
    ops.R.resize(T);
    ops.T.resize(T);
    for (size_t t = 0; t < T; ++t) {
        ops.S[t] = -n_cross(normals[t], pots.single[l][t]);
        ops.R[t] = -n_cross(normals[t], pots.curl[l][t]);
        ops.T[t] = -n_cross(normals[t], pots.gradd[l][t]);
    }
    return ops;
}

BoundaryOps boundary_ops(const PotentialEvaluator& ev, Side side, std::span<const CVec3> a) {
    if (!ev.self_targets())
        throw StateError("boundary_ops: evaluator must target the mesh nodes");
    const auto pots = ev.apply(a, nullptr);
    const auto normals = mesh_normals(ev.mesh());
    return project_boundary_ops(pots, normals, side);
}

DeltaOps combine_delta_ops(const LayerPotentials& pots, std::span<const Vec3> normals,
                           const MaterialPair& mats, AlphaKind kind) {
    const Complex a_i = kind == AlphaKind::Epsilon ? mats.interior.epsilon : mats.interior.mu;
    const Complex a_e = kind == AlphaKind::Epsilon ? mats.exterior.epsilon : mats.exterior.mu;
    const Complex denom = a_e + a_i;
    if (std::abs(denom) == 0.0) throw std::domain_error("delta ops: alpha_e + alpha_i == 0");
    const Complex cR = 2.0 / denom;
    const Complex cK = 2.0 * iu / (mats.interior.omega * denom);
    const Complex ki2 = mats.interior.k * mats.interior.k;
    const Complex ke2 = mats.exterior.k * mats.exterior.k;

    const size_t T = normals.size();
    DeltaOps ops;
    ops.R_delta.resize(T);
    ops.K_delta.resize(T);
    for (size_t t = 0; t < T; ++t) {
        // R_l = -n x curl_l ; S_l = -n x single_l ; T_l = -n x gradd_l
        const CVec3 Re = -n_cross(normals[t], pots.curl[1][t]);
        const CVec3 Ri = -n_cross(normals[t], pots.curl[0][t]);
        const CVec3 Te = -n_cross(normals[t], pots.gradd[1][t]);
        const CVec3 Ti = -n_cross(normals[t], pots.gradd[0][t]);
        const CVec3 Se = -n_cross(normals[t], pots.single[1][t]);
        const CVec3 Si = -n_cross(normals[t], pots.single[0][t]);
        ops.R_delta[t] = cR * (a_e * Re - a_i * Ri);
        ops.K_delta[t] = cK * ((Te - Ti) + (ke2 * Se - ki2 * Si));
    }
    return ops;
}

DeltaOps delta_ops(const PotentialEvaluator& ev, std::span<const CVec3> a, AlphaKind kind,
                   bool windowed) {
    if (!ev.self_targets())
        throw StateError("delta_ops: evaluator must target the mesh nodes");
    const auto pots = ev.apply(a, windowed ? &ev.mesh().W : nullptr);
    const auto normals = mesh_normals(ev.mesh());
    return combine_delta_ops(pots, normals, ev.materials(), kind);
}

namespace {

void require_far(const SurfaceMesh& mesh, std::span<const Vec3> targets) {
    for (const auto& t : targets)
        for (const auto& p : mesh.patches)
            if (patch_distance(p, t) <= p.diameter)
                throw std::invalid_argument(
                    "potential evaluation target inside the near zone; use the boundary "
                    "operators or an evaluator with corrections");
}

}  // namespace

std::vector<CVec3> potential_A(Complex k, const SurfaceMesh& mesh, std::span<const CVec3> a,
                               std::span<const Vec3> targets, bool allow_near) {
    if (!allow_near) require_far(mesh, targets);
    std::vector<CVec3> out(targets.size(), CVec3::Zero());
#pragma omp parallel for schedule(static)
    for (size_t t = 0; t < targets.size(); ++t) {
        for (size_t p = 0; p < mesh.patches.size(); ++p) {
            const auto& patch = mesh.patches[p];
            for (int s = 0; s < patch.nodes(); ++s) {
                const CVec3 grad = grad_green(k, targets[t], patch.x[s]);
                out[t] += grad.cross(patch.weight[s] * a[mesh.patch_offset[p] + s]);
            }
        }
    }
    return out;
}

std::vector<CVec3> potential_B(Complex k, const SurfaceMesh& mesh, std::span<const CVec3> a,
                               std::span<const Vec3> targets, bool allow_near) {
    if (!allow_near) require_far(mesh, targets);
    const size_t N = mesh.num_nodes();
    std::vector<Complex> q(N);
    for (size_t p = 0; p < mesh.patches.size(); ++p) {
        const auto& patch = mesh.patches[p];
        const size_t base = mesh.patch_offset[p];
        const auto div = surface_div(patch, {a.data() + base, static_cast<size_t>(patch.nodes())});
        for (int s = 0; s < patch.nodes(); ++s) q[base + s] = div[s];
    }
    std::vector<CVec3> out(targets.size(), CVec3::Zero());
#pragma omp parallel for schedule(static)
    for (size_t t = 0; t < targets.size(); ++t) {
        for (size_t p = 0; p < mesh.patches.size(); ++p) {
            const auto& patch = mesh.patches[p];
            const size_t base = mesh.patch_offset[p];
            for (int s = 0; s < patch.nodes(); ++s) {
                Complex g;
                CVec3 grad;
                green_pair(k, targets[t], patch.x[s], g, grad);
                const double w = patch.weight[s];
                out[t] += (k * k * g * w) * a[base + s] + grad * (w * q[base + s]);
            }
        }
    }
    return out;
}

}  // namespace wgf
