#include "wgf/muller.hpp"

#include <chrono>
#include <cmath>

namespace wgf {

namespace {

std::vector<Vec3> mesh_normals(const SurfaceMesh& mesh) {
    std::vector<Vec3> n(mesh.num_nodes());
    for (size_t g = 0; g < n.size(); ++g) n[g] = mesh.node_normal(g);
    return n;
}

}  // namespace

MullerOperator::MullerOperator(const PotentialEvaluator& ev, bool windowed)
    : ev_(ev), windowed_(windowed) {
    if (!ev.self_targets())
        throw StateError("MullerOperator: evaluator must target its own mesh nodes");
}

SurfaceDensity MullerOperator::apply(const SurfaceDensity& in) const {
    const auto& mesh = ev_.mesh();
    const size_t N = mesh.num_nodes();
    if (in.m.size() != N || in.j.size() != N)
        throw std::invalid_argument("MullerOperator::apply: size mismatch");

    const std::vector<double>* window = windowed_ ? &mesh.W : nullptr;
    const auto pots = ev_.apply_many({std::span<const CVec3>(in.m), std::span<const CVec3>(in.j)},
                                     window);
    const auto normals = mesh_normals(mesh);
    const auto d_eps_m = combine_delta_ops(pots[0], normals, ev_.materials(), AlphaKind::Epsilon);
    const auto d_mu_m = combine_delta_ops(pots[0], normals, ev_.materials(), AlphaKind::Mu);
    const auto d_eps_j = combine_delta_ops(pots[1], normals, ev_.materials(), AlphaKind::Epsilon);
    const auto d_mu_j = combine_delta_ops(pots[1], normals, ev_.materials(), AlphaKind::Mu);

    SurfaceDensity out = SurfaceDensity::zero(N);
    for (size_t g = 0; g < N; ++g) {
        out.m[g] = in.m[g] + d_eps_m.R_delta[g] + d_eps_j.K_delta[g];
        out.j[g] = in.j[g] - d_mu_m.K_delta[g] + d_mu_j.R_delta[g];
    }
    return out;
}

Eigen::VectorXcd pack_density(const SurfaceDensity& d) {
    const size_t N = d.m.size();
    Eigen::VectorXcd x(6 * N);
    for (size_t g = 0; g < N; ++g)
        for (int c = 0; c < 3; ++c) {
            x[3 * g + c] = d.m[g][c];
            x[3 * (N + g) + c] = d.j[g][c];
        }
    return x;
}

SurfaceDensity unpack_density(const Eigen::VectorXcd& x) {
    const size_t N = x.size() / 6;
    SurfaceDensity d = SurfaceDensity::zero(N);
    for (size_t g = 0; g < N; ++g)
        for (int c = 0; c < 3; ++c) {
            d.m[g][c] = x[3 * g + c];
            d.j[g][c] = x[3 * (N + g) + c];
        }
    return d;
}

Eigen::VectorXcd MullerOperator::apply_packed(const Eigen::VectorXcd& x) const {
    return pack_density(apply(unpack_density(x)));
}

SurfaceDensity rhs_type1(const Excitation& exc, const SurfaceMesh& mesh,
                         const MaterialPair& mats) {
    if (std::holds_alternative<BoundModeExc>(exc))
        throw std::invalid_argument("rhs_type1: bound-mode excitation is a Type II problem");
    check_positive_projection(exc, mesh);
    const Complex eps_i = mats.interior.epsilon, eps_e = mats.exterior.epsilon;
    const Complex mu_i = mats.interior.mu, mu_e = mats.exterior.mu;
    const Complex cE = 2.0 / (eps_e + eps_i);
    const Complex cH = 2.0 / (mu_e + mu_i);

    const size_t N = mesh.num_nodes();
    SurfaceDensity rhs = SurfaceDensity::zero(N);
    for (size_t g = 0; g < N; ++g) {
        const Vec3& r = mesh.node_x(g);
        const Vec3& n = mesh.node_normal(g);
        const EmField fe = incident_field(exc, mats, Side::Exterior, mesh, r);
        const EmField fi = incident_field(exc, mats, Side::Interior, mesh, r);
        const CVec3 combE = cE * (eps_e * fe.E - eps_i * fi.E);
        const CVec3 combH = cH * (mu_e * fe.H - mu_i * fi.H);
        rhs.m[g] = combE.cross(n.cast<Complex>());
        rhs.j[g] = combH.cross(n.cast<Complex>());
    }
    return rhs;
}

SurfaceDensity GammaPerpContext::masked_traces(const BoundModeExc& exc,
                                               const SurfaceMesh& main_mesh, Side side) const {
    const bool want_core = side == Side::Interior;
    SurfaceDensity out = SurfaceDensity::zero(disc.num_nodes());
    const ModeFrame frame = mode_frame_for(exc, main_mesh);
    const SIWDescriptor* siw = nullptr;
    for (const auto& s : main_mesh.siws)
        if (s.label == siw_label) siw = &s;
    if (!siw) throw ConfigError("masked_traces: SIW label not found");
    const Vec3 c_q = siw->axis;
    for (size_t p = 0; p < disc.patches.size(); ++p) {
        if (core_patch[p] != want_core) continue;
        const auto& patch = disc.patches[p];
        for (int k = 0; k < patch.nodes(); ++k) {
            const size_t g = disc.patch_offset[p] + k;
            EmField f = mode_fields(exc.mode, frame, patch.x[k]);
            f.E *= exc.amplitude;
            f.H *= exc.amplitude;
            out.m[g] = c_q.cast<Complex>().cross(f.E);
            out.j[g] = c_q.cast<Complex>().cross(f.H);
        }
    }
    return out;
}

GammaPerpContext make_gamma_perp(const SurfaceMesh& mesh, const MaterialPair& mats,
                                 const BoundModeExc& exc, int siw_label, double R_max,
                                 double decay_tol, SingularRuleParams params) {
    const SIWDescriptor* siw = nullptr;
    for (const auto& s : mesh.siws)
        if (s.label == siw_label) siw = &s;
    if (!siw) throw ConfigError("make_gamma_perp: SIW label not found in mesh");

    GammaPerpContext ctx;
    ctx.siw_label = siw_label;
    const double gamma = exc.mode.w / exc.mode.core_radius;  // transverse decay rate
    ctx.disc = build_gamma_perp(*siw, mesh.window.A, R_max, mesh.degree, gamma, decay_tol);
    // first 5 patches cover the core circle by construction
    ctx.core_patch.assign(ctx.disc.patches.size(), false);
    for (size_t p = 0; p < ctx.disc.patches.size(); ++p) {
        const double rho = ((ctx.disc.patches[p].centroid - (siw->origin + mesh.window.A * siw->axis))
                            - ((ctx.disc.patches[p].centroid - (siw->origin + mesh.window.A * siw->axis)).dot(siw->axis)) * siw->axis)
                               .norm();
        ctx.core_patch[p] = rho < siw->radius;
    }
    std::vector<Vec3> targets(mesh.num_nodes());
    for (size_t g = 0; g < mesh.num_nodes(); ++g) targets[g] = mesh.node_x(g);
    ctx.to_mesh = std::make_unique<PotentialEvaluator>(ctx.disc, mats, std::move(targets), params);
    return ctx;
}

std::vector<int> gamma_perp_labels(const SurfaceMesh& mesh, const BoundModeExc& exc) {
    // Any SIW lying on the incident guide's uniform extension whose window
    // region is inside the support cut sheds incident traces into its tail.
    std::vector<int> labels;
    const ModeFrame frame = mode_frame_for(exc, mesh);
    for (const auto& siw : mesh.siws) {
        bool on_guide = false;
        for (size_t p = 0; p < mesh.patches.size(); ++p) {
            const auto& lbls = mesh.guide_labels[p];
            if (std::find(lbls.begin(), lbls.end(), siw.label) == lbls.end()) continue;
            if (std::find(lbls.begin(), lbls.end(), exc.siw_label) != lbls.end()) on_guide = true;
        }
        if (!on_guide) continue;
        // the support cut can exclude the far tail entirely
        const double cut_end = frame.prop.dot(siw.origin + mesh.window.A * siw.axis - frame.origin);
        if (cut_end <= exc.support_cut + 1e-12) labels.push_back(siw.label);
    }
    return labels;
}

SurfaceDensity rhs_type2(const BoundModeExc& exc, const PotentialEvaluator& ev,
                         const std::vector<const GammaPerpContext*>& perps) {
    const auto& mesh = ev.mesh();
    const auto& mats = ev.materials();
    const size_t N = mesh.num_nodes();
    const auto normals = mesh_normals(mesh);

    const SurfaceDensity inc = incident_traces(exc, mesh, mats, Side::Interior);

    // bounded-surface part: unwindowed operators over the retained boundary
    const auto pots = ev.apply_many(
        {std::span<const CVec3>(inc.m), std::span<const CVec3>(inc.j)}, nullptr);
    const auto d_eps_m = combine_delta_ops(pots[0], normals, mats, AlphaKind::Epsilon);
    const auto d_mu_m = combine_delta_ops(pots[0], normals, mats, AlphaKind::Mu);
    const auto d_eps_j = combine_delta_ops(pots[1], normals, mats, AlphaKind::Epsilon);
    const auto d_mu_j = combine_delta_ops(pots[1], normals, mats, AlphaKind::Mu);

    SurfaceDensity rhs = SurfaceDensity::zero(N);
    for (size_t g = 0; g < N; ++g) {
        rhs.m[g] = -(inc.m[g] + d_eps_m.R_delta[g] + d_eps_j.K_delta[g]);
        rhs.j[g] = -(inc.j[g] - d_mu_m.K_delta[g] + d_mu_j.R_delta[g]);
    }

    // infinite tails replaced by cross-section integrals (one per cut SIW)
    for (const auto* perp : perps) {
        const SurfaceDensity tr_i = perp->masked_traces(exc, mesh, Side::Interior);
        const SurfaceDensity tr_e = perp->masked_traces(exc, mesh, Side::Exterior);
        const auto disc_pots = perp->to_mesh->apply_many(
            {std::span<const CVec3>(tr_i.m), std::span<const CVec3>(tr_i.j),
             std::span<const CVec3>(tr_e.m), std::span<const CVec3>(tr_e.j)},
            nullptr);
        // interior kernels act on the core-part densities, exterior kernels
        // on the cladding part; combine with the Eq.-5 coefficients
        const Complex eps_i = mats.interior.epsilon, eps_e = mats.exterior.epsilon;
        const Complex mu_i = mats.interior.mu, mu_e = mats.exterior.mu;
        const Complex ki2 = mats.interior.k * mats.interior.k;
        const Complex ke2 = mats.exterior.k * mats.exterior.k;
        const Complex cRe = 2.0 / (eps_e + eps_i);
        const Complex cKe = 2.0 * iu / (mats.interior.omega * (eps_e + eps_i));
        const Complex cRm = 2.0 / (mu_e + mu_i);
        const Complex cKm = 2.0 * iu / (mats.interior.omega * (mu_e + mu_i));
        for (size_t g = 0; g < N; ++g) {
            const Vec3& n = normals[g];
            auto ncross = [&](const CVec3& a) {
                return CVec3(n.y() * a.z() - n.z() * a.y(), n.z() * a.x() - n.x() * a.z(),
                             n.x() * a.y() - n.y() * a.x());
            };
            // R_l[.], T_l[.], S_l[.] restricted to the disc region of side l
            const CVec3 Ri_m = -ncross(disc_pots[0].curl[0][g]);
            const CVec3 Re_m = -ncross(disc_pots[2].curl[1][g]);
            const CVec3 Ri_j = -ncross(disc_pots[1].curl[0][g]);
            const CVec3 Re_j = -ncross(disc_pots[3].curl[1][g]);
            const CVec3 Ti_m = -ncross(disc_pots[0].gradd[0][g]);
            const CVec3 Te_m = -ncross(disc_pots[2].gradd[1][g]);
            const CVec3 Ti_j = -ncross(disc_pots[1].gradd[0][g]);
            const CVec3 Te_j = -ncross(disc_pots[3].gradd[1][g]);
            const CVec3 Si_m = -ncross(disc_pots[0].single[0][g]);
            const CVec3 Se_m = -ncross(disc_pots[2].single[1][g]);
            const CVec3 Si_j = -ncross(disc_pots[1].single[0][g]);
            const CVec3 Se_j = -ncross(disc_pots[3].single[1][g]);

            const CVec3 Rde_m = cRe * (eps_e * Re_m - eps_i * Ri_m);
            const CVec3 Kde_j = cKe * ((Te_j - Ti_j) + (ke2 * Se_j - ki2 * Si_j));
            const CVec3 Rdm_j = cRm * (mu_e * Re_j - mu_i * Ri_j);
            const CVec3 Kdm_m = cKm * ((Te_m - Ti_m) + (ke2 * Se_m - ki2 * Si_m));

            rhs.m[g] += Rde_m + Kde_j;
            rhs.j[g] += -Kdm_m + Rdm_j;
        }
    }
    return rhs;
}

std::pair<SurfaceDensity, SolveReport> solve(const MullerOperator& op, const SurfaceDensity& rhs,
                                             double tol, int max_iter, int restart) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();

    const Eigen::VectorXcd b = pack_density(rhs);
    const size_t n = b.size();
    SolveReport report;
    report.unknowns = n;
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        report.converged = true;
        report.residual = 0.0;
        return {unpack_density(Eigen::VectorXcd::Zero(n)), report};
    }

    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
    int total_iters = 0;
    double rel = 1.0;

    while (total_iters < max_iter) {
        Eigen::VectorXcd r = b - op.apply_packed(x);
        double beta = r.norm();
        rel = beta / bnorm;
        if (rel <= tol) break;

        const int m = std::min<int>(restart, max_iter - total_iters);
        std::vector<Eigen::VectorXcd> V;
        V.reserve(m + 1);
        V.push_back(r / beta);
        Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m + 1, m);
        Eigen::VectorXcd g = Eigen::VectorXcd::Zero(m + 1);
        g[0] = beta;
        std::vector<Complex> cs(m), sn(m);
        int k = 0;
        for (; k < m && total_iters < max_iter; ++k, ++total_iters) {
            Eigen::VectorXcd w = op.apply_packed(V[k]);
            // modified Gram-Schmidt
            for (int i = 0; i <= k; ++i) {
                H(i, k) = V[i].dot(w);
                w -= H(i, k) * V[i];
            }
            const double hnorm = w.norm();
            H(k + 1, k) = hnorm;
            const bool breakdown = hnorm < 1e-300;
            if (!breakdown) V.push_back(w / hnorm);

            // apply accumulated Givens rotations
            for (int i = 0; i < k; ++i) {
                const Complex t = cs[i] * H(i, k) + sn[i] * H(i + 1, k);
                H(i + 1, k) = -std::conj(sn[i]) * H(i, k) + std::conj(cs[i]) * H(i + 1, k);
                H(i, k) = t;
            }
            const double denom =
                std::sqrt(std::norm(H(k, k)) + std::norm(H(k + 1, k)));
            cs[k] = std::conj(H(k, k)) / denom;
            sn[k] = std::conj(H(k + 1, k)) / denom;
            H(k, k) = cs[k] * H(k, k) + sn[k] * H(k + 1, k);
            H(k + 1, k) = 0.0;
            const Complex gk = g[k];
            g[k] = cs[k] * gk;
            g[k + 1] = -std::conj(sn[k]) * gk;

            rel = std::abs(g[k + 1]) / bnorm;
            report.history.push_back(rel);
            if (rel <= tol || breakdown) {
                ++k;
                ++total_iters;
                break;
            }
        }
        // back substitution on the k x k triangular system
        Eigen::VectorXcd y = Eigen::VectorXcd::Zero(k);
        for (int i = k - 1; i >= 0; --i) {
            Complex s = g[i];
            for (int l = i + 1; l < k; ++l) s -= H(i, l) * y[l];
            y[i] = s / H(i, i);
        }
        for (int i = 0; i < k; ++i) x += y[i] * V[i];
        if (rel <= tol) break;
        if (k == 0) break;
    }

    report.iterations = total_iters;
    report.residual = rel;
    report.converged = rel <= tol;
    report.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    if (!report.converged)
        throw NonConvergenceError("gmres: no convergence after " + std::to_string(total_iters) +
                                      " iterations (relative residual " + std::to_string(rel) +
                                      ")",
                                  report);
    return {unpack_density(x), report};
}

}  // namespace wgf
