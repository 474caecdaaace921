#pragma once

#include <memory>

#include "wgf/excitation.hpp"

namespace wgf {

/// Windowed Muller system: (I + R^D_eps W)m + K^D_eps W j ; -K^D_mu W m +
/// (I + R^D_mu W) j, applied matrix-free through a shared PotentialEvaluator.
class MullerOperator {
public:
    MullerOperator(const PotentialEvaluator& ev, bool windowed);

    const PotentialEvaluator& evaluator() const { return ev_; }
    bool windowed() const { return windowed_; }
    size_t unknowns() const { return 6 * ev_.mesh().num_nodes(); }

    SurfaceDensity apply(const SurfaceDensity& in) const;
    Eigen::VectorXcd apply_packed(const Eigen::VectorXcd& x) const;

private:
    const PotentialEvaluator& ev_;
    bool windowed_;
};

Eigen::VectorXcd pack_density(const SurfaceDensity& d);
SurfaceDensity unpack_density(const Eigen::VectorXcd& x);

struct SolveReport {
    int iterations{0};
    double residual{0.0};
    double seconds{0.0};
    size_t unknowns{0};
    bool converged{false};
    std::vector<double> history;  // relative residual per iteration
};

/// Carries the residual history out of a failed iteration.
class NonConvergenceError : public AccuracyError {
public:
    NonConvergenceError(const std::string& msg, SolveReport r)
        : AccuracyError(msg), report(std::move(r)) {}
    SolveReport report;
};

/// Right-hand side of the Type I system (Eq.-9 structure).
SurfaceDensity rhs_type1(const Excitation& exc, const SurfaceMesh& mesh,
                         const MaterialPair& mats);

/// One auxiliary cross-section surface: the disc mesh cut at the end of the
/// windowed boundary of a SIW, the per-region trace masks, and a cross
/// evaluator targeting the main mesh nodes.
struct GammaPerpContext {
    SurfaceMesh disc;
    int siw_label{0};
    std::vector<bool> core_patch;  // per disc patch: inside the core circle
    std::unique_ptr<PotentialEvaluator> to_mesh;  // disc sources -> main-mesh targets

    /// Disc traces of the incident mode with the representation-theorem
    /// orientation (c_q x field), masked to the core (interior) or cladding
    /// (exterior) part.
    SurfaceDensity masked_traces(const BoundModeExc& exc, const SurfaceMesh& main_mesh,
                                 Side side) const;
};

/// Builds the disc at the end of the windowed region of the labeled SIW and
/// its cross evaluator. R_max <= 0 selects the decay-based radius.
GammaPerpContext make_gamma_perp(const SurfaceMesh& mesh, const MaterialPair& mats,
                                 const BoundModeExc& exc, int siw_label, double R_max = 0.0,
                                 double decay_tol = 1e-12,
                                 SingularRuleParams params = {});

/// SIW labels whose infinite tail carries incident traces for this
/// excitation (they need a Gamma-perp correction): every SIW on the uniform
/// extension of the incident guide not excluded by the support cut.
std::vector<int> gamma_perp_labels(const SurfaceMesh& mesh, const BoundModeExc& exc);

/// Right-hand side of the windowed Type II system (Eq.-21 structure): the
/// identity and the bounded-surface operators applied to the incident traces
/// plus the Gamma-perp replacements of the infinite tails.
SurfaceDensity rhs_type2(const BoundModeExc& exc, const PotentialEvaluator& ev,
                         const std::vector<const GammaPerpContext*>& perps);

/// Restarted GMRES with full orthogonalization inside a cycle.
std::pair<SurfaceDensity, SolveReport> solve(const MullerOperator& op, const SurfaceDensity& rhs,
                                             double tol = 1e-8, int max_iter = 2000,
                                             int restart = 200);

}  // namespace wgf
