#pragma once

#include <optional>
#include <span>

#include "wgf/types.hpp"

namespace wgf {

/// Parameters of the slow-rise window w_A: identically 1 up to alpha*A,
/// smooth C-infinity decay to 0 at A. eta is the support tolerance used by
/// truncated-domain predicates (0 for this window, which has strict compact
/// support).
struct WindowParams {
    double A{1.0};
    double alpha{0.5};
    double eta{0.0};

    void validate() const {
        if (!(A > 0.0)) throw std::domain_error("WindowParams: A must be > 0");
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::domain_error("WindowParams: alpha must be in (0,1)");
        if (!(eta >= 0.0)) throw std::domain_error("WindowParams: eta must be >= 0");
    }
};

enum class CrossSectionKind { Circular, Rectangular };

/// One semi-infinite waveguide: origin plane, unit axis pointing toward the
/// infinite end, and the cross-section that bounds its spatial region.
struct SIWDescriptor {
    Vec3 origin{Vec3::Zero()};
    Vec3 axis{Vec3::UnitZ()};
    CrossSectionKind cross_section{CrossSectionKind::Circular};
    double radius{0.0};        // circular
    double width{0.0};         // rectangular, along frame_u
    double height{0.0};        // rectangular, along frame_v
    Vec3 frame_u{Vec3::UnitX()};
    Vec3 frame_v{Vec3::UnitY()};
    int label{1};

    void validate() const;

    /// Axial coordinate of r measured from the origin plane along the axis.
    double axial_distance(const Vec3& r) const { return axis.dot(r - origin); }

    /// True when r lies in the half-infinite spatial region of this SIW. A
    /// small radial
    /// margin keeps surface points (which sit exactly on the cross-section
    /// boundary) inside.
    bool contains(const Vec3& r, double margin = 1e-9) const;
};

/// 1D slow-rise window w_A(d). Returns 1 for s(d) < 0, 0 for s(d) >= 1 and
/// exp(-2 exp(-1/s^2)/(1-s)^2) in between, with s = (|d|-alpha A)/(A-alpha A).
double eval_w(double d, const WindowParams& p);

/// Surface window W_A(r): w_A of the axial distance inside the SIW that
/// claims r, 1 outside every SIW. Throws ConfigError when two SIWs claim r.
double eval_W(const Vec3& r, std::span<const SIWDescriptor> siws, const WindowParams& p);

/// Label of the SIW containing r, or nullopt.
std::optional<int> siw_label_at(const Vec3& r, std::span<const SIWDescriptor> siws);

}  // namespace wgf
