#include "wgf/windowing.hpp"

#include <cmath>

namespace wgf {

void SIWDescriptor::validate() const {
    if (std::abs(axis.norm() - 1.0) > 1e-14)
        throw std::domain_error("SIWDescriptor: axis must be a unit vector");
    switch (cross_section) {
        case CrossSectionKind::Circular:
            if (!(radius > 0.0)) throw std::domain_error("SIWDescriptor: radius must be > 0");
            break;
        case CrossSectionKind::Rectangular:
            if (!(width > 0.0 && height > 0.0))
                throw std::domain_error("SIWDescriptor: width/height must be > 0");
            break;
    }
}

bool SIWDescriptor::contains(const Vec3& r, double margin) const {
    const Vec3 rel = r - origin;
    const double d = axis.dot(rel);
    if (d < -margin) return false;
    const Vec3 transverse = rel - d * axis;
    switch (cross_section) {
        case CrossSectionKind::Circular:
            return transverse.norm() <= radius * (1.0 + 1e-12) + margin;
        case CrossSectionKind::Rectangular:
            return std::abs(transverse.dot(frame_u)) <= 0.5 * width + margin &&
                   std::abs(transverse.dot(frame_v)) <= 0.5 * height + margin;
    }
    return false;
}

double eval_w(double d, const WindowParams& p) {
    p.validate();
    if (!std::isfinite(d)) throw std::domain_error("eval_w: d must be finite");
    const double s = (std::abs(d) - p.alpha * p.A) / (p.A - p.alpha * p.A);
    if (s <= 0.0) return 1.0;
    if (s >= 1.0) return 0.0;
    return std::exp(-2.0 * std::exp(-1.0 / (s * s)) / ((1.0 - s) * (1.0 - s)));
}

double eval_W(const Vec3& r, std::span<const SIWDescriptor> siws, const WindowParams& p) {
    const SIWDescriptor* owner = nullptr;
    for (const auto& siw : siws) {
        if (!siw.contains(r)) continue;
        if (owner != nullptr)
            throw ConfigError("eval_W: point claimed by SIW " + std::to_string(owner->label) +
                              " and SIW " + std::to_string(siw.label) +
                              "; SIW regions must be disjoint");
        owner = &siw;
    }
    if (owner == nullptr) return 1.0;
    return eval_w(owner->axial_distance(r), p);
}

std::optional<int> siw_label_at(const Vec3& r, std::span<const SIWDescriptor> siws) {
    for (const auto& siw : siws)
        if (siw.contains(r)) return siw.label;
    return std::nullopt;
}

}  // namespace wgf
