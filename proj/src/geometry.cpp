#include "wgf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace wgf {

namespace {

Vec3 unit_perp(const Vec3& axis) {
    Vec3 trial = std::abs(axis.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    Vec3 e = trial - axis.dot(trial) * axis;
    return e.normalized();
}

// Equiangular cube-sphere face: the face coordinate is the tangent of an
// angle swept uniformly across [-pi/4, pi/4], which keeps the metric mild.
class CubeSphereChart : public Chart {
public:
    CubeSphereChart(Vec3 center, double radius, Vec3 eu, Vec3 ev, Vec3 en, double ua, double ub,
                    double va, double vb)
        : center_(center), R_(radius), eu_(eu), ev_(ev), en_(en), ua_(ua), ub_(ub), va_(va),
          vb_(vb) {}

    Jet eval(double u, double v) const override {
        const double su = 0.5 * (ub_ - ua_), sv = 0.5 * (vb_ - va_);
        const double tu = (pi / 4.0) * (ua_ + su * (u + 1.0));
        const double tv = (pi / 4.0) * (va_ + sv * (v + 1.0));
        const double xi = std::tan(tu), eta = std::tan(tv);
        const Vec3 c = xi * eu_ + eta * ev_ + en_;
        const double nc = c.norm();
        const Vec3 dir = c / nc;
        Jet jet;
        jet.x = center_ + R_ * dir;
        const double dxi = (pi / 4.0) * su * (1.0 + xi * xi);
        const double deta = (pi / 4.0) * sv * (1.0 + eta * eta);
        jet.xu = R_ * dxi * (eu_ - dir * dir.dot(eu_)) / nc;
        jet.xv = R_ * deta * (ev_ - dir * dir.dot(ev_)) / nc;
        return jet;
    }

private:
    Vec3 center_;
    double R_;
    Vec3 eu_, ev_, en_;
    double ua_, ub_, va_, vb_;
};

class CylinderChart : public Chart {
public:
    CylinderChart(Vec3 origin, Vec3 e1, Vec3 e2, Vec3 ez, double radius, double phi_a,
                  double phi_b, double z_a, double z_b)
        : o_(origin), e1_(e1), e2_(e2), ez_(ez), a_(radius), pa_(phi_a), pb_(phi_b), za_(z_a),
          zb_(z_b) {}

    Jet eval(double u, double v) const override {
        const double sp = 0.5 * (pb_ - pa_), sz = 0.5 * (zb_ - za_);
        const double phi = pa_ + sp * (u + 1.0);
        const double z = za_ + sz * (v + 1.0);
        Jet jet;
        const Vec3 rad = std::cos(phi) * e1_ + std::sin(phi) * e2_;
        const Vec3 tan = -std::sin(phi) * e1_ + std::cos(phi) * e2_;
        jet.x = o_ + a_ * rad + z * ez_;
        jet.xu = a_ * sp * tan;
        jet.xv = sz * ez_;
        return jet;
    }

private:
    Vec3 o_, e1_, e2_, ez_;
    double a_, pa_, pb_, za_, zb_;
};

class PlaneRectChart : public Chart {
public:
    PlaneRectChart(Vec3 origin, Vec3 e1, Vec3 e2, double Lx, double Ly)
        : o_(origin), e1_(e1), e2_(e2), Lx_(Lx), Ly_(Ly) {}
    Jet eval(double u, double v) const override {
        Jet jet;
        jet.x = o_ + 0.5 * (u + 1.0) * Lx_ * e1_ + 0.5 * (v + 1.0) * Ly_ * e2_;
        jet.xu = 0.5 * Lx_ * e1_;
        jet.xv = 0.5 * Ly_ * e2_;
        return jet;
    }

private:
    Vec3 o_, e1_, e2_;
    double Lx_, Ly_;
};

class DiscCenterChart : public Chart {
public:
    DiscCenterChart(Vec3 origin, Vec3 e1, Vec3 e2, double half)
        : o_(origin), e1_(e1), e2_(e2), h_(half) {}
    Jet eval(double u, double v) const override {
        Jet jet;
        jet.x = o_ + h_ * u * e1_ + h_ * v * e2_;
        jet.xu = h_ * e1_;
        jet.xv = h_ * e2_;
        return jet;
    }

private:
    Vec3 o_, e1_, e2_;
    double h_;
};

// Blend between the central square's edge and the circular rim; sector k
// rotated by k*90 degrees. u is the radial blend, v the tangential sweep.
class DiscBlendChart : public Chart {
public:
    DiscBlendChart(Vec3 origin, Vec3 e1, Vec3 e2, double half, double R, int sector)
        : o_(origin), h_(half), R_(R) {
        const double c = std::cos(sector * pi / 2.0), s = std::sin(sector * pi / 2.0);
        ea_ = c * e1 + s * e2;
        eb_ = -s * e1 + c * e2;
    }

    Jet eval(double u, double v) const override {
        const double s = 0.5 * (u + 1.0);
        const double t = v;
        const double theta = t * pi / 4.0;
        const Vec3 p_sq = o_ + h_ * ea_ + h_ * t * eb_;
        const Vec3 p_sq_t = h_ * eb_;
        const Vec3 p_arc = o_ + R_ * (std::cos(theta) * ea_ + std::sin(theta) * eb_);
        const Vec3 p_arc_t = R_ * (pi / 4.0) * (-std::sin(theta) * ea_ + std::cos(theta) * eb_);
        Jet jet;
        jet.x = (1.0 - s) * p_sq + s * p_arc;
        jet.xu = 0.5 * (p_arc - p_sq);
        jet.xv = (1.0 - s) * p_sq_t + s * p_arc_t;
        return jet;
    }

private:
    Vec3 o_, ea_, eb_;
    double h_, R_;
};

class AnnulusChart : public Chart {
public:
    AnnulusChart(Vec3 origin, Vec3 e1, Vec3 e2, double r0, double r1, double phi_a, double phi_b)
        : o_(origin), e1_(e1), e2_(e2), r0_(r0), r1_(r1), pa_(phi_a), pb_(phi_b) {}
    Jet eval(double u, double v) const override {
        const double sr = 0.5 * (r1_ - r0_), sp = 0.5 * (pb_ - pa_);
        const double rho = r0_ + sr * (u + 1.0);
        const double phi = pa_ + sp * (v + 1.0);
        const Vec3 rad = std::cos(phi) * e1_ + std::sin(phi) * e2_;
        const Vec3 tan = -std::sin(phi) * e1_ + std::cos(phi) * e2_;
        Jet jet;
        jet.x = o_ + rho * rad;
        jet.xu = sr * rad;
        jet.xv = rho * sp * tan;
        return jet;
    }

private:
    Vec3 o_, e1_, e2_;
    double r0_, r1_, pa_, pb_;
};

// Quarter-torus tube; u sweeps the bend angle, v the tube angle.
class TorusChart : public Chart {
public:
    TorusChart(Vec3 bend_center, Vec3 ea, Vec3 eb, double R_bend, double a, double psi_a,
               double psi_b, double phi_a, double phi_b)
        : c_(bend_center), ea_(ea), eb_(eb), Rb_(R_bend), a_(a), sa_(psi_a), sb_(psi_b),
          pa_(phi_a), pb_(phi_b) {
        out_ = ea_.cross(eb_);
    }

    Jet eval(double u, double v) const override {
        const double ss = 0.5 * (sb_ - sa_), sp = 0.5 * (pb_ - pa_);
        const double psi = sa_ + ss * (u + 1.0);
        const double phi = pa_ + sp * (v + 1.0);
        const Vec3 rhat = std::cos(psi) * ea_ + std::sin(psi) * eb_;
        const Vec3 that = -std::sin(psi) * ea_ + std::cos(psi) * eb_;
        Jet jet;
        jet.x = c_ + Rb_ * rhat + a_ * (std::cos(phi) * rhat + std::sin(phi) * out_);
        jet.xu = ss * (Rb_ + a_ * std::cos(phi)) * that;
        jet.xv = a_ * sp * (-std::sin(phi) * rhat + std::cos(phi) * out_);
        return jet;
    }

private:
    Vec3 c_, ea_, eb_, out_;
    double Rb_, a_, sa_, sb_, pa_, pb_;
};

Patch make_patch(std::shared_ptr<const Chart> chart, int degree) {
    Patch p;
    p.chart = std::move(chart);
    p.degree = degree;
    const auto rule = fejer_rule(degree);
    const int n = degree;
    p.x.resize(n * n);
    p.normal.resize(n * n);
    p.xu.resize(n * n);
    p.xv.resize(n * n);
    p.jac.resize(n * n);
    p.weight.resize(n * n);
    Vec3 sum = Vec3::Zero();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const auto jet = p.chart->eval(rule.nodes[i], rule.nodes[j]);
            const int g = i * n + j;
            p.x[g] = jet.x;
            p.xu[g] = jet.xu;
            p.xv[g] = jet.xv;
            const Vec3 cr = jet.xu.cross(jet.xv);
            p.jac[g] = cr.norm();
            if (!(p.jac[g] > 0.0)) throw std::runtime_error("make_patch: vanishing Jacobian");
            p.normal[g] = cr / p.jac[g];
            p.weight[g] = rule.weights[i] * rule.weights[j] * p.jac[g];
            sum += jet.x;
        }
    }
    p.centroid = sum / (n * n);
    double r2 = 0.0;
    for (const auto& x : p.x) r2 = std::max(r2, (x - p.centroid).squaredNorm());
    p.bound_radius = std::sqrt(r2);
    p.diameter = 2.0 * p.bound_radius;
    return p;
}

// 5-patch hemisphere of radius a around direction d, centered at c; matches
// a cylinder of the same radius tangentially at the equator.
void append_hemisphere(std::vector<Patch>& patches, const Vec3& c, const Vec3& d, double a,
                       int degree) {
    const Vec3 t1 = unit_perp(d);
    const Vec3 t2 = d.cross(t1);
    patches.push_back(
        make_patch(std::make_shared<CubeSphereChart>(c, a, t1, t2, d, -1, 1, -1, 1), degree));
    for (int k = 0; k < 4; ++k) {
        const double th = k * pi / 2.0;
        const Vec3 en = std::cos(th) * t1 + std::sin(th) * t2;
        const Vec3 eu = -std::sin(th) * t1 + std::cos(th) * t2;
        patches.push_back(
            make_patch(std::make_shared<CubeSphereChart>(c, a, eu, d, en, -1, 1, 0, 1), degree));
    }
}

// Central square plus 4 blended sectors covering a planar disc of radius R.
void append_disc(std::vector<Patch>& patches, const Vec3& o, const Vec3& e1, const Vec3& e2,
                 double R, int degree) {
    const double h = 0.5 * R;
    patches.push_back(make_patch(std::make_shared<DiscCenterChart>(o, e1, e2, h), degree));
    for (int k = 0; k < 4; ++k)
        patches.push_back(make_patch(std::make_shared<DiscBlendChart>(o, e1, e2, h, R, k), degree));
}

}  // namespace

int SurfaceMesh::patch_of(size_t g) const {
    const auto it = std::upper_bound(patch_offset.begin(), patch_offset.end(), g);
    return static_cast<int>(it - patch_offset.begin()) - 1;
}

const Vec3& SurfaceMesh::node_x(size_t g) const {
    const int p = patch_of(g);
    return patches[p].x[g - patch_offset[p]];
}

const Vec3& SurfaceMesh::node_normal(size_t g) const {
    const int p = patch_of(g);
    return patches[p].normal[g - patch_offset[p]];
}

double SurfaceMesh::node_weight(size_t g) const {
    const int p = patch_of(g);
    return patches[p].weight[g - patch_offset[p]];
}

double SurfaceMesh::total_area() const {
    double area = 0.0;
    for (const auto& p : patches)
        for (double w : p.weight) area += w;
    return area;
}

void SurfaceMesh::finalize() {
    patch_offset.assign(patches.size() + 1, 0);
    for (size_t p = 0; p < patches.size(); ++p)
        patch_offset[p + 1] = patch_offset[p] + patches[p].nodes();
    if (guide_labels.empty()) guide_labels.assign(patches.size(), {});
    const size_t N = patch_offset.back();
    W.assign(N, 1.0);
    siw_label.assign(N, 0);
    for (size_t p = 0; p < patches.size(); ++p) {
        degree = patches[p].degree;
        for (int k = 0; k < patches[p].nodes(); ++k) {
            const size_t g = patch_offset[p] + k;
            if (!siws.empty()) {
                W[g] = eval_W(patches[p].x[k], siws, window);
                siw_label[g] = siw_label_at(patches[p].x[k], siws).value_or(0);
            }
            if (std::abs(patches[p].normal[k].norm() - 1.0) > 1e-12)
                throw std::runtime_error("SurfaceMesh: non-unit normal");
        }
    }
}

SurfaceMesh build_sphere(double radius, int per_face_divisions, int degree, const Vec3& center) {
    if (!(radius > 0.0)) throw std::domain_error("build_sphere: radius must be > 0");
    if (degree < 4) throw ConfigError("build_sphere: degree must be >= 4");
    if (per_face_divisions < 1) throw ConfigError("build_sphere: need >= 1 division per face");
    SurfaceMesh mesh;
    const Vec3 ex = Vec3::UnitX(), ey = Vec3::UnitY(), ez = Vec3::UnitZ();
    struct Face {
        Vec3 eu, ev, en;
    };
    const Face faces[6] = {{ex, ey, ez},  {ey, ex, -ez}, {ey, ez, ex},
                           {ez, ey, -ex}, {ez, ex, ey},  {ex, ez, -ey}};
    const int m = per_face_divisions;
    for (const auto& f : faces) {
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                const double ua = -1.0 + 2.0 * i / m, ub = -1.0 + 2.0 * (i + 1) / m;
                const double va = -1.0 + 2.0 * j / m, vb = -1.0 + 2.0 * (j + 1) / m;
                mesh.patches.push_back(make_patch(
                    std::make_shared<CubeSphereChart>(center, radius, f.eu, f.ev, f.en, ua, ub,
                                                      va, vb),
                    degree));
            }
        }
    }
    mesh.finalize();
    return mesh;
}

SurfaceMesh build_circular_guide(double radius, double z_min, double z_max, SiwEnd siw_ends,
                                 int axial_patches, int azimuthal_patches, int degree,
                                 const WindowParams& window) {
    if (!(radius > 0.0)) throw std::domain_error("build_circular_guide: radius must be > 0");
    if (!(z_max > z_min)) throw std::domain_error("build_circular_guide: empty z range");
    if (degree < 4) throw ConfigError("build_circular_guide: degree must be >= 4");
    window.validate();
    const bool siw_minus = siw_ends == SiwEnd::Minus || siw_ends == SiwEnd::Both;
    const bool siw_plus = siw_ends == SiwEnd::Plus || siw_ends == SiwEnd::Both;
    const double L = z_max - z_min;
    const int n_siw = (siw_minus ? 1 : 0) + (siw_plus ? 1 : 0);
    if (L < n_siw * window.A)
        throw ConfigError("build_circular_guide: window does not fit (need length >= " +
                          std::to_string(n_siw * window.A) + ")");

    SurfaceMesh mesh;
    mesh.window = window;
    if (siw_minus) {
        SIWDescriptor s;
        s.origin = Vec3(0, 0, z_min + window.A);
        s.axis = -Vec3::UnitZ();
        s.radius = radius;
        s.label = 1;
        mesh.siws.push_back(s);
    }
    if (siw_plus) {
        SIWDescriptor s;
        s.origin = Vec3(0, 0, z_max - window.A);
        s.axis = Vec3::UnitZ();
        s.radius = radius;
        s.label = siw_minus ? 2 : 1;
        mesh.siws.push_back(s);
    }

    std::vector<int> all_labels;
    for (const auto& s : mesh.siws) all_labels.push_back(s.label);

    const double phi0 = pi / 4.0;
    for (int k = 0; k < azimuthal_patches; ++k) {
        const double pa = phi0 + 2.0 * pi * k / azimuthal_patches;
        const double pb = phi0 + 2.0 * pi * (k + 1) / azimuthal_patches;
        for (int i = 0; i < axial_patches; ++i) {
            const double za = z_min + L * i / axial_patches;
            const double zb = z_min + L * (i + 1) / axial_patches;
            mesh.patches.push_back(make_patch(
                std::make_shared<CylinderChart>(Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY(),
                                                Vec3::UnitZ(), radius, pa, pb, za, zb),
                degree));
            mesh.guide_labels.push_back(all_labels);
        }
    }
    if (!siw_minus) {
        append_hemisphere(mesh.patches, Vec3(0, 0, z_min), -Vec3::UnitZ(), radius, degree);
        mesh.guide_labels.resize(mesh.patches.size());
    }
    if (!siw_plus) {
        append_hemisphere(mesh.patches, Vec3(0, 0, z_max), Vec3::UnitZ(), radius, degree);
        mesh.guide_labels.resize(mesh.patches.size());
    }
    mesh.finalize();
    return mesh;
}

double gamma_perp_required_radius(double core_radius, double transverse_decay, double decay_tol) {
    if (!(transverse_decay > 0.0))
        throw std::domain_error("gamma_perp_required_radius: decay rate must be > 0");
    return core_radius + std::log(1.0 / decay_tol) / transverse_decay;
}

SurfaceMesh build_disc(const Vec3& center, const Vec3& axis, double core_radius, double R_max,
                       int degree) {
    if (degree < 4) throw ConfigError("build_disc: degree must be >= 4");
    if (!(core_radius > 0.0) || !(R_max >= core_radius))
        throw ConfigError("build_disc: need 0 < core_radius <= R_max");
    SurfaceMesh mesh;
    const Vec3 e1 = unit_perp(axis);
    const Vec3 e2 = axis.cross(e1);  // e1 x e2 = axis
    append_disc(mesh.patches, center, e1, e2, core_radius, degree);

    // geometrically graded annular rings from the core rim to R_max
    std::vector<double> rims{core_radius};
    double width = core_radius;
    while (rims.back() < R_max * (1.0 - 1e-12)) {
        rims.push_back(std::min(rims.back() + width, R_max));
        width *= 1.8;
    }
    const double phi0 = pi / 4.0;
    for (size_t r = 0; r + 1 < rims.size(); ++r) {
        for (int k = 0; k < 4; ++k) {
            const double pa = phi0 + 2.0 * pi * k / 4.0;
            const double pb = phi0 + 2.0 * pi * (k + 1) / 4.0;
            mesh.patches.push_back(make_patch(
                std::make_shared<AnnulusChart>(center, e1, e2, rims[r], rims[r + 1], pa, pb),
                degree));
        }
    }
    mesh.finalize();
    for (const auto& p : mesh.patches)
        for (const auto& nrm : p.normal)
            if (nrm.dot(axis) < 1.0 - 1e-10)
                throw std::runtime_error("build_disc: disc orientation broke");
    return mesh;
}

SurfaceMesh build_gamma_perp(const SIWDescriptor& siw, double cut_position, double R_max,
                             int degree, double transverse_decay, double decay_tol) {
    siw.validate();
    if (siw.cross_section != CrossSectionKind::Circular)
        throw ConfigError("build_gamma_perp: only circular cross-sections are supported");
    const double a = siw.radius;
    const double required = gamma_perp_required_radius(a, transverse_decay, decay_tol);
    if (R_max <= 0.0) R_max = required;
    if (R_max < a * (1.0 + 1e-12))
        throw ConfigError("build_gamma_perp: R_max must exceed the core radius");
    if (R_max < required)
        throw ConfigError("build_gamma_perp: R_max too small for decay tolerance; need >= " +
                          std::to_string(required));
    return build_disc(siw.origin + cut_position * siw.axis, siw.axis, a, R_max, degree);
}

SurfaceMesh build_bend_demo(double radius, double bend_radius, double leg_length,
                            int azimuthal_patches, int arc_patches, int leg_axial_patches,
                            int degree, const WindowParams& window) {
    if (!(bend_radius > radius)) throw ConfigError("build_bend_demo: bend radius too small");
    if (leg_length < window.A)
        throw ConfigError("build_bend_demo: legs must be at least one window long");
    SurfaceMesh mesh;
    mesh.window = window;

    SIWDescriptor in_siw;
    in_siw.origin = Vec3(0, 0, -leg_length + window.A);
    in_siw.axis = -Vec3::UnitZ();
    in_siw.radius = radius;
    in_siw.label = 1;
    SIWDescriptor out_siw;
    out_siw.origin = Vec3(bend_radius + leg_length - window.A, 0, bend_radius);
    out_siw.axis = Vec3::UnitX();
    out_siw.radius = radius;
    out_siw.label = 2;
    mesh.siws = {in_siw, out_siw};

    const double phi0 = pi / 4.0;
    auto phi_range = [&](int k) {
        return std::pair{phi0 + 2.0 * pi * k / azimuthal_patches,
                         phi0 + 2.0 * pi * (k + 1) / azimuthal_patches};
    };

    // incoming leg along +z, ending at the origin
    for (int k = 0; k < azimuthal_patches; ++k) {
        const auto [pa, pb] = phi_range(k);
        for (int i = 0; i < leg_axial_patches; ++i) {
            const double za = -leg_length + leg_length * i / leg_axial_patches;
            const double zb = -leg_length + leg_length * (i + 1) / leg_axial_patches;
            mesh.patches.push_back(make_patch(
                std::make_shared<CylinderChart>(Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY(),
                                                Vec3::UnitZ(), radius, pa, pb, za, zb),
                degree));
            mesh.guide_labels.push_back({1});
        }
    }
    // quarter torus from +z heading to +x heading
    const Vec3 bend_center(bend_radius, 0, 0);
    for (int k = 0; k < azimuthal_patches; ++k) {
        const auto [pa, pb] = phi_range(k);
        for (int i = 0; i < arc_patches; ++i) {
            const double sa = 0.5 * pi * i / arc_patches;
            const double sb = 0.5 * pi * (i + 1) / arc_patches;
            mesh.patches.push_back(
                make_patch(std::make_shared<TorusChart>(bend_center, -Vec3::UnitX(),
                                                        Vec3::UnitZ(), bend_radius, radius, sa,
                                                        sb, pa, pb),
                           degree));
            mesh.guide_labels.push_back({});
        }
    }
    // outgoing leg along +x at height z = bend_radius
    for (int k = 0; k < azimuthal_patches; ++k) {
        const auto [pa, pb] = phi_range(k);
        for (int i = 0; i < leg_axial_patches; ++i) {
            const double xa = bend_radius + leg_length * i / leg_axial_patches;
            const double xb = bend_radius + leg_length * (i + 1) / leg_axial_patches;
            mesh.patches.push_back(make_patch(
                std::make_shared<CylinderChart>(Vec3(0, 0, bend_radius), Vec3::UnitY(),
                                                Vec3::UnitZ(), Vec3::UnitX(), radius, pa, pb, xa,
                                                xb),
                degree));
            mesh.guide_labels.push_back({2});
        }
    }
    mesh.finalize();
    return mesh;
}

SurfaceMesh build_plane_rect(double Lx, double Ly, int degree) {
    SurfaceMesh mesh;
    mesh.patches.push_back(make_patch(
        std::make_shared<PlaneRectChart>(Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY(), Lx, Ly),
        degree));
    mesh.finalize();
    return mesh;
}

namespace {

struct EdgeSamples {
    int patch;
    int edge;
    std::vector<Vec3> pts;  // dense samples along the edge
};

Vec3 edge_point(const Chart& chart, int edge, double t) {
    switch (edge) {
        case 0: return chart.eval(-1.0, t).x;
        case 1: return chart.eval(1.0, t).x;
        case 2: return chart.eval(t, -1.0).x;
        default: return chart.eval(t, 1.0).x;
    }
}

double dist_to_edge(const Chart& chart, int edge, const Vec3& p) {
    // dense scan then golden-section refinement
    const int M = 33;
    double best_t = -1.0, best_d = 1e300;
    for (int i = 0; i < M; ++i) {
        const double t = -1.0 + 2.0 * i / (M - 1);
        const double d = (edge_point(chart, edge, t) - p).norm();
        if (d < best_d) {
            best_d = d;
            best_t = t;
        }
    }
    double lo = std::max(-1.0, best_t - 2.0 / (M - 1));
    double hi = std::min(1.0, best_t + 2.0 / (M - 1));
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = (edge_point(chart, edge, c) - p).norm();
    double fd = (edge_point(chart, edge, d) - p).norm();
    for (int it = 0; it < 60; ++it) {
        if (fc < fd) {
            hi = d; d = c; fd = fc;
            c = hi - gr * (hi - lo);
            fc = (edge_point(chart, edge, c) - p).norm();
        } else {
            lo = c; c = d; fc = fd;
            d = lo + gr * (hi - lo);
            fd = (edge_point(chart, edge, d) - p).norm();
        }
    }
    return std::min(fc, fd);
}

}  // namespace

AuditResult audit_watertight(const SurfaceMesh& mesh, double match_tol) {
    const int S = 9;  // samples per audited edge
    std::vector<EdgeSamples> edges;
    for (size_t p = 0; p < mesh.patches.size(); ++p) {
        for (int e = 0; e < 4; ++e) {
            EdgeSamples es;
            es.patch = static_cast<int>(p);
            es.edge = e;
            for (int i = 0; i < 33; ++i)
                es.pts.push_back(edge_point(*mesh.patches[p].chart, e, -1.0 + 2.0 * i / 32.0));
            edges.push_back(std::move(es));
        }
    }
    AuditResult result;
    for (const auto& es : edges) {
        double worst = 0.0;
        bool matched = true;
        for (int i = 0; i < S; ++i) {
            const Vec3 p = edge_point(*mesh.patches[es.patch].chart, es.edge,
                                      -1.0 + 2.0 * i / (S - 1));
            double best = 1e300;
            for (const auto& other : edges) {
                if (other.patch == es.patch) continue;
                double coarse = 1e300;
                for (const auto& q : other.pts) coarse = std::min(coarse, (q - p).norm());
                if (coarse > best + 0.5) continue;
                const double d =
                    dist_to_edge(*mesh.patches[other.patch].chart, other.edge, p);
                best = std::min(best, d);
            }
            if (best > match_tol) {
                matched = false;
                break;
            }
            worst = std::max(worst, best);
        }
        if (matched) {
            result.matched_edge_count++;
            result.max_matched_gap = std::max(result.max_matched_gap, worst);
        } else {
            result.boundary_edge_count++;
        }
    }
    return result;
}

void mesh_dump_csv(const SurfaceMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("mesh_dump_csv: cannot open " + path);
    out << "patch,u,v,x,y,z,nx,ny,nz,weight,W,siw\n";
    char buf[512];
    const auto nodes = cheb_nodes(mesh.degree);
    for (size_t p = 0; p < mesh.patches.size(); ++p) {
        const auto& patch = mesh.patches[p];
        for (int i = 0; i < mesh.degree; ++i) {
            for (int j = 0; j < mesh.degree; ++j) {
                const int k = i * mesh.degree + j;
                const size_t g = mesh.patch_offset[p] + k;
                std::snprintf(buf, sizeof(buf),
                              "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                              p, nodes[i], nodes[j], patch.x[k].x(), patch.x[k].y(),
                              patch.x[k].z(), patch.normal[k].x(), patch.normal[k].y(),
                              patch.normal[k].z(), patch.weight[k], mesh.W[g], mesh.siw_label[g]);
                out << buf;
            }
        }
    }
}

}  // namespace wgf
