#include "wgf/modes.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace wgf {

BesselValue bessel_j(int order, double x) {
    if (order < 0) throw std::domain_error("bessel_j: order must be >= 0");
    if (!(x > 0.0)) throw std::domain_error("bessel_j: x must be > 0");
    const int top = order + 1;
    // Miller backward recurrence normalized by J0 + 2*sum J_{2k} = 1
    const int M = static_cast<int>(std::max<double>(top, x)) + 24 +
                  static_cast<int>(8.0 * std::sqrt(std::max<double>(top, x)));
    std::vector<double> j(M + 2, 0.0);
    j[M + 1] = 0.0;
    j[M] = 1e-30;
    double norm = 0.0;
    for (int m = M; m >= 1; --m) {
        j[m - 1] = (2.0 * m / x) * j[m] - j[m + 1];
        if (m - 1 > 0 && (m - 1) % 2 == 0) norm += 2.0 * j[m - 1];
        // rescale to avoid overflow
        if (std::abs(j[m - 1]) > 1e250) {
            for (int i = m - 1; i <= M + 1; ++i) j[i] *= 1e-250;
            norm *= 1e-250;
        }
    }
    norm += j[0];
    BesselValue out;
    out.value = j[order] / norm;
    out.derivative = order == 0 ? -j[1] / norm : 0.5 * (j[order - 1] - j[order + 1]) / norm;
    return out;
}

BesselValue bessel_k(int order, double x) {
    if (order < 0) throw std::domain_error("bessel_k: order must be >= 0");
    if (!(x > 0.0)) throw std::domain_error("bessel_k: x must be > 0");
    BesselValue out;
    out.value = std::cyl_bessel_k(static_cast<double>(order), x);
    const double km1 = std::cyl_bessel_k(static_cast<double>(std::abs(order - 1)), x);
    const double kp1 = std::cyl_bessel_k(static_cast<double>(order + 1), x);
    out.derivative = -0.5 * (km1 + kp1);
    return out;
}

ModeFrame ModeFrame::along(const Vec3& origin, const Vec3& prop) {
    ModeFrame f;
    f.origin = origin;
    f.prop = prop.normalized();
    Vec3 trial = std::abs(f.prop.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    f.e1 = (trial - f.prop.dot(trial) * f.prop).normalized();
    f.e2 = f.prop.cross(f.e1);
    return f;
}

namespace {

struct GuideParams {
    double k0, ni, ne, a, V;
};

// dimensionless dispersion function in b = (kz^2-ke^2)/(ki^2-ke^2)
double dispersion_f(const GuideParams& g, int nu, double b) {
    const double u = g.V * std::sqrt(1.0 - b);
    const double w = g.V * std::sqrt(b);
    const auto ju = bessel_j(nu, u);
    const auto kw = bessel_k(nu, w);
    const double Jt = ju.derivative / (u * ju.value);
    const double Kt = kw.derivative / (w * kw.value);
    const double f1 = Jt + Kt;
    const double f2 = g.ni * g.ni * Jt + g.ne * g.ne * Kt;
    const double beta2 = g.k0 * g.k0 * (g.ne * g.ne + b * (g.ni * g.ni - g.ne * g.ne));
    const double inv = 1.0 / (u * u) + 1.0 / (w * w);
    return f1 * f2 - nu * nu * (beta2 / (g.k0 * g.k0)) * inv * inv;
}

// continuity system rows (Ez, Hz, Ephi, Hphi at rho = a) for the amplitude
// null vector
Eigen::Matrix4cd continuity_matrix(const GuideParams& g, int nu, double kz, double omega,
                                   const MaterialPair& mats) {
    const double a = g.a;
    const double u = a * std::sqrt(g.k0 * g.k0 * g.ni * g.ni - kz * kz);
    const double w = a * std::sqrt(kz * kz - g.k0 * g.k0 * g.ne * g.ne);
    const double kap = u / a, gam = w / a;
    const auto ju = bessel_j(nu, u);
    const auto kw = bessel_k(nu, w);
    const Complex pre_i = iu / (kap * kap);
    const Complex pre_e = -iu / (gam * gam);
    const double s1j = nu * ju.value / a;      // (nu/rho) J at rho=a
    const double s2j = kap * ju.derivative;    // d/drho J
    const double s1k = nu * kw.value / a;
    const double s2k = gam * kw.derivative;
    const Complex eps_i = mats.interior.epsilon, eps_e = mats.exterior.epsilon;
    const Complex mu_i = mats.interior.mu, mu_e = mats.exterior.mu;

    Eigen::Matrix4cd M = Eigen::Matrix4cd::Zero();
    // columns: A_E, A_H, B_E, B_H
    M(0, 0) = ju.value;
    M(0, 2) = -kw.value;
    M(1, 1) = ju.value;
    M(1, 3) = -kw.value;
    // Ephi = pre [ i kz s1 * (Ez amp) - omega mu s2 * (Hz amp) ]
    M(2, 0) = pre_i * iu * kz * s1j;
    M(2, 1) = -pre_i * omega * mu_i * s2j;
    M(2, 2) = -pre_e * iu * kz * s1k;
    M(2, 3) = pre_e * omega * mu_e * s2k;
    // Hphi = pre [ i kz s1 * (Hz amp) + omega eps s2 * (Ez amp) ]
    M(3, 0) = pre_i * omega * eps_i * s2j;
    M(3, 1) = pre_i * iu * kz * s1j;
    M(3, 2) = -pre_e * omega * eps_e * s2k;
    M(3, 3) = -pre_e * iu * kz * s1k;
    return M;
}

// cylindrical field components at transverse radius rho, phase factor left out
struct CylField {
    Complex Ez, Erho, Ephi, Hz, Hrho, Hphi;
};

}  // namespace

double dispersion_residual(const ModeSolution& mode) {
    GuideParams g;
    g.k0 = mode.omega;
    g.ni = std::sqrt(mode.mats.interior.epsilon.real() * mode.mats.interior.mu.real());
    g.ne = std::sqrt(mode.mats.exterior.epsilon.real() * mode.mats.exterior.mu.real());
    g.a = mode.core_radius;
    g.V = g.k0 * g.a * std::sqrt(g.ni * g.ni - g.ne * g.ne);
    const double ke = g.k0 * g.ne, ki = g.k0 * g.ni;
    const double b = (mode.kz * mode.kz - ke * ke) / (ki * ki - ke * ke);
    return std::abs(dispersion_f(g, mode.m_az, b));
}

std::vector<ModeSolution> solve_modes(const Material& core, const Material& clad, double radius,
                                      double omega, int m_az_max) {
    if (!(radius > 0.0)) throw std::domain_error("solve_modes: radius must be > 0");
    GuideParams g;
    g.k0 = omega;  // c = 1 units
    g.ni = std::sqrt(core.epsilon.real() * core.mu.real());
    g.ne = std::sqrt(clad.epsilon.real() * clad.mu.real());
    g.a = radius;
    if (!(g.ni > g.ne)) return {};  // no guiding contrast
    g.V = g.k0 * g.a * std::sqrt(g.ni * g.ni - g.ne * g.ne);
    const double ke = g.k0 * g.ne, ki = g.k0 * g.ni;

    MaterialPair mats{core, clad};
    std::vector<ModeSolution> modes;
    const int scan = 4000;
    const double b_lo = 1e-9, b_hi = 1.0 - 1e-9;
    for (int nu = 0; nu <= m_az_max; ++nu) {
        double prev_b = b_lo;
        double prev_f = dispersion_f(g, nu, prev_b);
        for (int i = 1; i <= scan; ++i) {
            const double b = b_lo + (b_hi - b_lo) * i / scan;
            const double f = dispersion_f(g, nu, b);
            if (std::isfinite(prev_f) && std::isfinite(f) && prev_f * f < 0.0) {
                double lo = prev_b, hi = b, flo = prev_f;
                for (int it = 0; it < 200; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = dispersion_f(g, nu, mid);
                    if (flo * fm <= 0.0) {
                        hi = mid;
                    } else {
                        lo = mid;
                        flo = fm;
                    }
                    if (hi - lo < 1e-16) break;
                }
                const double b_root = 0.5 * (lo + hi);
                const double f_root = std::abs(dispersion_f(g, nu, b_root));
                if (f_root < 1e-9) {  // rejects poles of the scan function
                    ModeSolution m;
                    m.m_az = nu;
                    m.kz = std::sqrt(ke * ke + b_root * (ki * ki - ke * ke));
                    m.u = g.V * std::sqrt(1.0 - b_root);
                    m.w = g.V * std::sqrt(b_root);
                    m.residual = f_root;
                    m.core_radius = radius;
                    m.omega = omega;
                    m.mats = mats;
                    // amplitude null vector of the continuity system
                    const Eigen::Matrix4cd M = continuity_matrix(g, nu, m.kz, omega, mats);
                    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(M, Eigen::ComputeFullV);
                    m.amps = svd.matrixV().col(3);
                    // deterministic phase: largest component real positive
                    int big = 0;
                    for (int c = 1; c < 4; ++c)
                        if (std::abs(m.amps[c]) > std::abs(m.amps[big])) big = c;
                    m.amps *= std::abs(m.amps[big]) / m.amps[big];
                    const double P = mode_axial_power(m);
                    m.amps /= std::sqrt(P);
                    modes.push_back(std::move(m));
                }
            }
            prev_b = b;
            prev_f = f;
        }
    }
    std::sort(modes.begin(), modes.end(),
              [](const ModeSolution& x, const ModeSolution& y) { return x.kz > y.kz; });
    return modes;
}

namespace {

CylField cyl_fields(const ModeSolution& mode, double rho) {
    const double a = mode.core_radius;
    const double kap = mode.u / a, gam = mode.w / a;
    const int nu = mode.m_az >= 0 ? mode.m_az : -mode.m_az;
    const double om = mode.omega;
    CylField f;
    if (rho <= a) {
        const Complex A_E = mode.amps[0], A_H = mode.amps[1];
        const Complex pre = iu / (kap * kap);
        const double x = kap * rho;
        double Jv, s1, s2;
        if (x < 1e-6) {
            // leading series terms keep the on-axis limits finite
            double pw = 1.0;  // (x/2)^nu / nu!
            double pwm1 = nu >= 1 ? 1.0 : 0.0;  // (x/2)^(nu-1) / (nu-1)!
            for (int k = 1; k <= nu; ++k) pw *= 0.5 * x / k;
            for (int k = 1; k <= nu - 1; ++k) pwm1 *= 0.5 * x / k;
            Jv = pw * (1.0 - x * x / (4.0 * (nu + 1.0)));
            s1 = nu == 0 ? 0.0 : kap * 0.5 * pwm1 * (1.0 - x * x / (4.0 * (nu + 1.0)));
            const double dj = nu == 0 ? -0.5 * x * (1.0 - x * x / 8.0)
                                      : 0.5 * pwm1 * (1.0 - x * x * (nu + 2.0) /
                                                                (4.0 * nu * (nu + 1.0)));
            s2 = kap * dj;
        } else {
            const auto j = bessel_j(nu, x);
            Jv = j.value;
            s1 = nu * j.value / rho;
            s2 = kap * j.derivative;
        }
        const Complex mu_i = mode.mats.interior.mu, eps_i = mode.mats.interior.epsilon;
        f.Ez = A_E * Jv;
        f.Hz = A_H * Jv;
        f.Erho = pre * (mode.kz * A_E * s2 + iu * om * mu_i * A_H * s1);
        f.Ephi = pre * (iu * mode.kz * A_E * s1 - om * mu_i * A_H * s2);
        f.Hrho = pre * (mode.kz * A_H * s2 - iu * om * eps_i * A_E * s1);
        f.Hphi = pre * (iu * mode.kz * A_H * s1 + om * eps_i * A_E * s2);
    } else {
        const Complex B_E = mode.amps[2], B_H = mode.amps[3];
        const Complex pre = -iu / (gam * gam);
        const auto k = bessel_k(nu, gam * rho);
        const double s1 = nu * k.value / rho;
        const double s2 = gam * k.derivative;
        const Complex mu_e = mode.mats.exterior.mu, eps_e = mode.mats.exterior.epsilon;
        f.Ez = B_E * k.value;
        f.Hz = B_H * k.value;
        f.Erho = pre * (mode.kz * B_E * s2 + iu * om * mu_e * B_H * s1);
        f.Ephi = pre * (iu * mode.kz * B_E * s1 - om * mu_e * B_H * s2);
        f.Hrho = pre * (mode.kz * B_H * s2 - iu * om * eps_e * B_E * s1);
        f.Hphi = pre * (iu * mode.kz * B_H * s1 + om * eps_e * B_E * s2);
    }
    return f;
}

}  // namespace

EmField mode_fields(const ModeSolution& mode, const Vec3& r) {
    return mode_fields(mode, ModeFrame{}, r);
}

EmField mode_fields(const ModeSolution& mode, const ModeFrame& frame, const Vec3& r) {
    const Vec3 rel = r - frame.origin;
    const double z = frame.prop.dot(rel);
    const double xi = frame.e1.dot(rel), eta = frame.e2.dot(rel);
    const double rho = std::hypot(xi, eta);
    const double phi = std::atan2(eta, xi);
    const auto f = cyl_fields(mode, rho);
    const Complex phase = std::exp(iu * (mode.m_az * phi + mode.kz * z));
    const Vec3 rhat = rho > 1e-14 * mode.core_radius
                          ? Vec3(std::cos(phi) * frame.e1 + std::sin(phi) * frame.e2)
                          : frame.e1;
    const Vec3 phat = frame.prop.cross(rhat);
    EmField out;
    out.E = phase * (f.Erho * rhat.cast<Complex>() + f.Ephi * phat.cast<Complex>() +
                     f.Ez * frame.prop.cast<Complex>());
    out.H = phase * (f.Hrho * rhat.cast<Complex>() + f.Hphi * phat.cast<Complex>() +
                     f.Hz * frame.prop.cast<Complex>());
    return out;
}

double mode_axial_power(const ModeSolution& mode) {
    // 2 pi int (1/2) Re(Erho Hphi* - Ephi Hrho*) rho drho, azimuthal phase
    // factors cancel
    const double a = mode.core_radius;
    const double gam = mode.w / a;
    auto integrand = [&](double rho) {
        const auto f = cyl_fields(mode, rho);
        return 0.5 * (f.Erho * std::conj(f.Hphi) - f.Ephi * std::conj(f.Hrho)).real() * rho;
    };
    auto segment = [&](double lo, double hi, int panels) {
        // composite 16-point Gauss
        static const double gx[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                                     0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                                     0.9445750230732326, 0.9894009349916499};
        static const double gw[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                                     0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                                     0.0622535239386479, 0.0271524594117541};
        double sum = 0.0;
        const double h = (hi - lo) / panels;
        for (int p = 0; p < panels; ++p) {
            const double c = lo + (p + 0.5) * h;
            for (int q = 0; q < 8; ++q)
                sum += gw[q] * (integrand(c + 0.5 * h * gx[q]) + integrand(c - 0.5 * h * gx[q]));
        }
        return 0.5 * h * sum;
    };
    const double inner = segment(0.0, a, 24);
    const double outer = segment(a, a + 30.0 / gam, 96);
    return 2.0 * pi * (inner + outer);
}

void write_modes_csv(const std::vector<ModeSolution>& modes, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_modes_csv: cannot open " + path);
    out << "m_az,kz_over_k0,u,w,residual\n";
    char buf[256];
    for (const auto& m : modes) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", m.m_az,
                      m.kz / m.omega, m.u, m.w, m.residual);
        out << buf;
    }
}

}  // namespace wgf
