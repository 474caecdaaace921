#include "wgf/toy_study.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "wgf/cheb.hpp"

namespace wgf {

namespace {

// Gauss-Legendre 16 on [-1,1].
constexpr int kGL = 16;
const double gl_x[kGL] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
const double gl_w[kGL] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

template <typename F>
Complex composite_gl(F&& f, double a, double b, int panels) {
    Complex sum{0.0, 0.0};
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * h;
        Complex local{0.0, 0.0};
        for (int q = 0; q < kGL; ++q) local += gl_w[q] * f(c + 0.5 * h * gl_x[q]);
        sum += 0.5 * h * local;
    }
    return sum;
}

// Integrate with panel-doubling until the change drops below tol.
template <typename F>
Complex adaptive_gl(F&& f, double a, double b, double tol, int start_panels = 4) {
    int panels = start_panels;
    Complex prev = composite_gl(f, a, b, panels);
    for (int it = 0; it < 14; ++it) {
        panels *= 2;
        const Complex next = composite_gl(f, a, b, panels);
        if (std::abs(next - prev) < tol) return next;
        prev = next;
    }
    throw AccuracyError("adaptive_gl: no convergence to requested tolerance");
}

int panels_for(double kappa, double a, double b, int min_panels = 4) {
    // >= 20 points per oscillation period; 16-point panels sized at most
    // 0.8 periods give 20/period.
    const double period = 2.0 * pi / kappa;
    const double span = b - a;
    const int p = static_cast<int>(std::ceil(span / (0.8 * period)));
    return std::max(min_panels, p);
}

}  // namespace

Complex toy_reference(double k0, double kz) {
    const double kappa = k0 - kz;
    if (!(kappa > 0.0))
        throw std::domain_error("toy_reference: k0 - kz must be > 0 (vanishing oscillation)");
    // integral over [0,1] of exp(-i kappa z)/sqrt(z), z = t^2
    const auto finite = adaptive_gl(
        [kappa](double t) { return 2.0 * std::exp(-iu * kappa * t * t); }, 0.0, 1.0, 1e-13);
    const Complex half_line = std::sqrt(pi / kappa) * std::exp(-iu * (pi / 4.0));
    return half_line - finite;
}

Complex toy_truncated(double A, const ToyParams& p) {
    p.validate();
    if (A < 1.0) throw std::domain_error("toy_truncated: A must be >= 1");
    if (A == 1.0) return Complex{0.0, 0.0};
    const double kappa = p.k0 - p.kz;
    const auto f = [kappa](double z) { return std::exp(-iu * kappa * z) / std::sqrt(z); };
    const int panels = panels_for(kappa, 1.0, A);
    const Complex v1 = composite_gl(f, 1.0, A, panels);
    const Complex v2 = composite_gl(f, 1.0, A, 2 * panels);
    if (std::abs(v2 - v1) > 1e-10)
        throw AccuracyError("toy_truncated: quadrature doubling check failed");
    return v2;
}

Complex toy_windowed(double A, const ToyParams& p, bool force_unit_window) {
    p.validate();
    if (A < 1.0) throw std::domain_error("toy_windowed: A must be >= 1");
    if (A == 1.0) return Complex{0.0, 0.0};
    const double kappa = p.k0 - p.kz;
    const WindowParams wp{A, p.alpha, 0.0};
    const auto f = [&](double z) {
        const double w = force_unit_window ? 1.0 : eval_w(z, wp);
        return w * std::exp(-iu * kappa * z) / std::sqrt(z);
    };
    // Split at the plateau end so each piece sees a smooth factor.
    const double split = std::clamp(p.alpha * A, 1.0, A);
    Complex total{0.0, 0.0};
    for (auto [a, b] : {std::pair{1.0, split}, std::pair{split, A}}) {
        if (b - a < 1e-14) continue;
        const int panels = panels_for(kappa, a, b, 8);
        const Complex v1 = composite_gl(f, a, b, panels);
        const Complex v2 = composite_gl(f, a, b, 2 * panels);
        if (std::abs(v2 - v1) > 1e-10)
            throw AccuracyError("toy_windowed: quadrature doubling check failed");
        total += v2;
    }
    return total;
}

std::vector<ToyRow> convergence_study(const ToyParams& p) {
    p.validate();
    if (p.A_values.size() < 4)
        throw std::domain_error("convergence_study: need at least 4 window sizes");
    const Complex ref = toy_reference(p.k0, p.kz);
    const int n = static_cast<int>(p.A_values.size());
    std::vector<ToyRow> rows(n);
    for (int i = 0; i < n; ++i) {
        const double A = p.A_values[i];
        rows[i].A = A;
        rows[i].normA = A * std::abs(p.k0 - p.kz) / (2.0 * pi);
        rows[i].err_tr = std::abs(toy_truncated(A, p) - ref);
        rows[i].err_w = std::abs(toy_windowed(A, p) - ref);
        rows[i].order_tr = rows[i].order_w = std::nan("");
    }
    // sliding-triplet least-squares slope of log(err) vs log(A), negated
    auto triplet_order = [&](int i, bool windowed) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (int j = i - 1; j <= i + 1; ++j) {
            const double x = std::log(rows[j].A);
            const double e = windowed ? rows[j].err_w : rows[j].err_tr;
            const double y = std::log(std::max(e, 1e-300));
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        const double slope = (3.0 * sxy - sx * sy) / (3.0 * sxx - sx * sx);
        return -slope;
    };
    for (int i = 1; i + 1 < n; ++i) {
        rows[i].order_tr = triplet_order(i, false);
        rows[i].order_w = triplet_order(i, true);
    }
    return rows;
}

double fitted_order(const std::vector<ToyRow>& rows, double A_lo, double A_hi, bool windowed) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto& r : rows) {
        if (r.A < A_lo || r.A > A_hi) continue;
        const double e = windowed ? r.err_w : r.err_tr;
        const double x = std::log(r.A);
        const double y = std::log(std::max(e, 1e-300));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++m;
    }
    if (m < 2) throw std::domain_error("fitted_order: fewer than 2 points in range");
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return -slope;
}

void write_toy_csv(const std::vector<std::vector<ToyRow>>& tables,
                   const std::vector<double>& kz_values, const std::string& path) {
    if (tables.size() != kz_values.size())
        throw std::invalid_argument("write_toy_csv: size mismatch");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_toy_csv: cannot open " + path);
    out << "kz,A,normA,err_tr,err_w,order_tr,order_w\n";
    char buf[256];
    for (size_t t = 0; t < tables.size(); ++t) {
        for (const auto& r : tables[t]) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                          kz_values[t], r.A, r.normA, r.err_tr, r.err_w, r.order_tr, r.order_w);
            out << buf;
        }
    }
}

}  // namespace wgf
