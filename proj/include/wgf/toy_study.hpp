#pragma once

#include <vector>

#include "wgf/types.hpp"
#include "wgf/windowing.hpp"

namespace wgf {

/// Parameters of the 1D windowed-truncation experiment: the integral of
/// exp(i kz z) exp(-i k0 z) / sqrt(z) over [1, inf).
struct ToyParams {
    double k0{2.0 * pi};
    double kz{0.0};
    std::vector<double> A_values;
    double alpha{0.5};

    void validate() const {
        if (!(k0 > 0.0)) throw std::domain_error("ToyParams: k0 must be > 0");
        if (!(kz >= 0.0 && kz < k0)) throw std::domain_error("ToyParams: need 0 <= kz < k0");
        if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("ToyParams: alpha in (0,1)");
        for (size_t i = 0; i + 1 < A_values.size(); ++i)
            if (!(A_values[i] < A_values[i + 1]))
                throw std::domain_error("ToyParams: A_values must be strictly ascending");
        for (double A : A_values)
            if (!(A > 1.0)) throw std::domain_error("ToyParams: A_values must be > 1");
    }
};

/// Exact value of the infinite integral via the closed-form half-line value
/// sqrt(pi/kappa) exp(-i pi/4) minus the finite part over [0,1], kappa=k0-kz.
Complex toy_reference(double k0, double kz);

/// Plain truncation to [1, A].
Complex toy_truncated(double A, const ToyParams& p);

/// Truncation to [1, A] with the slow-rise window factor w_A(z).
/// force_unit_window replaces w_A by 1 (degenerates to toy_truncated).
Complex toy_windowed(double A, const ToyParams& p, bool force_unit_window = false);

struct ToyRow {
    double A;
    double normA;     // A * |k0-kz| / (2 pi), window size per net wavelength
    double err_tr;
    double err_w;
    double order_tr;  // local decay order (-slope of log err vs log A), NaN at ends
    double order_w;
};

/// Per-A errors against toy_reference with sliding-triplet local orders.
std::vector<ToyRow> convergence_study(const ToyParams& p);

/// Least-squares decay order of err vs A restricted to A in [A_lo, A_hi].
double fitted_order(const std::vector<ToyRow>& rows, double A_lo, double A_hi, bool windowed);

void write_toy_csv(const std::vector<std::vector<ToyRow>>& tables,
                   const std::vector<double>& kz_values, const std::string& path);

}  // namespace wgf
