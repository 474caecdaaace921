#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wgf {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr Complex iu{0.0, 1.0};

/// Thrown when a run configuration is inconsistent or infeasible.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when a quadrature self-check indicates insufficient resolution.
class AccuracyError : public std::runtime_error {
public:
    explicit AccuracyError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when an operation is invoked before its required state was built.
class StateError : public std::runtime_error {
public:
    explicit StateError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Homogeneous material region. Lengths are in vacuum wavelengths, c = 1,
/// so omega = 2*pi and k = omega*sqrt(eps*mu).
struct Material {
    Complex epsilon{1.0, 0.0};
    Complex mu{1.0, 0.0};
    double omega{2.0 * pi};
    Complex k{2.0 * pi, 0.0};

    static Material from_index(Complex refractive_index, double omega = 2.0 * pi) {
        Material m;
        m.epsilon = refractive_index * refractive_index;
        m.mu = Complex{1.0, 0.0};
        m.omega = omega;
        m.k = omega * std::sqrt(m.epsilon * m.mu);
        if (m.k.imag() < 0.0) m.k = -m.k;
        return m;
    }

    void validate() const {
        if (omega <= 0.0) throw std::domain_error("Material: omega must be > 0");
        const Complex kk = omega * std::sqrt(epsilon * mu);
        if (std::abs(kk - k) > 1e-14 * std::abs(k))
            throw std::domain_error("Material: k inconsistent with omega*sqrt(eps*mu)");
        if (k.imag() < -1e-15) throw std::domain_error("Material: Im(k) must be >= 0");
    }
};

/// Interior (core) and exterior (cladding) material pair sharing one omega.
struct MaterialPair {
    Material interior;
    Material exterior;

    void validate() const {
        interior.validate();
        exterior.validate();
        if (interior.omega != exterior.omega)
            throw std::domain_error("MaterialPair: omega must be shared");
    }
};

}  // namespace wgf
