#pragma once

// Shared domain types: constants, dispersion relations and unit conversions.
//
// Everything dynamical in this library runs in dimensionless variables
//   t_bar = k0 t / hbar,  x_bar = k1 x,  y_bar = k2 y,
// so dimensional quantities only show up here and in projection_energy.hpp.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>

#include "photraj/errors.hpp"

namespace photraj {

using Complex = std::complex<double>;

inline constexpr Complex I{0.0, 1.0};

inline bool is_finite(Complex z) noexcept { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

struct PhysicalConstants {
    double hc_ev_nm = 1239.8;       // reproduces the printed photon energies of the light sources
    double c_m_s = 299'792'458.0;

    double hbar_c_ev_nm() const noexcept { return hc_ev_nm / (2.0 * std::numbers::pi); }

    static PhysicalConstants codata() noexcept { return {1239.841984, 299'792'458.0}; }

    void validate() const {
        if (!(hc_ev_nm > 0.0) || !(c_m_s > 0.0))
            throw DomainError("physical constants must be strictly positive");
    }
};

// Normalized directional factors (n_x, n_y) with n_x^2 + n_y^2 = 1.
class DirectionalSplit {
public:
    static DirectionalSplit from_nx(double nx) {
        if (!(nx > 0.0 && nx < 1.0))
            throw DomainError("directional factor n_x must lie in (0, 1), got " + std::to_string(nx));
        return DirectionalSplit(nx, std::sqrt(1.0 - nx * nx));
    }

    // n_x = sqrt(1/8), n_y = sqrt(7/8): the split used by the reference scenarios.
    static DirectionalSplit reference() { return from_nx(std::sqrt(1.0 / 8.0)); }

    double nx() const noexcept { return nx_; }
    double ny() const noexcept { return ny_; }

private:
    DirectionalSplit(double nx, double ny) : nx_(nx), ny_(ny) {}
    double nx_;
    double ny_;
};

inline DirectionalSplit directional_split(double nx) { return DirectionalSplit::from_nx(nx); }

struct SourceLight {
    std::string name;
    double wavelength_nm = 0.0;
};

// k0 in eV, k1..k3 in nm^-1, m0 in eV/c^2. k3 is carried but always zero here.
struct WaveNumbers {
    double k0 = 0.0;
    double k1 = 0.0;
    double k2 = 0.0;
    double k3 = 0.0;
    double m0 = 0.0;

    double spatial_norm() const noexcept { return std::sqrt(k1 * k1 + k2 * k2 + k3 * k3); }

    // k0^2 - m0^2 - (hbar c)^2 |k|^2, relative to k0^2.
    double dispersion_defect(const PhysicalConstants& consts) const noexcept {
        const double hbc = consts.hbar_c_ev_nm();
        const double k = spatial_norm();
        return (k0 * k0 - m0 * m0 - hbc * hbc * k * k) / (k0 * k0);
    }
};

inline double photon_energy(double wavelength_nm, const PhysicalConstants& consts = {}) {
    if (!(wavelength_nm > 0.0))
        throw DomainError("wavelength must be positive, got " + std::to_string(wavelength_nm));
    return consts.hc_ev_nm / wavelength_nm;
}

inline double photon_energy(const SourceLight& source, const PhysicalConstants& consts = {}) {
    return photon_energy(source.wavelength_nm, consts);
}

inline WaveNumbers wavenumbers_from_source(const SourceLight& source, const DirectionalSplit& split,
                                           const PhysicalConstants& consts = {}) {
    const double k0 = photon_energy(source, consts);
    const double k = 2.0 * std::numbers::pi / source.wavelength_nm;
    return {k0, split.nx() * k, split.ny() * k, 0.0, 0.0};
}

// v/c = hbar c |k| / k0. Exactly 1 in the massless case.
inline double massive_speed(const WaveNumbers& k, const PhysicalConstants& consts = {}) {
    if (!(k.k0 > 0.0)) throw DomainError("k0 must be positive");
    if (k.m0 == 0.0) return 1.0;
    const double v = consts.hbar_c_ev_nm() * k.spatial_norm() / k.k0;
    return std::clamp(v, 0.0, 1.0);
}

enum class Mode1D { RightPropagating, Bounded, LeftPropagating };

inline bool is_propagating(Mode1D m) noexcept { return m != Mode1D::Bounded; }

inline std::string_view to_string(Mode1D m) noexcept {
    switch (m) {
        case Mode1D::RightPropagating: return "right-propagating";
        case Mode1D::Bounded: return "bounded";
        case Mode1D::LeftPropagating: return "left-propagating";
    }
    return "?";
}

enum class ModeLabel : char { A = 'a', B = 'b', C = 'c', D = 'd' };

struct Mode2D {
    Mode1D x_mode;
    Mode1D y_mode;
    ModeLabel label;

    // (a) both propagate, (b) x bounded / y propagates, (c) x propagates / y bounded, (d) both bounded.
    static Mode2D from_axes(Mode1D x, Mode1D y) noexcept {
        const bool px = is_propagating(x);
        const bool py = is_propagating(y);
        ModeLabel l = px ? (py ? ModeLabel::A : ModeLabel::C) : (py ? ModeLabel::B : ModeLabel::D);
        return {x, y, l};
    }

    char label_char() const noexcept { return static_cast<char>(label); }

    std::string describe() const {
        auto axis = [](Mode1D m) { return is_propagating(m) ? "propagating" : "bounded"; };
        return std::string(1, label_char()) + ": x " + axis(x_mode) + ", y " + axis(y_mode);
    }
};

}  // namespace photraj
