#pragma once

// Klein-Gordon and separated-equation residuals of the plane-wave states.
//
// In dimensionless variables the massless operator (1/c^2) d_t^2 - laplacian
// becomes  d_t^2 - n_x^2 d_x^2 - n_y^2 d_y^2  (n = 1 in 1D). All derivatives are
// taken analytically from the explicit exponentials. time_frequency scales the
// temporal wavenumber k0 and exists to probe a broken dispersion relation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

#include "photraj/core_model.hpp"
#include "photraj/dynamics1d.hpp"

namespace photraj {

struct ResidualReport {
    double max_abs = 0;
    double max_rel = 0;
    std::size_t points_checked = 0;

    void add(Complex residual, Complex reference) {
        const double a = std::abs(residual);
        max_abs = std::max(max_abs, a);
        if (std::abs(reference) > 0) max_rel = std::max(max_rel, a / std::abs(reference));
        ++points_checked;
    }
    void merge(const ResidualReport& o) {
        max_abs = std::max(max_abs, o.max_abs);
        max_rel = std::max(max_rel, o.max_rel);
        points_checked += o.points_checked;
    }
};

struct SpacetimePoint1D {
    double t;
    Complex x;
};

struct SpacetimePoint2D {
    double t;
    Complex x;
    Complex y;
};

// Spatial factor of one axis, C+ e^{ix} + C- e^{-ix} normalized to C- = 1
// (or C- = 0 for the plus eigenstate), with its first two derivatives.
struct AxisFactor {
    Complex value;
    Complex d1;
    Complex d2;
};

inline AxisFactor axis_factor(const SuperpositionWeight& w, Complex x) {
    const Complex ep = std::exp(I * x);
    if (w.is_plus_eigenstate()) return {ep, I * ep, -ep};
    const Complex a = w.value();
    const Complex em = std::exp(-I * x);
    return {a * ep + em, I * a * ep - I * em, -a * ep - em};
}

struct TimeFactor {
    Complex value;
    Complex d2;
};

inline TimeFactor time_factor(double t, double omega) {
    const Complex e = std::exp(I * (omega * t));
    return {e, -omega * omega * e};
}

inline ResidualReport kg_residual_1d(const SuperpositionWeight& w, std::span<const SpacetimePoint1D> points,
                                     double time_frequency = 1.0) {
    ResidualReport rep;
    for (const auto& p : points) {
        const TimeFactor tf = time_factor(p.t, time_frequency);
        const AxisFactor xf = axis_factor(w, p.x);
        rep.add(tf.d2 * xf.value - tf.value * xf.d2, tf.value * xf.value);
    }
    return rep;
}

// nx and ny are taken as given, not normalized, so a split off the unit circle
// shows up as a residual.
inline ResidualReport kg_residual_2d(const SuperpositionWeight& a, const SuperpositionWeight& b, double nx, double ny,
                                     std::span<const SpacetimePoint2D> points, double time_frequency = 1.0) {
    ResidualReport rep;
    for (const auto& p : points) {
        const TimeFactor tf = time_factor(p.t, time_frequency);
        const AxisFactor xf = axis_factor(a, p.x);
        const AxisFactor yf = axis_factor(b, p.y);
        const Complex psi = tf.value * xf.value * yf.value;
        const Complex res = tf.d2 * xf.value * yf.value - nx * nx * tf.value * xf.d2 * yf.value -
                            ny * ny * tf.value * xf.value * yf.d2;
        rep.add(res, psi);
    }
    return rep;
}

// X''/X = -1 for the spatial factor of one axis.
inline ResidualReport helmholtz_residual(const SuperpositionWeight& w, std::span<const Complex> xs) {
    ResidualReport rep;
    for (Complex x : xs) {
        const AxisFactor f = axis_factor(w, x);
        rep.add(f.d2 + f.value, f.value);
    }
    return rep;
}

// T''/T = -omega^2 for the time factor.
inline ResidualReport time_helmholtz_residual(std::span<const double> ts, double omega = 1.0) {
    ResidualReport rep;
    for (double t : ts) {
        const TimeFactor f = time_factor(t, omega);
        rep.add(f.d2 + omega * omega * f.value, f.value);
    }
    return rep;
}

}  // namespace photraj
