#pragma once

// Separable two-dimensional dynamics. The state
//
//     Psi = e^{it} (A e^{ix} + e^{-ix}) (B e^{iy} + e^{-iy})
//
// decouples into one axis model per coordinate, each scaled by its directional
// factor:  dx/dt = n_x f_A(x),  dy/dt = n_y f_B(y).

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "photraj/core_model.hpp"
#include "photraj/dynamics1d.hpp"
#include "photraj/errors.hpp"
#include "photraj/numerics.hpp"

namespace photraj {

struct InitialCondition2D {
    Complex x0;
    Complex y0;
    Complex vx0;
    Complex vy0;
};

struct Scenario2D {
    DirectionalSplit split;
    InitialCondition2D ic;
    std::optional<ModeLabel> reference_label;  // mode the scenario is documented to show
    std::string provenance;                    // e.g. "Table 1 mode d"
};

struct WeightPair {
    SuperpositionWeight A;
    SuperpositionWeight B;
};

struct ConstantPair {
    IntegrationConstant D;
    IntegrationConstant J;
};

namespace detail {

template <class F>
auto per_axis(const char* axis, F&& f) {
    try {
        return f();
    } catch (const NearSingular& e) {
        throw NearSingular(std::string(axis) + " axis: " + e.what());
    }
}

}  // namespace detail

inline WeightPair weights_2d(const Scenario2D& s) {
    const auto& [x0, y0, vx0, vy0] = s.ic;
    return {detail::per_axis("x", [&] { return weight_from_velocity(x0, vx0 / s.split.nx()); }),
            detail::per_axis("y", [&] { return weight_from_velocity(y0, vy0 / s.split.ny()); })};
}

inline ConstantPair constants_2d(const Scenario2D& s) {
    const auto& [x0, y0, vx0, vy0] = s.ic;
    return {detail::per_axis("x", [&] { return constant_from_velocity(x0, vx0 / s.split.nx()); }),
            detail::per_axis("y", [&] { return constant_from_velocity(y0, vy0 / s.split.ny()); })};
}

struct Velocity2D {
    Complex vx;
    Complex vy;
    double denom_x;
    double denom_y;
};

inline Velocity2D velocity_2d(const SuperpositionWeight& a, const SuperpositionWeight& b, const DirectionalSplit& split,
                              Complex x, Complex y) {
    const AxisVelocity vx = axis_velocity(a, x, split.nx());
    const AxisVelocity vy = axis_velocity(b, y, split.ny());
    return {vx.velocity, vy.velocity, vx.denom_mag, vy.denom_mag};
}

inline Mode2D classify_2d(const Scenario2D& s) {
    return Mode2D::from_axes(classify_axis(s.ic.vx0, s.split.nx()), classify_axis(s.ic.vy0, s.split.ny()));
}

inline Trajectory run_2d(const Scenario2D& s, double t_end, const IntegratorConfig& cfg = {}) {
    if (!(t_end > 0)) throw DomainError("t_end must be positive");
    const WeightPair w = weights_2d(s);
    auto field = [&](double, std::span<const Complex> st, std::span<Complex> dy) {
        const Velocity2D v = velocity_2d(w.A, w.B, s.split, st[0], st[1]);
        dy[0] = v.vx;
        dy[1] = v.vy;
        return FieldStatus::worst({v.denom_x, 0}, {v.denom_y, 1});
    };
    const Complex y0[2] = {s.ic.x0, s.ic.y0};
    return integrate(field, y0, 0.0, t_end, cfg);
}

// Reference scenarios: split (sqrt(1/8), sqrt(7/8)), all initial positions zero,
// real velocity parts equal to the directional factors.
inline Scenario2D table1_preset(char label) {
    const DirectionalSplit split = DirectionalSplit::reference();
    const double nx = split.nx(), ny = split.ny();
    auto make = [&](double vxi, double vyi, ModeLabel l) {
        return Scenario2D{split,
                          {0.0, 0.0, {nx, vxi}, {ny, vyi}},
                          l,
                          std::string("Table 1 mode ") + static_cast<char>(l)};
    };
    switch (label) {
        case 'a': return make(0.11, -0.0614, ModeLabel::A);
        case 'b': return make(-0.75, -0.2714, ModeLabel::B);
        case 'c': return make(0.24995, -0.6614, ModeLabel::C);
        case 'd': return make(-0.24699, -0.67642, ModeLabel::D);
        default: throw DomainError(std::string("unknown Table 1 mode '") + label + "'");
    }
}

// Mode (d) with the rounded velocities vx_I = -0.25, vy_I = -0.6614.
inline Scenario2D mode_d_alternate_preset() {
    Scenario2D s = table1_preset('d');
    s.ic.vx0 = {s.split.nx(), -0.25};
    s.ic.vy0 = {s.split.ny(), -0.6614};
    s.provenance = "Fig. 8 mode d (alternate velocities)";
    return s;
}

// "table1-a" .. "table1-d", "mode-d-alt".
inline Scenario2D preset_by_name(std::string_view name) {
    if (name.size() == 8 && name.substr(0, 7) == "table1-") return table1_preset(name[7]);
    if (name == "mode-d-alt") return mode_d_alternate_preset();
    throw DomainError("unknown preset '" + std::string(name) + "'");
}

}  // namespace photraj
