#pragma once

// One-dimensional complex photon dynamics.
//
// The photon state is the superposition C+ e^{ix} + C- e^{-ix} of right and
// left plane waves; with A = C+/C- the dimensionless guidance equation is
//
//     dx/dt = n (A e^{ix} - e^{-ix}) / (A e^{ix} + e^{-ix}),
//
// where n = 1 in one dimension and n = n_x or n_y for one axis of the
// separable two-dimensional state (see dynamics2d.hpp). Along every solution
// A e^{ix} - e^{-ix} = D e^{i n t}, with D fixed by the initial condition.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "photraj/core_model.hpp"
#include "photraj/errors.hpp"
#include "photraj/numerics.hpp"

namespace photraj {

// Relative weight A = C+/C- of the two plane-wave components. finite(0) is the
// pure left-moving eigenstate; plus_eigenstate() is the A -> infinity limit.
class SuperpositionWeight {
public:
    static SuperpositionWeight finite(Complex a) {
        if (!is_finite(a)) throw DomainError("superposition weight must be finite");
        return SuperpositionWeight(false, a);
    }
    static SuperpositionWeight plus_eigenstate() noexcept { return SuperpositionWeight(true, 0.0); }

    bool is_finite_weight() const noexcept { return !plus_; }
    bool is_plus_eigenstate() const noexcept { return plus_; }
    bool is_minus_eigenstate() const noexcept { return !plus_ && a_ == Complex(0.0); }
    bool is_eigenstate() const noexcept { return plus_ || a_ == Complex(0.0); }

    Complex value() const {
        if (plus_) throw DomainError("the plus eigenstate has no finite weight");
        return a_;
    }
    // A_r = ln|A| and A_theta = arg A, for finite nonzero A.
    double log_magnitude() const { return std::log(std::abs(nonzero())); }
    double phase() const { return std::arg(nonzero()); }

private:
    SuperpositionWeight(bool plus, Complex a) : plus_(plus), a_(a) {}
    Complex nonzero() const {
        if (is_eigenstate()) throw DomainError("operation needs a finite nonzero superposition weight");
        return a_;
    }
    bool plus_;
    Complex a_;
};

struct InitialCondition1D {
    Complex x0;
    Complex v0;
};

struct IntegrationConstant {
    Complex D;
};

struct AxisVelocity {
    Complex velocity;
    double denom_mag;  // |A e^{ix} + e^{-ix}|; +inf for the plus eigenstate
};

inline constexpr double kNearSingularThreshold = 1e-12;

// Margins within this distance of the mode threshold classify as bounded.
inline constexpr double kModeBoundaryTol = 1e-12;

// Weight from an initial position and the normalized initial velocity u = v0/n.
inline SuperpositionWeight weight_from_velocity(Complex x0, Complex u) {
    if (u == Complex(1.0)) return SuperpositionWeight::plus_eigenstate();
    if (u == Complex(-1.0)) return SuperpositionWeight::finite(0.0);
    if (std::abs(1.0 - u) < kNearSingularThreshold)
        throw NearSingular("initial velocity too close to the eigenstate value (|1 - v0| < 1e-12)");
    return SuperpositionWeight::finite((1.0 + u) / (1.0 - u) * std::exp(-2.0 * I * x0));
}

inline IntegrationConstant constant_from_velocity(Complex x0, Complex u) {
    if (std::abs(1.0 - u) < kNearSingularThreshold)
        throw NearSingular("integration constant undefined for |1 - v0| < 1e-12");
    return {2.0 * u / (1.0 - u) * std::exp(-I * x0)};
}

inline SuperpositionWeight weight_from_ic(const InitialCondition1D& ic) { return weight_from_velocity(ic.x0, ic.v0); }

inline IntegrationConstant integration_constant(const InitialCondition1D& ic) {
    return constant_from_velocity(ic.x0, ic.v0);
}

inline AxisVelocity axis_velocity(const SuperpositionWeight& w, Complex x, double n = 1.0) {
    if (w.is_plus_eigenstate()) return {n, std::numeric_limits<double>::infinity()};
    const Complex p = w.value() * std::exp(I * x);
    const Complex q = std::exp(-I * x);
    const Complex den = p + q;
    return {n * (p - q) / den, std::abs(den)};
}

inline AxisVelocity velocity_1d(const SuperpositionWeight& w, Complex x) { return axis_velocity(w, x, 1.0); }

// v_R^2 - v_I^2 - n^2/2; positive means the axis propagates.
inline double mode_margin(Complex v0, double n = 1.0) {
    return v0.real() * v0.real() - v0.imag() * v0.imag() - 0.5 * n * n;
}

inline Mode1D classify_axis(Complex v0, double n) {
    if (mode_margin(v0, n) <= kModeBoundaryTol) return Mode1D::Bounded;
    return v0.real() > 0 ? Mode1D::RightPropagating : Mode1D::LeftPropagating;
}

inline Mode1D classify_1d(Complex v0) { return classify_axis(v0, 1.0); }

// Integrate a single axis model from x0 over [0, t_end].
inline Trajectory run_axis(const SuperpositionWeight& w, double n, Complex x0, double t_end,
                           const IntegratorConfig& cfg = {}) {
    if (!(t_end > 0)) throw DomainError("t_end must be positive");
    auto field = [&](double, std::span<const Complex> y, std::span<Complex> dy) {
        const AxisVelocity v = axis_velocity(w, y[0], n);
        dy[0] = v.velocity;
        return FieldStatus{v.denom_mag, 0};
    };
    const Complex y0[1] = {x0};
    return integrate(field, y0, 0.0, t_end, cfg);
}

inline Trajectory run_1d(const InitialCondition1D& ic, double t_end, const IntegratorConfig& cfg = {}) {
    return run_axis(weight_from_ic(ic), 1.0, ic.x0, t_end, cfg);
}

// max_t |A e^{ix(t)} - e^{-ix(t)} - D e^{i n t}| over the samples of one axis.
inline double implicit_residual(const SuperpositionWeight& w, const IntegrationConstant& c, const Trajectory& traj,
                                std::size_t axis = 0, double n = 1.0) {
    traj.check_axis(axis);
    if (w.is_eigenstate()) throw DomainError("implicit solution needs a finite nonzero weight");
    const Complex a = w.value();
    double worst = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const Complex x = traj.coord(i, axis);
        const Complex r = a * std::exp(I * x) - std::exp(-I * x) - c.D * std::exp(I * (n * traj.time(i)));
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

// Real form of the implicit solution:
//   cosh(ln|A| - 2 x_I) = cos(arg A + 2 x_R) + |D|^2 / (2|A|).
inline double constraint19_residual(const SuperpositionWeight& w, const IntegrationConstant& c, const Trajectory& traj,
                                    std::size_t axis = 0) {
    traj.check_axis(axis);
    const double ar = w.log_magnitude();
    const double at = w.phase();
    const double rhs_const = std::norm(c.D) / (2.0 * std::abs(w.value()));
    double worst = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const Complex x = traj.coord(i, axis);
        const double r = std::cosh(ar - 2.0 * x.imag()) - std::cos(at + 2.0 * x.real()) - rhs_const;
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

struct PeriodWavelength {
    double period;
    double wavelength;
};

namespace detail {

// Quadratic interpolation of a sampled signal at t near sample c.
inline double interpolate_quadratic(std::span<const double> t, std::span<const double> v, std::size_t c, double at) {
    c = std::clamp<std::size_t>(c, 1, t.size() - 2);
    const double t0 = t[c - 1], t1 = t[c], t2 = t[c + 1];
    return v[c - 1] * (at - t1) * (at - t2) / ((t0 - t1) * (t0 - t2)) +
           v[c] * (at - t0) * (at - t2) / ((t1 - t0) * (t1 - t2)) +
           v[c + 1] * (at - t0) * (at - t1) / ((t2 - t0) * (t2 - t1));
}

}  // namespace detail

// Period from the spacing of same-kind extrema of x_I, wavelength from the
// advance of x_R between them.
inline PeriodWavelength extract_period_wavelength(const Trajectory& traj, std::size_t axis = 0) {
    if (traj.size() < 3) throw InsufficientOscillations("trajectory too short for period extraction");
    const auto& t = traj.times();
    const std::vector<double> xi = traj.signal(axis, Part::Imag);
    const std::vector<double> xr = traj.signal(axis, Part::Real);
    const auto ext = find_extrema(t, xi);

    double sum_t = 0, sum_l = 0;
    std::size_t count = 0;
    for (ExtremumKind kind : {ExtremumKind::Max, ExtremumKind::Min}) {
        const Extremum* prev = nullptr;
        double prev_xr = 0;
        for (const Extremum& e : ext) {
            if (e.kind != kind) continue;
            const double here_xr = detail::interpolate_quadratic(t, xr, e.index, e.t);
            if (prev) {
                sum_t += e.t - prev->t;
                sum_l += std::abs(here_xr - prev_xr);
                ++count;
            }
            prev = &e;
            prev_xr = here_xr;
        }
    }
    if (count < 2) throw InsufficientOscillations("fewer than two extremum pairs in x_I");
    return {sum_t / count, sum_l / count};
}

// Mode inferred from long-horizon behaviour of one axis: bounded if x_R never
// strays more than 2 pi from its start, propagating if it travels at least
// half of the eigenstate distance n (t_end - t_0). nullopt when neither holds.
inline std::optional<Mode1D> observed_mode(const Trajectory& traj, std::size_t axis = 0, double n = 1.0) {
    const std::vector<double> xr = traj.signal(axis, Part::Real);
    const double start = xr.front();
    double excursion = 0;
    for (double v : xr) excursion = std::max(excursion, std::abs(v - start));
    if (excursion <= 2.0 * std::numbers::pi) return Mode1D::Bounded;
    const double travel = xr.back() - start;
    const double duration = traj.times().back() - traj.times().front();
    if (std::abs(travel) >= 0.5 * n * duration)
        return travel > 0 ? Mode1D::RightPropagating : Mode1D::LeftPropagating;
    return std::nullopt;
}

}  // namespace photraj
