#pragma once

// Adaptive integration of complex ODE systems and the signal utilities used to
// analyse the resulting trajectories.
//
// The integrator is Dormand-Prince 8(5,3) with its seventh-order continuous
// extension. A complex system of dimension N is advanced as a real system of
// dimension 2N: every real and imaginary part enters the error norm separately.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "photraj/core_model.hpp"
#include "photraj/detail/dop853_tableau.hpp"
#include "photraj/errors.hpp"

namespace photraj {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.1;
    double sample_dt = 1e-3;
    double singularity_eps = 1e-8;
    double min_step = 1e-14;

    void validate() const {
        if (!(rel_tol > 0 && abs_tol > 0 && max_step > 0 && sample_dt > 0 && singularity_eps > 0 && min_step > 0))
            throw DomainError("integrator settings must be strictly positive");
        if (rel_tol < abs_tol * 1e-6) throw DomainError("rel_tol is implausibly small relative to abs_tol");
    }
};

// What a velocity field reports besides the velocity itself: the smallest
// denominator magnitude it divided by and the axis it belongs to.
struct FieldStatus {
    double denom_mag = std::numeric_limits<double>::infinity();
    std::size_t axis = 0;

    static FieldStatus worst(FieldStatus a, FieldStatus b) noexcept { return b.denom_mag < a.denom_mag ? b : a; }
};

enum class Part { Real, Imag };

inline double part_of(Complex z, Part p) noexcept { return p == Part::Real ? z.real() : z.imag(); }

// Time-stamped complex states with their velocities. States are stored flat,
// dim() coordinates per sample.
class Trajectory {
public:
    explicit Trajectory(std::size_t dim) : dim_(dim) {
        if (dim == 0) throw DomainError("trajectory dimension must be positive");
    }

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return times_.size(); }
    bool empty() const noexcept { return times_.empty(); }

    const std::vector<double>& times() const noexcept { return times_; }
    double time(std::size_t i) const { return times_.at(i); }

    std::span<const Complex> state(std::size_t i) const {
        return std::span<const Complex>(states_).subspan(i * dim_, dim_);
    }
    std::span<const Complex> velocity(std::size_t i) const {
        return std::span<const Complex>(velocities_).subspan(i * dim_, dim_);
    }
    Complex coord(std::size_t i, std::size_t axis) const { return states_.at(i * dim_ + axis); }
    Complex vel(std::size_t i, std::size_t axis) const { return velocities_.at(i * dim_ + axis); }

    // One real component of one coordinate, for every sample.
    std::vector<double> signal(std::size_t axis, Part part) const {
        check_axis(axis);
        std::vector<double> out(size());
        for (std::size_t i = 0; i < size(); ++i) out[i] = part_of(states_[i * dim_ + axis], part);
        return out;
    }

    void push_back(double t, std::span<const Complex> state, std::span<const Complex> velocity) {
        if (state.size() != dim_ || velocity.size() != dim_) throw DomainError("sample dimension mismatch");
        if (!times_.empty() && !(t > times_.back())) throw DomainError("trajectory times must increase strictly");
        for (std::size_t k = 0; k < dim_; ++k)
            if (!is_finite(state[k]) || !is_finite(velocity[k]))
                throw DomainError("non-finite trajectory sample at t_bar = " + std::to_string(t));
        times_.push_back(t);
        states_.insert(states_.end(), state.begin(), state.end());
        velocities_.insert(velocities_.end(), velocity.begin(), velocity.end());
    }

    void check_axis(std::size_t axis) const {
        if (axis >= dim_) throw DomainError("axis " + std::to_string(axis) + " out of range for trajectory");
    }

private:
    std::size_t dim_;
    std::vector<double> times_;
    std::vector<Complex> states_;
    std::vector<Complex> velocities_;
};

namespace detail {

inline double scaled_component(double err, double y0, double y1, const IntegratorConfig& cfg) {
    const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y0), std::abs(y1));
    return err / sc;
}

}  // namespace detail

// Integrate dy/dt = field(t, y) over [t0, t1] and sample the dense output every
// cfg.sample_dt, always including both end points.
//
// field has the signature FieldStatus(double t, std::span<const Complex> y, std::span<Complex> dydt).
inline constexpr double kSingularTimeResolution = 1e-9;

template <class Field>
Trajectory integrate(Field&& field, std::span<const Complex> y0, double t0, double t1,
                     const IntegratorConfig& cfg = {}) {
    namespace tb = detail::dop853;
    cfg.validate();
    if (!(t1 > t0)) throw DomainError("integration span must satisfy t1 > t0");
    if (y0.empty()) throw DomainError("empty initial state");
    for (Complex z : y0)
        if (!is_finite(z)) throw DomainError("non-finite initial state");

    const std::size_t n = y0.size();
    std::vector<Complex> y(y0.begin(), y0.end()), ynew(n), ytmp(n), vel(n);
    std::array<std::vector<Complex>, tb::kStagesExtended> k;
    for (auto& v : k) v.resize(n);
    std::array<std::vector<Complex>, tb::kInterpolatorPower> dense;
    for (auto& v : dense) v.resize(n);

    auto eval = [&](double t, std::span<const Complex> state, std::span<Complex> out) {
        const FieldStatus st = field(t, state, out);
        if (st.denom_mag < cfg.singularity_eps) throw SingularityEncountered(t, st.axis, st.denom_mag);
        for (std::size_t i = 0; i < n; ++i)
            if (!is_finite(out[i])) throw SingularityEncountered(t, st.axis, st.denom_mag);
    };
    // y + h * sum_j a[j] k[j] over the first s stages
    auto stage_state = [&](const auto& a, std::size_t s, double h) {
        for (std::size_t i = 0; i < n; ++i) {
            Complex acc = 0.0;
            for (std::size_t j = 0; j < s; ++j)
                if (a[j] != 0.0) acc += a[j] * k[j][i];
            ytmp[i] = y[i] + h * acc;
        }
    };

    Trajectory traj(n);
    const double span_len = t1 - t0;
    const auto n_grid = static_cast<std::size_t>(std::floor(span_len / cfg.sample_dt * (1.0 + 1e-12)));
    std::size_t next = 1;  // index of the next grid sample
    auto grid_time = [&](std::size_t i) { return t0 + static_cast<double>(i) * cfg.sample_dt; };
    // the last grid point is dropped when it would sit on top of t1
    const std::size_t last_grid =
        (n_grid > 0 && t1 - grid_time(n_grid) < 1e-9 * cfg.sample_dt) ? n_grid - 1 : n_grid;

    eval(t0, y, k[0]);
    traj.push_back(t0, y, k[0]);

    // initial step guess
    double h;
    {
        double d0 = 0, d1 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (Part p : {Part::Real, Part::Imag}) {
                const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(part_of(y[i], p));
                d0 += std::pow(part_of(y[i], p) / sc, 2);
                d1 += std::pow(part_of(k[0][i], p) / sc, 2);
            }
        }
        d0 = std::sqrt(d0 / (2.0 * n));
        d1 = std::sqrt(d1 / (2.0 * n));
        h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h = std::clamp(h, 1e-8, std::min(cfg.max_step, span_len));
    }

    constexpr double safe = 0.9, facmin = 0.2, facmax = 10.0, expo = -1.0 / 8.0;
    bool rejected = false;
    double t = t0;

    while (t < t1) {
        if (h < cfg.min_step || t + h == t) throw StepUnderflow(t, h);
        bool final_step = false;
        if (t + h >= t1 || t1 - (t + h) < 1e-12 * std::max(1.0, std::abs(t1))) {
            h = t1 - t;
            final_step = true;
        }
        const double t_new = final_step ? t1 : t + h;

        // a step that runs into a node is shortened until the crossing time is resolved
        try {
            for (std::size_t s = 1; s < tb::kStages; ++s) {
                stage_state(tb::A[s], s, h);
                eval(t + tb::C[s] * h, ytmp, k[s]);
            }
            for (std::size_t i = 0; i < n; ++i) {
                Complex acc = 0.0;
                for (std::size_t j = 0; j < tb::kStages; ++j) acc += tb::B[j] * k[j][i];
                ynew[i] = y[i] + h * acc;
            }
            eval(t_new, ynew, k[tb::kStages]);
        } catch (const SingularityEncountered&) {
            if (h <= kSingularTimeResolution * std::max(1.0, std::abs(t))) throw;
            h *= 0.5;
            rejected = true;
            continue;
        }

        double e5 = 0, e3 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            Complex a5 = 0.0, a3 = 0.0;
            for (std::size_t j = 0; j <= tb::kStages; ++j) {
                a5 += tb::E5[j] * k[j][i];
                a3 += tb::E3[j] * k[j][i];
            }
            for (Part p : {Part::Real, Part::Imag}) {
                const double s5 = detail::scaled_component(part_of(a5, p), part_of(y[i], p), part_of(ynew[i], p), cfg);
                const double s3 = detail::scaled_component(part_of(a3, p), part_of(y[i], p), part_of(ynew[i], p), cfg);
                e5 += s5 * s5;
                e3 += s3 * s3;
            }
        }
        const double err = (e5 == 0 && e3 == 0) ? 0.0 : h * e5 / std::sqrt((e5 + 0.01 * e3) * 2.0 * n);

        if (err < 1.0) {
            if (next <= last_grid && grid_time(next) <= t_new) {
                for (std::size_t s = tb::kStages + 1; s < tb::kStagesExtended; ++s) {
                    stage_state(tb::A[s], s, h);
                    eval(t + tb::C[s] * h, ytmp, k[s]);
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const Complex dy = ynew[i] - y[i];
                    dense[0][i] = dy;
                    dense[1][i] = h * k[0][i] - dy;
                    dense[2][i] = 2.0 * dy - h * (k[tb::kStages][i] + k[0][i]);
                    for (std::size_t r = 0; r < tb::D.size(); ++r) {
                        Complex acc = 0.0;
                        for (std::size_t j = 0; j < tb::kStagesExtended; ++j) acc += tb::D[r][j] * k[j][i];
                        dense[3 + r][i] = h * acc;
                    }
                }
            }
            // dense output for the grid samples inside (t, t_new]
            while (next <= last_grid && grid_time(next) <= t_new) {
                const double ts = grid_time(next);
                const double theta = (ts - t) / h;
                for (std::size_t i = 0; i < n; ++i) {
                    Complex acc = 0.0;
                    for (std::size_t r = 0; r < tb::kInterpolatorPower; ++r) {
                        acc += dense[tb::kInterpolatorPower - 1 - r][i];
                        acc *= (r % 2 == 0) ? theta : 1.0 - theta;
                    }
                    ytmp[i] = y[i] + acc;
                }
                eval(ts, ytmp, vel);
                traj.push_back(ts, ytmp, vel);
                ++next;
            }

            double fac = err == 0 ? facmax : std::min(facmax, safe * std::pow(err, expo));
            if (rejected) fac = std::min(1.0, fac);
            rejected = false;

            t = t_new;
            y.swap(ynew);
            k[0].swap(k[tb::kStages]);
            if (final_step) break;
            h = std::min(h * fac, cfg.max_step);
        } else {
            h *= std::max(facmin, safe * std::pow(err, expo));
            rejected = true;
        }
    }

    traj.push_back(t1, y, k[0]);
    return traj;
}

enum class ExtremumKind { Max, Min };

struct Extremum {
    double t;
    double value;
    ExtremumKind kind;
    std::size_t index;  // sample closest to the refined location
};

namespace detail {

struct Parabola {
    double alpha;  // curvature coefficient of p(s) = v1 + beta s + alpha s^2, s = t - t1
    double beta;
};

inline Parabola fit_parabola(double t0, double t1, double t2, double v0, double v1, double v2) {
    const double h0 = t0 - t1, h2 = t2 - t1;
    const double alpha = ((v2 - v1) / h2 - (v0 - v1) / h0) / (h2 - h0);
    const double beta = (v2 - v1) / h2 - alpha * h2;
    return {alpha, beta};
}

}  // namespace detail

// Local extrema of a sampled signal. Interior extrema come from sign changes of
// the discrete derivative; an end point also counts when the parabola through
// its three nearest samples peaks within half a sample spacing of it. Locations
// and values are refined by that local parabola.
inline std::vector<Extremum> find_extrema(std::span<const double> t, std::span<const double> v) {
    if (t.size() != v.size()) throw DomainError("find_extrema: times and values differ in length");
    if (t.size() < 3) throw DomainError("find_extrema needs at least 3 samples");
    const std::size_t n = t.size();
    std::vector<Extremum> out;

    auto refine = [&](std::size_t c, std::size_t i0, double lo, double hi, ExtremumKind kind) -> bool {
        const auto [alpha, beta] = detail::fit_parabola(t[c - 1], t[c], t[c + 1], v[c - 1], v[c], v[c + 1]);
        if (alpha == 0.0 || !std::isfinite(alpha)) return false;
        if ((kind == ExtremumKind::Max) != (alpha < 0.0)) return false;
        const double s = -beta / (2.0 * alpha);
        if (!(s >= lo && s <= hi)) return false;
        out.push_back({t[c] + s, v[c] - beta * beta / (4.0 * alpha), kind, i0});
        return true;
    };

    // leading end point
    {
        const double half = 0.5 * (t[1] - t[0]);
        const double h0 = t[0] - t[1];
        if (v[0] > v[1]) refine(1, 0, h0 - half, h0 + half, ExtremumKind::Max);
        else if (v[0] < v[1]) refine(1, 0, h0 - half, h0 + half, ExtremumKind::Min);
    }

    for (std::size_t i = 1; i + 1 < n; ++i) {
        ExtremumKind kind;
        if (v[i] > v[i - 1] && v[i] >= v[i + 1]) kind = ExtremumKind::Max;
        else if (v[i] < v[i - 1] && v[i] <= v[i + 1]) kind = ExtremumKind::Min;
        else continue;
        if (!refine(i, i, t[i - 1] - t[i], t[i + 1] - t[i], kind)) out.push_back({t[i], v[i], kind, i});
    }

    // trailing end point
    {
        const double half = 0.5 * (t[n - 1] - t[n - 2]);
        const double h2 = t[n - 1] - t[n - 2];
        if (v[n - 1] > v[n - 2]) refine(n - 2, n - 1, h2 - half, h2 + half, ExtremumKind::Max);
        else if (v[n - 1] < v[n - 2]) refine(n - 2, n - 1, h2 - half, h2 + half, ExtremumKind::Min);
    }
    return out;
}

enum class CrossingDirection { Rising, Falling, Both };

// Zero crossings by linear interpolation between samples of opposite sign.
// Samples within a few ulps of zero (relative to the signal's scale) count as
// zero; a run of such samples is a crossing if the signal changes side across it
// or the run touches an end of the record.
inline std::vector<double> find_zero_crossings(std::span<const double> t, std::span<const double> v,
                                               CrossingDirection dir = CrossingDirection::Both) {
    if (t.size() != v.size()) throw DomainError("find_zero_crossings: times and values differ in length");
    std::vector<double> out;
    const std::size_t n = t.size();
    if (n < 2) return out;

    double scale = 0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    const double band = 64.0 * std::numeric_limits<double>::epsilon() * scale;
    auto sgn = [&](double x) { return x > band ? 1 : (x < -band ? -1 : 0); };

    auto emit = [&](double tc, bool rising) {
        if (dir == CrossingDirection::Both || (dir == CrossingDirection::Rising) == rising) out.push_back(tc);
    };

    std::size_t i = 0;
    while (i < n) {
        const int s = sgn(v[i]);
        if (s == 0) {
            std::size_t j = i;
            while (j + 1 < n && sgn(v[j + 1]) == 0) ++j;
            const int before = i > 0 ? sgn(v[i - 1]) : 0;
            const int after = j + 1 < n ? sgn(v[j + 1]) : 0;
            if (before != after && !(before == 0 && after == 0)) {
                const bool rising = before < 0 || after > 0;
                emit(0.5 * (t[i] + t[j]), rising);
            }
            i = j + 1;
            continue;
        }
        if (i + 1 < n) {
            const int s1 = sgn(v[i + 1]);
            if (s1 != 0 && s1 != s) emit(t[i] + (t[i + 1] - t[i]) * v[i] / (v[i] - v[i + 1]), s1 > 0);
        }
        ++i;
    }
    return out;
}

template <class F>
double central_diff(F&& f, double x, double h) {
    if (!(h > 0)) throw DomainError("central_diff step must be positive");
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Directional central difference of a complex function: (f(z + h d) - f(z - h d)) / (2 h d).
// For an analytic f this estimates f'(z) for any unit direction d.
template <class F>
Complex central_diff(F&& f, Complex z, double h, Complex direction = 1.0) {
    if (!(h > 0)) throw DomainError("central_diff step must be positive");
    const Complex dz = h * direction;
    return (f(z + dz) - f(z - dz)) / (2.0 * dz);
}

}  // namespace photraj
