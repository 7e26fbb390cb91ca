#pragma once

// Dimensionless complex quantum potential and force of the 1D superposition:
//
//     Q(x) = 2A / (A e^{ix} + e^{-ix})^2
//     F(x) = -dQ/dx = 4Ai (A e^{ix} - e^{-ix}) / (A e^{ix} + e^{-ix})^3
//
// These are the photon (E0 -> 0) reductions of the dimensional potential
// (c^2 hbar^2 / E0)(-d_ct^2 ln Psi + d_x^2 ln Psi); the dimensional form is not
// evaluated. Both vanish identically for either eigenstate.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "photraj/core_model.hpp"
#include "photraj/dynamics1d.hpp"
#include "photraj/errors.hpp"

namespace photraj {

inline constexpr double kNodeThreshold = 1e-12;

namespace detail {

inline Complex node_checked_denominator(Complex a, Complex x) {
    const Complex den = a * std::exp(I * x) + std::exp(-I * x);
    if (std::abs(den) < kNodeThreshold)
        throw NodeSingularity("quantum potential evaluated at a wavefunction node");
    return den;
}

}  // namespace detail

inline Complex qpot(const SuperpositionWeight& w, Complex x) {
    if (w.is_eigenstate()) return 0.0;
    const Complex a = w.value();
    const Complex den = detail::node_checked_denominator(a, x);
    return 2.0 * a / (den * den);
}

inline Complex qforce(const SuperpositionWeight& w, Complex x) {
    if (w.is_eigenstate()) return 0.0;
    const Complex a = w.value();
    const Complex den = detail::node_checked_denominator(a, x);
    return 4.0 * a * I * (a * std::exp(I * x) - std::exp(-I * x)) / (den * den * den);
}

// A finite nonzero A has nodes at x = (pi - arg A)/2 + k pi + (i/2) ln|A|.
inline Complex nearest_node(const SuperpositionWeight& w, Complex x) {
    const Complex a = w.value();
    const double base = 0.5 * (std::numbers::pi - std::arg(a));
    const double k = std::round((x.real() - base) / std::numbers::pi);
    return {base + k * std::numbers::pi, 0.5 * std::log(std::abs(a))};
}

struct PotentialSample {
    Complex x;
    Complex Q;
    Complex F;
    bool node = false;  // Q and F are not meaningful when set
};

struct GridRegion {
    double re_min, re_max;
    double im_min, im_max;
};

struct GridResolution {
    std::size_t re_count;
    std::size_t im_count;
};

// Samples are row-major: one row per x_I value, x_R varying fastest.
struct FieldGrid {
    GridRegion region;
    GridResolution resolution;
    std::vector<PotentialSample> samples;

    const PotentialSample& at(std::size_t re_index, std::size_t im_index) const {
        return samples.at(im_index * resolution.re_count + re_index);
    }
};

// Evaluate Q and F on a regular grid. A cell is flagged as a node when a node
// lies within half a grid spacing of it along both axes.
inline FieldGrid field_grid(const SuperpositionWeight& w, const GridRegion& region, const GridResolution& res) {
    if (res.re_count < 2 || res.im_count < 2) throw DomainError("field grid needs at least 2 points per axis");
    if (!(region.re_max > region.re_min) || !(region.im_max > region.im_min))
        throw DomainError("field grid region is empty");

    FieldGrid grid{region, res, {}};
    grid.samples.reserve(res.re_count * res.im_count);
    const double hr = (region.re_max - region.re_min) / static_cast<double>(res.re_count - 1);
    const double hi = (region.im_max - region.im_min) / static_cast<double>(res.im_count - 1);

    for (std::size_t j = 0; j < res.im_count; ++j) {
        for (std::size_t i = 0; i < res.re_count; ++i) {
            const Complex x{region.re_min + static_cast<double>(i) * hr, region.im_min + static_cast<double>(j) * hi};
            PotentialSample s{x, 0.0, 0.0, false};
            if (!w.is_eigenstate()) {
                const Complex node = nearest_node(w, x);
                if (std::abs(x.real() - node.real()) <= 0.5 * hr && std::abs(x.imag() - node.imag()) <= 0.5 * hi) {
                    s.node = true;
                } else {
                    try {
                        s.Q = qpot(w, x);
                        s.F = qforce(w, x);
                    } catch (const NodeSingularity&) {
                        s.node = true;
                    }
                }
            }
            grid.samples.push_back(s);
        }
    }
    return grid;
}

}  // namespace photraj
