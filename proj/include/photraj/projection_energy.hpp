#pragma once

// Standing-wave energy bookkeeping for a two-dimensional trajectory.
//
// The four real coordinates (x_R, x_I, y_R, y_I) span six projection planes.
// Each plane yields a dimensionless wavelength  lambda_bar = 2(|max| + |min|)
// of one coordinate, which converts to nanometres through k1 = 2pi n_x / lambda
// (x components) or k2 = 2pi n_y / lambda (y components). The plane energies
// hc / lambda_nm are summed and compared with the source photon energy.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "photraj/core_model.hpp"
#include "photraj/errors.hpp"
#include "photraj/numerics.hpp"

namespace photraj {

enum class Coordinate { XR, XI, YR, YI };
enum class ConversionAxis { X, Y };

constexpr std::size_t axis_index(Coordinate c) noexcept { return (c == Coordinate::XR || c == Coordinate::XI) ? 0 : 1; }
constexpr Part coordinate_part(Coordinate c) noexcept {
    return (c == Coordinate::XR || c == Coordinate::YR) ? Part::Real : Part::Imag;
}
constexpr ConversionAxis conversion_axis_of(Coordinate c) noexcept {
    return axis_index(c) == 0 ? ConversionAxis::X : ConversionAxis::Y;
}

constexpr std::string_view to_string(Coordinate c) noexcept {
    switch (c) {
        case Coordinate::XR: return "xR";
        case Coordinate::XI: return "xI";
        case Coordinate::YR: return "yR";
        case Coordinate::YI: return "yI";
    }
    return "?";
}

enum class ProjectionPlane { XR_XI, YR_YI, XR_YR, XI_YR, XI_YI, XR_YI };

struct PlaneInfo {
    ProjectionPlane plane;
    int number;  // 1-based plane number used in reports
    std::string_view name;
    Coordinate u;
    Coordinate v;
    Coordinate measure;  // coordinate the wavelength is read along
    ConversionAxis conversion;
};

// Measure axes: planes 1, 3, 6 along x_R, planes 4, 5 along x_I, plane 2 along y_R.
inline constexpr std::array<PlaneInfo, 6> kPlanes{{
    {ProjectionPlane::XR_XI, 1, "xR-xI", Coordinate::XR, Coordinate::XI, Coordinate::XR, ConversionAxis::X},
    {ProjectionPlane::YR_YI, 2, "yR-yI", Coordinate::YR, Coordinate::YI, Coordinate::YR, ConversionAxis::Y},
    {ProjectionPlane::XR_YR, 3, "xR-yR", Coordinate::XR, Coordinate::YR, Coordinate::XR, ConversionAxis::X},
    {ProjectionPlane::XI_YR, 4, "xI-yR", Coordinate::XI, Coordinate::YR, Coordinate::XI, ConversionAxis::X},
    {ProjectionPlane::XI_YI, 5, "xI-yI", Coordinate::XI, Coordinate::YI, Coordinate::XI, ConversionAxis::X},
    {ProjectionPlane::XR_YI, 6, "xR-yI", Coordinate::XR, Coordinate::YI, Coordinate::XR, ConversionAxis::X},
}};

constexpr const PlaneInfo& plane_info(ProjectionPlane p) noexcept { return kPlanes[static_cast<std::size_t>(p)]; }

// Dimensionless wavelengths of the six planes for the bounded mode (d) run.
inline constexpr std::array<double, 6> kReferenceLambdaBar{15.9968, 44.06, 15.9968, 9.8731, 9.8731, 15.9968};

inline std::vector<SourceLight> reference_sources() {
    return {{"Ruby laser", 694.3},
            {"IR diode laser", 850.0},
            {"Fiber diode laser", 975.0},
            {"Yb:YAG laser", 1030.0},
            {"Nb:YVO4", 1064.0}};
}

inline std::vector<std::pair<double, double>> project(const Trajectory& traj, ProjectionPlane plane) {
    if (traj.dim() < 2) throw DomainError("projection planes need a two-dimensional trajectory");
    const PlaneInfo& info = plane_info(plane);
    std::vector<std::pair<double, double>> out;
    out.reserve(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i)
        out.emplace_back(part_of(traj.coord(i, axis_index(info.u)), coordinate_part(info.u)),
                         part_of(traj.coord(i, axis_index(info.v)), coordinate_part(info.v)));
    return out;
}

// lambda_bar = 2(|max| + |min|) of one coordinate over the whole record, with
// the extreme values refined by find_extrema.
inline double extract_lambda_bar(const Trajectory& traj, Coordinate c) {
    traj.check_axis(axis_index(c));
    if (traj.size() < 3) throw InsufficientOscillations("trajectory too short to measure a wavelength");
    const std::vector<double> sig = traj.signal(axis_index(c), coordinate_part(c));
    const auto ext = find_extrema(traj.times(), sig);
    if (ext.empty()) throw InsufficientOscillations(std::string("no extrema along ") + std::string(to_string(c)));

    auto [lo, hi] = std::minmax_element(sig.begin(), sig.end());
    double vmin = *lo, vmax = *hi;
    for (const Extremum& e : ext) {
        if (e.kind == ExtremumKind::Max) vmax = std::max(vmax, e.value);
        else vmin = std::min(vmin, e.value);
    }
    return 2.0 * (std::abs(vmax) + std::abs(vmin));
}

// lambda = lambda_bar / k = lambda_bar * lambda_source / (2 pi n).
inline double dimensionalize(double lambda_bar, ConversionAxis axis, const SourceLight& source,
                             const DirectionalSplit& split) {
    if (!(lambda_bar > 0)) throw DomainError("dimensionless wavelength must be positive");
    if (!(source.wavelength_nm > 0)) throw DomainError("source wavelength must be positive");
    const double n = axis == ConversionAxis::X ? split.nx() : split.ny();
    return lambda_bar * source.wavelength_nm / (2.0 * std::numbers::pi * n);
}

struct StandingWaveMeasurement {
    ProjectionPlane plane;
    double lambda_bar;
    double lambda_nm;
    double energy_ev;
};

struct EnergyReport {
    SourceLight source;
    DirectionalSplit split;
    std::array<StandingWaveMeasurement, 6> measurements;
    double total_ev;
    double source_ev;
    double percent_error;
};

inline EnergyReport energy_report_from_lambdas(const std::array<double, 6>& lambda_bar, const SourceLight& source,
                                               const DirectionalSplit& split, const PhysicalConstants& consts = {}) {
    consts.validate();
    EnergyReport r{source, split, {}, 0.0, photon_energy(source, consts), 0.0};
    for (std::size_t i = 0; i < kPlanes.size(); ++i) {
        const double nm = dimensionalize(lambda_bar[i], kPlanes[i].conversion, source, split);
        r.measurements[i] = {kPlanes[i].plane, lambda_bar[i], nm, photon_energy(nm, consts)};
        r.total_ev += r.measurements[i].energy_ev;
    }
    r.percent_error = 100.0 * std::abs(r.total_ev - r.source_ev) / r.source_ev;
    return r;
}

inline std::array<double, 6> measure_lambda_bars(const Trajectory& traj) {
    std::array<double, 6> out{};
    for (std::size_t i = 0; i < kPlanes.size(); ++i) out[i] = extract_lambda_bar(traj, kPlanes[i].measure);
    return out;
}

inline EnergyReport energy_report(const Trajectory& traj, const SourceLight& source, const DirectionalSplit& split,
                                  const PhysicalConstants& consts = {}) {
    if (traj.dim() < 2) throw DomainError("energy report needs a two-dimensional trajectory");
    return energy_report_from_lambdas(measure_lambda_bars(traj), source, split, consts);
}

inline std::vector<EnergyReport> reproduce_table3(std::span<const SourceLight> sources,
                                                  const std::array<double, 6>& lambda_bar,
                                                  const DirectionalSplit& split, const PhysicalConstants& consts = {}) {
    std::vector<EnergyReport> rows;
    rows.reserve(sources.size());
    for (const SourceLight& s : sources) rows.push_back(energy_report_from_lambdas(lambda_bar, s, split, consts));
    return rows;
}

}  // namespace photraj
