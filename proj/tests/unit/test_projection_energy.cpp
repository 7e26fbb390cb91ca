#include <array>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "photraj/dynamics2d.hpp"
#include "photraj/projection_energy.hpp"

using namespace photraj;

namespace {

const DirectionalSplit kSplit = DirectionalSplit::reference();
const SourceLight kRuby{"Ruby laser", 694.3};

Trajectory synthetic(double amplitude) {
    Trajectory tr(2);
    const auto ts = oracle::linspace(0.0, 4.0 * std::numbers::pi, 4001);
    for (double t : ts) {
        const Complex st[2] = {{amplitude * std::sin(t), 0.5 * std::cos(t)}, {t, std::sin(2 * t)}};
        const Complex v[2] = {0.0, 0.0};
        tr.push_back(t, st, v);
    }
    return tr;
}

}  // namespace

TEST(ExtractLambdaBar, SyntheticSine) {
    const auto tr = synthetic(4.0);
    EXPECT_NEAR(extract_lambda_bar(tr, Coordinate::XR), 16.0, 1e-6);
    EXPECT_NEAR(extract_lambda_bar(tr, Coordinate::XI), 2.0, 1e-6);
    EXPECT_NEAR(extract_lambda_bar(tr, Coordinate::YI), 4.0, 1e-6);
}

TEST(ExtractLambdaBar, MonotoneSignalFails) {
    const auto tr = synthetic(1.0);
    EXPECT_THROW(extract_lambda_bar(tr, Coordinate::YR), InsufficientOscillations);
}

TEST(Project, PlanesAndErrors) {
    const auto tr = synthetic(1.0);
    const auto p = project(tr, ProjectionPlane::XI_YR);
    ASSERT_EQ(p.size(), tr.size());
    EXPECT_DOUBLE_EQ(p[10].first, tr.coord(10, 0).imag());
    EXPECT_DOUBLE_EQ(p[10].second, tr.coord(10, 1).real());
    Trajectory one(1);
    EXPECT_THROW(project(one, ProjectionPlane::XR_XI), DomainError);
}

TEST(Project, EigenstateStraightSegment) {
    const Scenario2D s{kSplit, {0.0, 0.0, kSplit.nx(), kSplit.ny()}, std::nullopt, "eigenstates"};
    const auto tr = run_2d(s, 3.0);
    for (const auto& [u, v] : project(tr, ProjectionPlane::XR_YR))
        if (u > 0) {
            EXPECT_NEAR(v / u, kSplit.ny() / kSplit.nx(), 1e-10);
        }
}

TEST(Planes, Metadata) {
    EXPECT_EQ(kPlanes[1].measure, Coordinate::YR);
    EXPECT_EQ(kPlanes[1].conversion, ConversionAxis::Y);
    EXPECT_EQ(kPlanes[3].measure, Coordinate::XI);
    EXPECT_EQ(kPlanes[4].measure, Coordinate::XI);
    for (std::size_t i : {0u, 2u, 5u}) EXPECT_EQ(kPlanes[i].measure, Coordinate::XR);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(kPlanes[i].number, static_cast<int>(i) + 1);
}

TEST(Dimensionalize, PrintedRows) {
    EXPECT_NEAR(dimensionalize(15.9968, ConversionAxis::X, kRuby, kSplit), 4999.7, 0.5);
    EXPECT_NEAR(dimensionalize(44.06, ConversionAxis::Y, kRuby, kSplit), 5204.8, 0.5);
    EXPECT_NEAR(dimensionalize(9.8731, ConversionAxis::X, kRuby, kSplit), 3085.8, 0.5);
    EXPECT_NEAR(dimensionalize(15.9968, ConversionAxis::X, kRuby, kSplit), oracle::to_nm(15.9968, 694.3, kSplit.nx()),
                1e-9);
    EXPECT_THROW(dimensionalize(0.0, ConversionAxis::X, kRuby, kSplit), DomainError);
}

TEST(EnergyReport, PrintedLambdas) {
    const auto r = energy_report_from_lambdas(kReferenceLambdaBar, kRuby, kSplit);
    const std::array<double, 6> printed{0.24797434, 0.23820099, 0.24797434, 0.40177734, 0.40177734, 0.24797434};
    const std::array<double, 6> n{kSplit.nx(), kSplit.ny(), kSplit.nx(), kSplit.nx(), kSplit.nx(), kSplit.nx()};
    double total = 0;
    for (std::size_t i = 0; i < 6; ++i) {
        const double e = oracle::energy_ev(oracle::to_nm(kReferenceLambdaBar[i], 694.3, n[i]));
        EXPECT_NEAR(r.measurements[i].energy_ev, e, 1e-12);
        EXPECT_NEAR(r.measurements[i].energy_ev, printed[i], 2e-5);
        total += e;
    }
    EXPECT_NEAR(r.total_ev, total, 1e-12);
    EXPECT_NEAR(r.total_ev, 1.7856795, 1e-4);
    EXPECT_NEAR(r.source_ev, 1.78568342, 5e-9);
    EXPECT_NEAR(r.percent_error, 0.00026, 1e-5);
}

TEST(EnergyReport, ScaleInvariance) {
    const auto base = energy_report_from_lambdas(kReferenceLambdaBar, kRuby, kSplit);
    for (double nm : {400.0, 850.0, 1550.0}) {
        const auto r = energy_report_from_lambdas(kReferenceLambdaBar, {"", nm}, kSplit);
        EXPECT_NEAR(r.percent_error, base.percent_error, 1e-9 * base.percent_error);
    }
}

TEST(EnergyReport, NeedsTwoDimensions) {
    Trajectory one(1);
    EXPECT_THROW(energy_report(one, kRuby, kSplit), DomainError);
}

TEST(EnergyReport, FromTrajectoryMatchesLambdaPath) {
    const auto tr = synthetic(4.0);
    Trajectory osc(2);
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const double t = tr.time(i);
        const Complex st[2] = {tr.coord(i, 0), {std::sin(t), 0.0}};
        osc.push_back(t, st, tr.velocity(i));
    }
    const auto lb = measure_lambda_bars(osc);
    const auto a = energy_report(osc, kRuby, kSplit);
    const auto b = energy_report_from_lambdas(lb, kRuby, kSplit);
    EXPECT_DOUBLE_EQ(a.total_ev, b.total_ev);
    EXPECT_NEAR(lb[0], 16.0, 1e-6);
    EXPECT_NEAR(lb[1], 4.0, 1e-6);
}

TEST(SourceComparison, FiveSources) {
    const auto sources = reference_sources();
    const auto rows = reproduce_table3(sources, kReferenceLambdaBar, kSplit);
    ASSERT_EQ(rows.size(), 5u);
    const std::array<double, 5> source_ev{1.78568342, 1.45858824, 1.27158974, 1.20368932, 1.16522556};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_NEAR(rows[i].source_ev, source_ev[i], 1e-8);
        EXPECT_NEAR(rows[i].percent_error, 0.00026, 1e-5);
        EXPECT_NEAR(rows[i].percent_error, rows[0].percent_error, 1e-9 * rows[0].percent_error);
    }
    EXPECT_TRUE(reproduce_table3({}, kReferenceLambdaBar, kSplit).empty());
}
