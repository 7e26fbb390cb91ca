// Acceptance criteria 1-11. Prints one [PASS]/[FAIL] line per criterion and
// exits nonzero if any criterion fails.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracles.hpp"
#include "photraj/photraj.hpp"

using namespace photraj;

namespace {

constexpr double kPi = std::numbers::pi;

int failures = 0;

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

std::string num(double x, int digits = 6) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

void report(int id, const std::string& title, bool ok, const std::string& detail) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << "AC" << id << " " << title << ": " << detail << std::endl;
    if (!ok) ++failures;
}

void ac1() {
    const Complex x0{0.3, 0.2};
    const auto tr = run_1d({x0, 1.0}, 10.0);
    double drift = 0, imag = 0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        drift = std::max(drift, std::abs(tr.coord(i, 0) - x0 - tr.time(i)));
        imag = std::max(imag, std::abs(tr.coord(i, 0).imag() - x0.imag()));
    }
    report(1, "eigenstate particle limit", drift <= 1e-10 && imag <= 1e-12,
           "max|x - x0 - t| = " + sci(drift) + " (tol 1e-10), max|xI - xI0| = " + sci(imag) + " (tol 1e-12)");
}

void ac2() {
    const auto tr = run_1d({0.0, {0.9, 0.1}}, 20.0);
    const auto pw = extract_period_wavelength(tr);
    const double ratio = pw.wavelength / pw.period;
    const bool ok = std::abs(pw.period - kPi) <= 1e-3 && std::abs(pw.wavelength - kPi) <= 1e-3 &&
                    std::abs(ratio - 1.0) <= 2e-3;
    report(2, "superposition wave period", ok,
           "T = " + num(pw.period, 9) + ", lambda = " + num(pw.wavelength, 9) + ", lambda/T = " + num(ratio, 9) +
               " (pi +- 1e-3, 1 +- 2e-3)");
}

void ac3() {
    std::mt19937_64 rng(2026);
    double implicit = 0, constraint = 0;
    int runs = 0;
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-10;
    const Mode1D modes[] = {Mode1D::RightPropagating, Mode1D::Bounded, Mode1D::LeftPropagating};
    for (Mode1D want : modes) {
        for (int k = 0; k < 20;) {
            const Complex v = oracle::random_velocity(rng, is_propagating(want));
            if (classify_1d(v) != want) continue;
            const InitialCondition1D ic{oracle::random_point(rng, 1.0, 0.3), v};
            const auto tr = run_1d(ic, 40.0, cfg);
            const auto w = weight_from_ic(ic);
            const auto c = integration_constant(ic);
            implicit = std::max(implicit, implicit_residual(w, c, tr));
            constraint = std::max(constraint, constraint19_residual(w, c, tr));
            ++k;
            ++runs;
        }
    }
    const DirectionalSplit split = DirectionalSplit::reference();
    for (int combo = 0; combo < 4; ++combo) {
        for (int k = 0; k < 10; ++k) {
            const Scenario2D s{split,
                               {oracle::random_point(rng, 1.0, 0.3), oracle::random_point(rng, 1.0, 0.3),
                                oracle::random_velocity(rng, combo == 0 || combo == 2, split.nx()),
                                oracle::random_velocity(rng, combo == 0 || combo == 1, split.ny())},
                               std::nullopt,
                               "random"};
            const auto tr = run_2d(s, 40.0, cfg);
            const auto w = weights_2d(s);
            const auto c = constants_2d(s);
            implicit = std::max({implicit, implicit_residual(w.A, c.D, tr, 0, split.nx()),
                                 implicit_residual(w.B, c.J, tr, 1, split.ny())});
            constraint = std::max({constraint, constraint19_residual(w.A, c.D, tr, 0),
                                   constraint19_residual(w.B, c.J, tr, 1)});
            ++runs;
        }
    }
    report(3, "implicit-solution oracle", implicit <= 1e-8 && constraint <= 1e-8,
           std::to_string(runs) + " runs, max implicit residual = " + sci(implicit) +
               ", max constraint residual = " + sci(constraint) + " (tol 1e-8)");
}

void ac4() {
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> mag(-1.0, 1.0), ph(-kPi, kPi);
    double worst = 0;
    for (int k = 0; k < 100;) {
        const auto w = SuperpositionWeight::finite(std::polar(std::pow(10.0, mag(rng)), ph(rng)));
        const Complex x = oracle::random_point(rng);
        const Complex den = w.value() * std::exp(I * x) + std::exp(-I * x);
        if (std::abs(den) < 0.2) continue;
        const double h = 1e-5;
        const Complex fd = -(qpot(w, x + h) - qpot(w, x - h)) / (2.0 * h);
        const Complex f = qforce(w, x);
        worst = std::max(worst, std::abs(f - fd) / std::abs(f));
        ++k;
    }
    report(4, "force-potential consistency", worst <= 1e-6,
           "100 points, max relative error = " + sci(worst) + " (tol 1e-6)");
}

void ac5() {
    std::mt19937_64 rng(55);
    double worst = 0;
    double worst_mag = 0;
    for (double mag : {1e8, 1e9, 1e10, 1e-8, 1e-9, 1e-10}) {
        for (int k = 0; k < 20; ++k) {
            const auto w = SuperpositionWeight::finite(std::polar(mag, std::uniform_real_distribution(-kPi, kPi)(rng)));
            const Complex x = oracle::random_point(rng);
            if (std::abs(w.value() * std::exp(I * x) + std::exp(-I * x)) < 0.1) continue;
            const double q = std::abs(qpot(w, x));
            if (q > worst) {
                worst = q;
                worst_mag = mag;
            }
        }
    }
    report(5, "eigenstate potential", worst <= 1e-10,
           "max |Q| = " + sci(worst) + " at |A| = " + sci(worst_mag) + " over points with |denominator| >= 0.1 (tol 1e-10)");
}

void ac6() {
    std::mt19937_64 rng(66);
    IntegratorConfig cfg;
    cfg.sample_dt = 0.01;
    int agree = 0, total = 0;
    std::string first_miss;
    while (total < 100) {
        const Complex v = oracle::random_velocity(rng, std::bernoulli_distribution(0.5)(rng));
        const Mode1D predicted = classify_1d(v);
        const auto tr = run_1d({0.0, v}, 200.0, cfg);
        const auto seen = observed_mode(tr);
        ++total;
        if (seen && *seen == predicted) ++agree;
        else if (first_miss.empty()) first_miss = ", first miss v0 = " + num(v.real()) + "," + num(v.imag());
    }
    const auto loop = run_1d({0.0, {1.0, 0.8}}, 2.0 * kPi);
    const double closure = std::abs(loop.coord(loop.size() - 1, 0) - loop.coord(0, 0));
    const bool bounded = classify_1d({1.0, 0.8}) == Mode1D::Bounded;
    report(6, "classification vs behaviour", agree == total && bounded && closure <= 1e-3,
           std::to_string(agree) + "/" + std::to_string(total) + " agree" + first_miss + "; (1, 0.8) " +
               std::string(to_string(classify_1d({1.0, 0.8}))) + ", closure " + sci(closure) + " (tol 1e-3)");
}

void ac7() {
    const auto r = energy_report_from_lambdas(kReferenceLambdaBar, {"Ruby laser", 694.3}, DirectionalSplit::reference());
    const std::array<double, 6> nm{4999.7, 5204.8, 4999.7, 3085.8, 3085.8, 4999.7};
    const std::array<double, 6> ev{0.24797434, 0.23820099, 0.24797434, 0.40177734, 0.40177734, 0.24797434};
    double dnm = 0, dev = 0;
    for (std::size_t i = 0; i < 6; ++i) {
        dnm = std::max(dnm, std::abs(r.measurements[i].lambda_nm - nm[i]));
        dev = std::max(dev, std::abs(r.measurements[i].energy_ev - ev[i]));
    }
    const double dtot = std::abs(r.total_ev - 1.7856795);
    report(7, "printed-lambda pipeline", dnm <= 0.5 && dev <= 2e-5 && dtot <= 1e-4,
           "max nm deviation " + num(dnm, 3) + " (tol 0.5), max energy deviation " + sci(dev) +
               " eV (tol 2e-5), total " + num(r.total_ev, 9) + " eV (1.7856795 +- 1e-4)");
}

void ac8() {
    const auto sources = reference_sources();
    const auto rows = reproduce_table3(sources, kReferenceLambdaBar, DirectionalSplit::reference());
    double worst = 0, spread = 0;
    for (const auto& r : rows) {
        const double rel = std::abs(r.total_ev - r.source_ev) / r.source_ev;
        worst = std::max(worst, rel);
        spread = std::max(spread, std::abs(r.percent_error - rows[0].percent_error) / rows[0].percent_error);
    }
    report(8, "source comparison", rows.size() == 5 && worst <= 1e-5 && spread <= 1e-9,
           std::to_string(rows.size()) + " sources, max relative error " + sci(worst) + " (tol 1e-5), spread " +
               sci(spread) + " (tol 1e-9)");
}

void ac9() {
    const auto s = table1_preset('d');
    const double t_end = 16.0 * kPi;
    const auto tr = run_2d(s, t_end);
    std::string lam_text;
    bool lam_ok = false;
    try {
        const double lb = extract_lambda_bar(tr, Coordinate::XR);
        lam_ok = lb >= 15.2 && lb <= 16.8;
        lam_text = "lambda_bar(xR) = " + num(lb, 7);
    } catch (const InsufficientOscillations& e) {
        lam_text = std::string("lambda_bar(xR) unavailable (") + e.what() + ")";
    }
    const auto xr = tr.signal(0, Part::Real);
    const auto ups = find_zero_crossings(tr.times(), xr, CrossingDirection::Rising);
    double nearest = std::numeric_limits<double>::infinity();
    for (double t : ups)
        if (std::abs(t - t_end) < std::abs(nearest - t_end)) nearest = t;
    const bool cross_ok = std::abs(nearest - t_end) <= 0.5;
    std::string cross_text = std::isfinite(nearest) ? "nearest rising xR crossing at " + num(nearest, 7)
                                                    : std::string("no rising xR crossing");
    std::string alt_text;
    try {
        const auto alt = run_2d(mode_d_alternate_preset(), t_end);
        alt_text = "; alternate ICs lambda_bar(xR) = " + num(extract_lambda_bar(alt, Coordinate::XR), 7);
    } catch (const Error& e) {
        alt_text = std::string("; alternate ICs: ") + e.what();
    }
    report(9, "end-to-end mode (d)", lam_ok && cross_ok,
           lam_text + " (want [15.2, 16.8]); " + cross_text + " (want 16pi +- 0.5); xR(16pi) = " + num(xr.back(), 6) +
               ", classified " + classify_2d(s).describe() + alt_text);
}

void ac10() {
    std::mt19937_64 rng(1010);
    std::uniform_real_distribution<double> tdist(0.0, 20.0), mag(-1.0, 1.0), ph(-kPi, kPi);
    const DirectionalSplit split = DirectionalSplit::reference();
    std::vector<SpacetimePoint1D> p1;
    std::vector<SpacetimePoint2D> p2;
    for (int i = 0; i < 100; ++i) {
        p1.push_back({tdist(rng), oracle::random_point(rng)});
        p2.push_back({tdist(rng), oracle::random_point(rng), oracle::random_point(rng)});
    }
    const auto a = SuperpositionWeight::finite(std::polar(std::pow(10.0, mag(rng)), ph(rng)));
    const auto b = SuperpositionWeight::finite(std::polar(std::pow(10.0, mag(rng)), ph(rng)));
    const double r1 = kg_residual_1d(a, p1).max_rel;
    const double r2 = kg_residual_2d(a, b, split.nx(), split.ny(), p2).max_rel;
    const double s1 = kg_residual_1d(a, p1, 1.01).max_rel;
    const double s2 = kg_residual_2d(a, b, split.nx(), split.ny(), p2, 1.01).max_rel;
    report(10, "klein-gordon residuals", r1 <= 1e-10 && r2 <= 1e-10 && s1 > 1e-3 && s2 > 1e-3,
           "1D " + sci(r1) + ", 2D " + sci(r2) + " (tol 1e-10); perturbed 1D " + sci(s1) + ", 2D " + sci(s2) +
               " (want > 1e-3)");
}

std::string run_tool(const std::string& args) {
    std::string out;
    FILE* p = popen((std::string(PHOTRAJ_TOOL_PATH) + " " + args + " 2>&1").c_str(), "r");
    if (!p) return "<popen failed>";
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
    const int status = pclose(p);
    return out + "\nstatus " + std::to_string(status);
}

void ac11() {
    auto in_process = [] {
        std::ostringstream out, err;
        const int code = cli::run({"reproduce", "--table", "3"}, out, err);
        return std::to_string(code) + out.str() + err.str();
    };
    const std::string a = in_process(), b = in_process();
    const std::string c = run_tool("reproduce --table 3"), d = run_tool("reproduce --table 3");
    const bool ok = a == b && c == d && c.find("status 0") != std::string::npos && a.size() > 100;
    report(11, "determinism", ok,
           std::string("in-process runs ") + (a == b ? "identical" : "differ") + ", process runs " +
               (c == d ? "identical" : "differ") + " (" + std::to_string(c.size()) + " bytes)");
}

}  // namespace

int main() {
    for (auto* f : {ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9, ac10, ac11}) {
        try {
            f();
        } catch (const std::exception& e) {
            std::cout << "[FAIL] criterion raised: " << e.what() << std::endl;
            ++failures;
        }
    }
    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
    return failures == 0 ? 0 : 1;
}
