#pragma once

// Command-line front end. run() takes the arguments without the program name
// and writes to the given streams, so tests can drive it in-process.
//
// Exit codes: 0 success, 1 numerical or invariant failure, 2 usage error.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "photraj/photraj.hpp"

namespace photraj::cli {

using json = nlohmann::ordered_json;

enum Exit : int { kOk = 0, kFailure = 1, kUsage = 2 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- parsing

// "0.5", "-2", "16pi", "-pi", "0.5pi".
inline double parse_real(std::string_view s) {
    auto trim = [](std::string_view v) {
        while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
        while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
        return v;
    };
    std::string_view v = trim(s);
    double scale = 1.0;
    if (v.size() >= 2 && v.substr(v.size() - 2) == "pi") {
        scale = std::numbers::pi;
        v.remove_suffix(2);
        v = trim(v);
        if (v.empty() || v == "+") return scale;
        if (v == "-") return -scale;
        if (v.back() == '*') v = trim(v.substr(0, v.size() - 1));
    }
    if (!v.empty() && v.front() == '+') v.remove_prefix(1);
    double x = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
        throw UsageError("cannot parse number '" + std::string(s) + "'");
    if (!std::isfinite(x)) throw UsageError("number out of range '" + std::string(s) + "'");
    return x * scale;
}

inline std::vector<double> parse_list(std::string_view s, std::size_t expected, std::string_view what) {
    std::vector<double> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = s.find(',', start);
        out.push_back(parse_real(s.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                                   : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (out.size() != expected)
        throw UsageError(std::string(what) + " expects " + std::to_string(expected) + " comma-separated values, got " +
                         std::to_string(out.size()));
    return out;
}

inline Complex parse_complex(std::string_view s, std::string_view what) {
    const auto v = parse_list(s, 2, what);
    return {v[0], v[1]};
}

inline std::string fmt(double x, int precision = 17) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    return buf;
}

inline std::string fixed(double x, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    return buf;
}

inline std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

inline json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const SuperpositionWeight& w) {
    if (w.is_plus_eigenstate()) return "plus-eigenstate";
    return to_json(w.value());
}

inline DirectionalSplit split_or_throw(double nx) {
    try {
        return DirectionalSplit::from_nx(nx);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
}

// Output target: "-" is the command's own output stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& console) {
        if (path.empty()) throw UsageError("an output path is required (use --output PATH, or '-' for stdout)");
        if (path == "-") {
            os_ = &console;
            return;
        }
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_) throw UsageError("cannot open output path '" + path + "'");
        os_ = file_.get();
    }
    std::ostream& stream() { return *os_; }
    bool is_console() const noexcept { return !file_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_ = nullptr;
};

struct IntegratorFlags {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.1;
    std::string sample_dt = "0.001";
    double singularity_eps = 1e-8;

    void add_to(CLI::App* app) {
        app->add_option("--rel-tol", rel_tol, "Relative tolerance")->capture_default_str();
        app->add_option("--abs-tol", abs_tol, "Absolute tolerance")->capture_default_str();
        app->add_option("--max-step", max_step, "Largest step in t_bar")->capture_default_str();
        app->add_option("--sample-dt", sample_dt, "Output sample spacing in t_bar")->capture_default_str();
        app->add_option("--singularity-eps", singularity_eps, "Fail when |A e^{ix} + e^{-ix}| drops below this")
            ->capture_default_str();
    }
    IntegratorConfig config() const {
        IntegratorConfig c;
        c.rel_tol = rel_tol;
        c.abs_tol = abs_tol;
        c.max_step = max_step;
        c.sample_dt = parse_real(sample_dt);
        c.singularity_eps = singularity_eps;
        try {
            c.validate();
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
        return c;
    }
};

inline json to_json(const IntegratorConfig& c) {
    return {{"rel_tol", c.rel_tol},
            {"abs_tol", c.abs_tol},
            {"max_step", c.max_step},
            {"sample_dt", c.sample_dt},
            {"singularity_eps", c.singularity_eps}};
}

inline DirectionalSplit split_from_flag(const std::string& nx) {
    return nx.empty() ? DirectionalSplit::reference() : split_or_throw(parse_real(nx));
}

inline Scenario2D preset_from_flag(const std::string& name, const std::string& nx) {
    try {
        Scenario2D s = preset_by_name(name);
        if (!nx.empty()) s.split = split_or_throw(parse_real(nx));
        return s;
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string preset;
    std::string ic_1d;
    std::string ic_2d;
    std::string nx;
    std::string t_end = "10";
    std::string format = "csv";
    std::string output;
    IntegratorFlags integrator;
};

inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
    const bool two = tr.dim() == 2;
    os << (two ? "t_bar,xR,xI,yR,yI,vxR,vxI,vyR,vyI\n" : "t_bar,xR,xI,vxR,vxI\n");
    for (std::size_t i = 0; i < tr.size(); ++i) {
        os << fmt(tr.time(i));
        for (std::size_t a = 0; a < tr.dim(); ++a) os << ',' << fmt(tr.coord(i, a).real()) << ',' << fmt(tr.coord(i, a).imag());
        for (std::size_t a = 0; a < tr.dim(); ++a) os << ',' << fmt(tr.vel(i, a).real()) << ',' << fmt(tr.vel(i, a).imag());
        os << '\n';
    }
}

inline json trajectory_columns(const Trajectory& tr) {
    json cols = json::object();
    cols["t_bar"] = tr.times();
    const char* names[2][2] = {{"xR", "xI"}, {"yR", "yI"}};
    const char* vnames[2][2] = {{"vxR", "vxI"}, {"vyR", "vyI"}};
    for (std::size_t a = 0; a < tr.dim(); ++a) {
        cols[names[a][0]] = tr.signal(a, Part::Real);
        cols[names[a][1]] = tr.signal(a, Part::Imag);
    }
    for (std::size_t a = 0; a < tr.dim(); ++a) {
        std::vector<double> re(tr.size()), im(tr.size());
        for (std::size_t i = 0; i < tr.size(); ++i) {
            re[i] = tr.vel(i, a).real();
            im[i] = tr.vel(i, a).imag();
        }
        cols[vnames[a][0]] = re;
        cols[vnames[a][1]] = im;
    }
    return cols;
}

inline json constant_json(Complex x0, Complex u) {
    try {
        return to_json(constant_from_velocity(x0, u).D);
    } catch (const NearSingular&) {
        return nullptr;
    }
}

inline int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
    const int sources = !a.preset.empty() + !a.ic_1d.empty() + !a.ic_2d.empty();
    if (sources != 1) throw UsageError("simulate needs exactly one of --preset, --ic-1d, --ic-2d");
    const double t_end = parse_real(a.t_end);
    if (!(t_end > 0)) throw UsageError("--t-end must be positive");
    const IntegratorConfig cfg = a.integrator.config();

    json meta;
    std::optional<Trajectory> tr;

    if (!a.ic_1d.empty()) {
        if (!a.nx.empty()) throw UsageError("--nx applies to two-dimensional runs only");
        const auto v = parse_list(a.ic_1d, 4, "--ic-1d");
        const InitialCondition1D ic{{v[0], v[1]}, {v[2], v[3]}};
        Sink sink(a.output, out);
        const SuperpositionWeight w = weight_from_ic(ic);
        meta = {{"provenance", "user initial condition (1D)"},
                {"dimension", 1},
                {"t_end", t_end},
                {"initial_condition", {{"x0", to_json(ic.x0)}, {"v0", to_json(ic.v0)}}},
                {"integrator", to_json(cfg)},
                {"weights", {{"A", to_json(w)}}},
                {"constants", {{"D", constant_json(ic.x0, ic.v0)}}},
                {"classification",
                 {{"mode", std::string(to_string(classify_1d(ic.v0)))}, {"margin", mode_margin(ic.v0)}}}};
        tr = run_1d(ic, t_end, cfg);
        if (a.format == "csv") {
            write_trajectory_csv(sink.stream(), *tr);
        } else {
            json doc{{"metadata", meta}, {"columns", trajectory_columns(*tr)}};
            sink.stream() << doc.dump(2) << '\n';
        }
        if (!sink.is_console()) out << "wrote " << tr->size() << " samples to " << a.output << '\n';
        return kOk;
    }

    Scenario2D s = a.preset.empty() ? Scenario2D{split_from_flag(a.nx), {}, std::nullopt, "user initial condition (2D)"}
                                    : preset_from_flag(a.preset, a.nx);
    if (a.preset.empty()) {
        const auto v = parse_list(a.ic_2d, 8, "--ic-2d");
        s.ic = {{v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}, {v[6], v[7]}};
    }
    Sink sink(a.output, out);
    const WeightPair w = weights_2d(s);
    const Mode2D mode = classify_2d(s);
    const auto& ic = s.ic;
    meta = {{"provenance", s.provenance},
            {"dimension", 2},
            {"t_end", t_end},
            {"split", {{"nx", s.split.nx()}, {"ny", s.split.ny()}}},
            {"initial_condition",
             {{"x0", to_json(ic.x0)}, {"y0", to_json(ic.y0)}, {"vx0", to_json(ic.vx0)}, {"vy0", to_json(ic.vy0)}}},
            {"integrator", to_json(cfg)},
            {"weights", {{"A", to_json(w.A)}, {"B", to_json(w.B)}}},
            {"constants",
             {{"D", constant_json(ic.x0, ic.vx0 / s.split.nx())}, {"J", constant_json(ic.y0, ic.vy0 / s.split.ny())}}},
            {"classification",
             {{"label", std::string(1, mode.label_char())},
              {"description", mode.describe()},
              {"margin_x", mode_margin(ic.vx0, s.split.nx())},
              {"margin_y", mode_margin(ic.vy0, s.split.ny())}}},
            {"reference_label",
             s.reference_label ? json(std::string(1, static_cast<char>(*s.reference_label))) : json(nullptr)}};
    tr = run_2d(s, t_end, cfg);
    if (a.format == "csv") {
        write_trajectory_csv(sink.stream(), *tr);
    } else {
        json doc{{"metadata", meta}, {"columns", trajectory_columns(*tr)}};
        sink.stream() << doc.dump(2) << '\n';
    }
    if (!sink.is_console()) out << "wrote " << tr->size() << " samples to " << a.output << '\n';
    return kOk;
}

// ---------------------------------------------------------------- classify

struct ClassifyArgs {
    std::string v;
    std::string vx;
    std::string vy;
    std::string nx;
    std::string preset;
    std::string format = "text";
};

inline int cmd_classify(const ClassifyArgs& a, std::ostream& out) {
    const bool one = !a.v.empty();
    const bool two = !a.vx.empty() || !a.vy.empty();
    const bool preset = !a.preset.empty();
    if (one + two + preset != 1) throw UsageError("classify needs --v, or --vx and --vy, or --preset");

    if (one) {
        if (!a.nx.empty()) throw UsageError("--nx applies to two-dimensional velocities only");
        const Complex v = parse_complex(a.v, "--v");
        const Mode1D m = classify_1d(v);
        if (a.format == "json") {
            out << json{{"mode", std::string(to_string(m))}, {"margin", mode_margin(v)}}.dump(2) << '\n';
        } else {
            out << to_string(m) << '\n' << "margin " << fmt(mode_margin(v), 10) << '\n';
        }
        return kOk;
    }

    if (!preset && (a.vx.empty() || a.vy.empty()))
        throw UsageError("two-dimensional classification needs both --vx and --vy");
    const Scenario2D s = preset ? preset_from_flag(a.preset, a.nx)
                                : Scenario2D{split_from_flag(a.nx),
                                             {0.0, 0.0, parse_complex(a.vx, "--vx"), parse_complex(a.vy, "--vy")},
                                             std::nullopt,
                                             "user velocities"};
    const Mode2D m = classify_2d(s);
    const double mx = mode_margin(s.ic.vx0, s.split.nx());
    const double my = mode_margin(s.ic.vy0, s.split.ny());
    if (a.format == "json") {
        json j{{"label", std::string(1, m.label_char())},
               {"description", m.describe()},
               {"margin_x", mx},
               {"margin_y", my},
               {"provenance", s.provenance}};
        if (s.reference_label) j["reference_label"] = std::string(1, static_cast<char>(*s.reference_label));
        out << j.dump(2) << '\n';
        return kOk;
    }
    out << m.describe() << '\n';
    out << "margin x " << fmt(mx, 10) << '\n';
    out << "margin y " << fmt(my, 10) << '\n';
    if (s.reference_label && *s.reference_label != m.label)
        out << "reference label " << static_cast<char>(*s.reference_label) << '\n';
    return kOk;
}

// ---------------------------------------------------------- potential-grid

struct PotentialGridArgs {
    std::string A;
    std::string re_range = "-pi,pi";
    std::string im_range = "-1,1";
    std::size_t re_count = 201;
    std::size_t im_count = 101;
    std::string format = "csv";
    std::string output = "-";
};

inline int cmd_potential_grid(const PotentialGridArgs& a, std::ostream& out, std::ostream& err) {
    if (a.A.empty()) throw UsageError("potential-grid needs --A re,im");
    SuperpositionWeight w = SuperpositionWeight::plus_eigenstate();
    if (a.A != "plus" && a.A != "inf") w = SuperpositionWeight::finite(parse_complex(a.A, "--A"));
    const auto re = parse_list(a.re_range, 2, "--re-range");
    const auto im = parse_list(a.im_range, 2, "--im-range");
    if (a.re_count < 2 || a.im_count < 2) throw UsageError("grid resolution must be at least 2 per axis");
    if (!(re[1] > re[0]) || !(im[1] > im[0])) throw UsageError("grid ranges must satisfy min < max");
    if (w.is_eigenstate()) {
        err << "potential-grid: A describes a momentum eigenstate; Q and F vanish identically, nothing to tabulate\n";
        return kUsage;
    }
    Sink sink(a.output, out);
    const FieldGrid g = field_grid(w, {re[0], re[1], im[0], im[1]}, {a.re_count, a.im_count});
    std::ostream& os = sink.stream();
    if (a.format == "csv") {
        os << "xR,xI,ReQ,ImQ,ReF,ImF,node_flag\n";
        for (const PotentialSample& p : g.samples) {
            os << fmt(p.x.real()) << ',' << fmt(p.x.imag()) << ',';
            if (p.node) os << "nan,nan,nan,nan,1\n";
            else
                os << fmt(p.Q.real()) << ',' << fmt(p.Q.imag()) << ',' << fmt(p.F.real()) << ',' << fmt(p.F.imag())
                   << ",0\n";
        }
    } else {
        json rows = json::array();
        for (const PotentialSample& p : g.samples) {
            if (p.node) rows.push_back({{"x", to_json(p.x)}, {"Q", nullptr}, {"F", nullptr}, {"node", true}});
            else rows.push_back({{"x", to_json(p.x)}, {"Q", to_json(p.Q)}, {"F", to_json(p.F)}, {"node", false}});
        }
        json doc{{"metadata",
                  {{"provenance", "quantum potential of the 1D superposition"},
                   {"A", to_json(w)},
                   {"region", {re[0], re[1], im[0], im[1]}},
                   {"resolution", {a.re_count, a.im_count}}}},
                 {"samples", rows}};
        os << doc.dump(2) << '\n';
    }
    if (!sink.is_console()) out << "wrote " << g.samples.size() << " grid points to " << a.output << '\n';
    return kOk;
}

// ---------------------------------------------------------------- mode-map

struct ModeMapArgs {
    std::string axis = "x-1d";
    std::string vr_range = "-2,2";
    std::string vi_range = "-1,1";
    std::size_t vr_count = 41;
    std::size_t vi_count = 21;
    std::string nx;
    std::size_t verify = 0;
    double verify_margin = 0.05;
    std::uint64_t seed = 20240601;
    std::string format = "csv";
    std::string output = "-";
};

struct ModeCell {
    Complex v;
    double margin;
    Mode1D mode;
};

struct VerifyOutcome {
    std::size_t checked = 0;
    std::size_t agreed = 0;
    std::vector<std::string> disagreements;
};

// Integrate one axis from x0 = 0 to t = 200 and compare observed with predicted mode.
inline VerifyOutcome verify_cells(const std::vector<ModeCell>& cells, double n, std::size_t count, double min_margin,
                                  std::uint64_t seed) {
    std::vector<const ModeCell*> eligible;
    for (const ModeCell& c : cells)
        if (std::abs(c.margin) >= min_margin) eligible.push_back(&c);
    VerifyOutcome r;
    if (eligible.empty()) return r;
    std::mt19937_64 rng(seed);
    std::shuffle(eligible.begin(), eligible.end(), rng);
    IntegratorConfig cfg;
    cfg.sample_dt = 0.01;
    for (std::size_t i = 0; i < std::min(count, eligible.size()); ++i) {
        const ModeCell& c = *eligible[i];
        ++r.checked;
        std::optional<Mode1D> seen;
        try {
            const Trajectory tr = run_axis(weight_from_velocity(0.0, c.v / n), n, 0.0, 200.0, cfg);
            seen = observed_mode(tr, 0, n);
        } catch (const Error&) {
        }
        if (seen && *seen == c.mode) {
            ++r.agreed;
        } else {
            r.disagreements.push_back("v = " + fmt(c.v.real(), 6) + (c.v.imag() < 0 ? "" : "+") + fmt(c.v.imag(), 6) +
                                      "i predicted " + std::string(to_string(c.mode)) + ", observed " +
                                      (seen ? std::string(to_string(*seen)) : std::string("unclear")));
        }
    }
    return r;
}

inline int cmd_mode_map(const ModeMapArgs& a, std::ostream& out, std::ostream& err) {
    if (a.vr_count < 2 || a.vi_count < 2) throw UsageError("mode-map grid counts must be at least 2");
    const auto vr = parse_list(a.vr_range, 2, "--vr-range");
    const auto vi = parse_list(a.vi_range, 2, "--vi-range");
    if (!(vr[1] > vr[0]) || !(vi[1] > vi[0])) throw UsageError("mode-map ranges must satisfy min < max");
    double n = 1.0;
    if (a.axis == "x-1d") {
        if (!a.nx.empty()) throw UsageError("--nx applies to the x-2d and y-2d axes only");
    } else {
        const DirectionalSplit split = split_from_flag(a.nx);
        n = a.axis == "x-2d" ? split.nx() : split.ny();
    }
    Sink sink(a.output, out);

    std::vector<ModeCell> cells;
    cells.reserve(a.vr_count * a.vi_count);
    for (std::size_t j = 0; j < a.vi_count; ++j) {
        const double im = vi[0] + (vi[1] - vi[0]) * static_cast<double>(j) / static_cast<double>(a.vi_count - 1);
        for (std::size_t i = 0; i < a.vr_count; ++i) {
            const double re = vr[0] + (vr[1] - vr[0]) * static_cast<double>(i) / static_cast<double>(a.vr_count - 1);
            const Complex v{re, im};
            cells.push_back({v, mode_margin(v, n), classify_axis(v, n)});
        }
    }

    std::ostream& os = sink.stream();
    if (a.format == "csv") {
        os << "vR,vI,margin,mode\n";
        for (const ModeCell& c : cells)
            os << fmt(c.v.real()) << ',' << fmt(c.v.imag()) << ',' << fmt(c.margin) << ',' << to_string(c.mode) << '\n';
    } else {
        json rows = json::array();
        for (const ModeCell& c : cells)
            rows.push_back({{"v", to_json(c.v)}, {"margin", c.margin}, {"mode", std::string(to_string(c.mode))}});
        os << json{{"metadata", {{"provenance", "mode threshold v_R^2 - v_I^2 = n^2/2"}, {"axis", a.axis}, {"n", n}}},
                   {"cells", rows}}
                  .dump(2)
           << '\n';
    }

    if (a.verify == 0) return kOk;
    std::ostream& console = sink.is_console() ? err : out;
    const VerifyOutcome v = verify_cells(cells, n, a.verify, a.verify_margin, a.seed);
    if (v.checked == 0) {
        console << "verify: no cells with |margin| >= " << fmt(a.verify_margin, 6) << '\n';
        return kFailure;
    }
    console << "verify: " << v.agreed << "/" << v.checked << " cells agree ("
            << fixed(100.0 * static_cast<double>(v.agreed) / static_cast<double>(v.checked), 1) << "%)\n";
    for (const auto& d : v.disagreements) console << "  " << d << '\n';
    return v.agreed == v.checked ? kOk : kFailure;
}

// ---------------------------------------------------------------- reproduce

struct ReproduceArgs {
    int table = 0;
    bool from_printed = false;
    std::string source = "Ruby laser";
    std::string preset = "table1-d";
    std::string t_end = "16pi";
    std::string format = "csv";
    std::string output;
    IntegratorFlags integrator;
};

inline SourceLight resolve_source(const std::string& s) {
    for (const SourceLight& src : reference_sources())
        if (src.name == s) return src;
    try {
        const double nm = parse_real(s);
        if (nm > 0) return {fmt(nm, 10) + " nm source", nm};
    } catch (const UsageError&) {
    }
    throw UsageError("unknown source '" + s + "' (use a laser name or a wavelength in nm)");
}

inline json to_json(const EnergyReport& r) {
    json ms = json::array();
    for (const StandingWaveMeasurement& m : r.measurements) {
        const PlaneInfo& p = plane_info(m.plane);
        ms.push_back({{"plane", p.number},
                      {"coordinates", std::string(p.name)},
                      {"lambda_bar", m.lambda_bar},
                      {"lambda_nm", m.lambda_nm},
                      {"energy_ev", m.energy_ev}});
    }
    return {{"source", {{"name", r.source.name}, {"wavelength_nm", r.source.wavelength_nm}}},
            {"split", {{"nx", r.split.nx()}, {"ny", r.split.ny()}}},
            {"measurements", ms},
            {"total_ev", r.total_ev},
            {"source_ev", r.source_ev},
            {"percent_error", r.percent_error}};
}

inline void print_table1(std::ostream& os) {
    os << pad("label", 7) << pad("vx0", 26) << pad("vy0", 26) << pad("margin_x", 14) << pad("margin_y", 14)
       << pad("reference", 11) << pad("classified", 12) << "description\n";
    for (char l : {'a', 'b', 'c', 'd'}) {
        const Scenario2D s = table1_preset(l);
        const Mode2D m = classify_2d(s);
        auto cplx = [](Complex z) { return fixed(z.real(), 6) + (z.imag() < 0 ? " - " : " + ") + fixed(std::abs(z.imag()), 5) + "i"; };
        os << pad(std::string(1, l), 7) << pad(cplx(s.ic.vx0), 26) << pad(cplx(s.ic.vy0), 26)
           << pad(fmt(mode_margin(s.ic.vx0, s.split.nx()), 5), 14) << pad(fmt(mode_margin(s.ic.vy0, s.split.ny()), 5), 14)
           << pad(std::string(1, l), 11) << pad(std::string(1, m.label_char()), 12) << m.describe() << '\n';
    }
}

inline void print_report(std::ostream& os, const EnergyReport& r) {
    os << "source " << r.source.name << " (" << fmt(r.source.wavelength_nm, 10) << " nm), nx = " << fixed(r.split.nx(), 6)
       << ", ny = " << fixed(r.split.ny(), 6) << '\n';
    os << pad("plane", 7) << pad("coords", 8) << pad("lambda_bar", 12) << pad("lambda_nm", 12) << "energy_ev\n";
    for (const StandingWaveMeasurement& m : r.measurements) {
        const PlaneInfo& p = plane_info(m.plane);
        os << pad(std::to_string(p.number), 7) << pad(std::string(p.name), 8) << pad(fixed(m.lambda_bar, 4), 12)
           << pad(fixed(m.lambda_nm, 3), 12) << fixed(m.energy_ev, 8) << '\n';
    }
    os << "total_ev " << fixed(r.total_ev, 8) << "  source_ev " << fixed(r.source_ev, 8) << "  percent_error "
       << fixed(r.percent_error, 6) << '\n';
}

inline int cmd_reproduce(const ReproduceArgs& a, std::ostream& out, std::ostream& err) {
    if (a.table < 1 || a.table > 3) throw UsageError("--table must be 1, 2 or 3");
    std::optional<Sink> sink;
    if (!a.output.empty()) sink.emplace(a.output, out);
    const DirectionalSplit split = DirectionalSplit::reference();

    if (a.table == 1) {
        print_table1(out);
        if (!sink) return kOk;
        std::ostream& os = sink->stream();
        if (a.format == "csv") {
            os << "label,vxR,vxI,vyR,vyI,margin_x,margin_y,reference,classified,provenance\n";
            for (char l : {'a', 'b', 'c', 'd'}) {
                const Scenario2D s = table1_preset(l);
                os << l << ',' << fmt(s.ic.vx0.real()) << ',' << fmt(s.ic.vx0.imag()) << ',' << fmt(s.ic.vy0.real())
                   << ',' << fmt(s.ic.vy0.imag()) << ',' << fmt(mode_margin(s.ic.vx0, s.split.nx())) << ','
                   << fmt(mode_margin(s.ic.vy0, s.split.ny())) << ',' << l << ',' << classify_2d(s).label_char()
                   << ',' << s.provenance << '\n';
            }
        } else {
            json rows = json::array();
            for (char l : {'a', 'b', 'c', 'd'}) {
                const Scenario2D s = table1_preset(l);
                const Mode2D m = classify_2d(s);
                rows.push_back({{"label", std::string(1, l)},
                                {"provenance", s.provenance},
                                {"vx0", to_json(s.ic.vx0)},
                                {"vy0", to_json(s.ic.vy0)},
                                {"margin_x", mode_margin(s.ic.vx0, s.split.nx())},
                                {"margin_y", mode_margin(s.ic.vy0, s.split.ny())},
                                {"reference", std::string(1, l)},
                                {"classified", std::string(1, m.label_char())},
                                {"description", m.describe()}});
            }
            os << json{{"provenance", "Table 1"}, {"presets", rows}}.dump(2) << '\n';
        }
        return kOk;
    }

    if (a.table == 2) {
        const SourceLight src = resolve_source(a.source);
        std::optional<EnergyReport> report;
        std::string provenance;
        if (a.from_printed) {
            report = energy_report_from_lambdas(kReferenceLambdaBar, src, split);
            provenance = "Table 2 (printed lambda_bar values)";
        } else {
            const Scenario2D s = preset_from_flag(a.preset, "");
            const double t_end = parse_real(a.t_end);
            if (!(t_end > 0)) throw UsageError("--t-end must be positive");
            const Trajectory tr = run_2d(s, t_end, a.integrator.config());
            try {
                report = energy_report(tr, src, s.split);
            } catch (const InsufficientOscillations& e) {
                err << "reproduce: " << s.provenance << " over t_bar in [0, " << fmt(t_end, 8)
                    << "] gives no standing-wave measurement: " << e.what() << '\n';
                return kFailure;
            }
            provenance = "Table 2 (measured from " + s.provenance + " trajectory)";
        }
        const EnergyReport& r = *report;
        out << provenance << '\n';
        print_report(out, r);
        if (!sink) return kOk;
        std::ostream& os = sink->stream();
        if (a.format == "csv") {
            os << "plane,coordinates,lambda_bar,lambda_nm,energy_ev\n";
            for (const StandingWaveMeasurement& m : r.measurements) {
                const PlaneInfo& p = plane_info(m.plane);
                os << p.number << ',' << p.name << ',' << fmt(m.lambda_bar) << ',' << fmt(m.lambda_nm) << ','
                   << fmt(m.energy_ev) << '\n';
            }
        } else {
            json doc = to_json(r);
            doc["provenance"] = provenance;
            os << doc.dump(2) << '\n';
        }
        return kOk;
    }

    const auto sources = reference_sources();
    const auto rows = reproduce_table3(sources, kReferenceLambdaBar, split);
    out << "Table 3: total standing-wave energy against source photon energy\n";
    out << pad("source", 20) << pad("lambda_nm", 12) << pad("source_ev", 13) << pad("total_ev", 13) << "percent_error\n";
    for (const EnergyReport& r : rows)
        out << pad(r.source.name, 20) << pad(fixed(r.source.wavelength_nm, 1), 12) << pad(fixed(r.source_ev, 8), 13)
            << pad(fixed(r.total_ev, 8), 13) << fixed(r.percent_error, 6) << '\n';
    if (!sink) return kOk;
    std::ostream& os = sink->stream();
    if (a.format == "csv") {
        os << "source,wavelength_nm,source_ev,total_ev,percent_error\n";
        for (const EnergyReport& r : rows)
            os << r.source.name << ',' << fmt(r.source.wavelength_nm) << ',' << fmt(r.source_ev) << ','
               << fmt(r.total_ev) << ',' << fmt(r.percent_error) << '\n';
    } else {
        json arr = json::array();
        for (const EnergyReport& r : rows) arr.push_back(to_json(r));
        os << json{{"provenance", "Table 3"}, {"lambda_bar", kReferenceLambdaBar}, {"rows", arr}}.dump(2) << '\n';
    }
    return kOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
    std::size_t points = 100;
    std::uint64_t seed = 7;
    bool inject_fault = false;
};

struct CheckResult {
    std::string name;
    double value;
    double tolerance;
    bool ok() const { return value <= tolerance; }
};

namespace detail {

inline SuperpositionWeight random_weight(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mag(-2.0, 2.0), ph(-std::numbers::pi, std::numbers::pi);
    return SuperpositionWeight::finite(std::polar(std::pow(10.0, mag(rng)), ph(rng)));
}

inline Complex random_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> re(-std::numbers::pi, std::numbers::pi), im(-1.0, 1.0);
    return {re(rng), im(rng)};
}

// Velocity on the requested side of the threshold, away from it by min_margin
// and away from the eigenstate values.
inline Complex random_velocity(std::mt19937_64& rng, bool propagating, double n = 1.0, double min_margin = 0.05) {
    std::uniform_real_distribution<double> re(-2.0 * n, 2.0 * n), im(-n, n);
    while (true) {
        const Complex v{re(rng), im(rng)};
        const double m = mode_margin(v, n);
        if ((m > 0) != propagating || std::abs(m) < min_margin * n * n) continue;
        if (std::abs(1.0 - v / n) < 1e-2 || std::abs(1.0 + v / n) < 1e-2) continue;
        return v;
    }
}

}  // namespace detail

inline std::vector<CheckResult> run_invariant_checks(std::size_t points, std::uint64_t seed, bool inject_fault) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> tdist(0.0, 10.0);
    const double omega = inject_fault ? 1.01 : 1.0;
    std::vector<CheckResult> out;

    ResidualReport kg1, kg2, helm;
    for (std::size_t i = 0; i < points; ++i) {
        const SuperpositionWeight a = detail::random_weight(rng);
        const SuperpositionWeight b = detail::random_weight(rng);
        const SpacetimePoint1D p1{tdist(rng), detail::random_point(rng)};
        const SpacetimePoint2D p2{tdist(rng), detail::random_point(rng), detail::random_point(rng)};
        kg1.merge(kg_residual_1d(a, std::span(&p1, 1), omega));
        const DirectionalSplit split = DirectionalSplit::reference();
        kg2.merge(kg_residual_2d(a, b, split.nx(), split.ny(), std::span(&p2, 1), omega));
        helm.merge(helmholtz_residual(a, std::span(&p1.x, 1)));
    }
    out.push_back({"klein-gordon 1d (max relative residual)", kg1.max_rel, 1e-10});
    out.push_back({"klein-gordon 2d (max relative residual)", kg2.max_rel, 1e-10});
    out.push_back({"helmholtz x (max relative residual)", helm.max_rel, 1e-10});

    double force = 0;
    for (std::size_t i = 0; i < points;) {
        const SuperpositionWeight w = detail::random_weight(rng);
        const Complex x = detail::random_point(rng);
        const Complex den = w.value() * std::exp(I * x) + std::exp(-I * x);
        if (std::abs(den) < 0.1 * (std::abs(w.value() * std::exp(I * x)) + std::abs(std::exp(-I * x)))) continue;
        const double h = 1e-5;
        const Complex fd = -(qpot(w, x + h) - qpot(w, x - h)) / (2.0 * h);
        const Complex f = qforce(w, x);
        force = std::max(force, std::abs(f - fd) / std::abs(f));
        ++i;
    }
    out.push_back({"force vs -dQ/dx (max relative error)", force, 1e-6});

    double implicit = 0, constraint = 0;
    IntegratorConfig cfg;
    cfg.sample_dt = 0.01;
    for (int k = 0; k < 6; ++k) {
        const InitialCondition1D ic{0.0, detail::random_velocity(rng, k % 2 == 0)};
        const SuperpositionWeight w = weight_from_ic(ic);
        const IntegrationConstant c = integration_constant(ic);
        const Trajectory tr = run_1d(ic, 20.0, cfg);
        implicit = std::max(implicit, implicit_residual(w, c, tr));
        constraint = std::max(constraint, constraint19_residual(w, c, tr));
    }
    const DirectionalSplit split = DirectionalSplit::reference();
    for (int k = 0; k < 4; ++k) {
        Scenario2D s{split,
                     {0.0, 0.0, detail::random_velocity(rng, k & 1, split.nx()),
                      detail::random_velocity(rng, k & 2, split.ny())},
                     std::nullopt,
                     "random"};
        const WeightPair w = weights_2d(s);
        const ConstantPair c = constants_2d(s);
        const Trajectory tr = run_2d(s, 20.0, cfg);
        implicit = std::max({implicit, implicit_residual(w.A, c.D, tr, 0, split.nx()),
                             implicit_residual(w.B, c.J, tr, 1, split.ny())});
        constraint = std::max({constraint, constraint19_residual(w.A, c.D, tr, 0), constraint19_residual(w.B, c.J, tr, 1)});
    }
    out.push_back({"implicit solution (max residual)", implicit, 1e-8});
    out.push_back({"real constraint (max residual)", constraint, 1e-8});
    return out;
}

inline int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    if (a.points == 0) throw UsageError("--points must be positive");
    const auto checks = run_invariant_checks(a.points, a.seed, a.inject_fault);
    const CheckResult* first_bad = nullptr;
    for (const CheckResult& c : checks) {
        out << (c.ok() ? "ok    " : "FAIL  ") << pad(c.name, 44) << fmt(c.value, 3) << "  (tolerance " << fmt(c.tolerance, 3)
            << ")\n";
        if (!c.ok() && !first_bad) first_bad = &c;
    }
    if (first_bad) {
        err << "verify: " << first_bad->name << " = " << fmt(first_bad->value, 6) << " exceeds "
            << fmt(first_bad->tolerance, 3) << '\n';
        return kFailure;
    }
    out << "all " << checks.size() << " invariants hold over " << a.points << " points\n";
    return kOk;
}

// ---------------------------------------------------------------- entry

inline int run(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Complex trajectories of photon superposition states"};
    app.name("photraj");
    app.set_config("--config", "", "Read options from a key = value file ([subcommand] sections)");
    app.require_subcommand(1);
    const std::vector<std::string> data_formats{"csv", "json"};

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "Integrate a 1D or 2D trajectory and write its samples");
    s->add_option("--preset", sim.preset, "table1-a .. table1-d, mode-d-alt");
    s->add_option("--ic-1d", sim.ic_1d, "x0R,x0I,v0R,v0I");
    s->add_option("--ic-2d", sim.ic_2d, "x0R,x0I,y0R,y0I,vxR,vxI,vyR,vyI");
    s->add_option("--nx", sim.nx, "Directional factor n_x (2D); n_y = sqrt(1 - n_x^2)");
    s->add_option("--t-end", sim.t_end, "Final t_bar; accepts a pi suffix such as 16pi")->capture_default_str();
    s->add_option("--format", sim.format)->check(CLI::IsMember(data_formats))->capture_default_str();
    s->add_option("-o,--output", sim.output, "Output path, '-' for stdout");
    sim.integrator.add_to(s);

    ClassifyArgs cls;
    auto* c = app.add_subcommand("classify", "Classify initial velocities by mode");
    c->add_option("--v", cls.v, "1D velocity vR,vI");
    c->add_option("--vx", cls.vx, "2D x velocity vR,vI");
    c->add_option("--vy", cls.vy, "2D y velocity vR,vI");
    c->add_option("--nx", cls.nx, "Directional factor n_x (2D)");
    c->add_option("--preset", cls.preset, "table1-a .. table1-d, mode-d-alt");
    c->add_option("--format", cls.format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();

    PotentialGridArgs pg;
    auto* p = app.add_subcommand("potential-grid", "Tabulate the quantum potential and force on a complex grid");
    p->add_option("--A", pg.A, "Superposition weight re,im");
    p->add_option("--re-range", pg.re_range, "x_R range min,max")->capture_default_str();
    p->add_option("--im-range", pg.im_range, "x_I range min,max")->capture_default_str();
    p->add_option("--re-count", pg.re_count)->capture_default_str();
    p->add_option("--im-count", pg.im_count)->capture_default_str();
    p->add_option("--format", pg.format)->check(CLI::IsMember(data_formats))->capture_default_str();
    p->add_option("-o,--output", pg.output)->capture_default_str();

    ModeMapArgs mm;
    auto* m = app.add_subcommand("mode-map", "Label a grid of initial velocities by mode");
    m->add_option("--axis", mm.axis)->check(CLI::IsMember({"x-1d", "x-2d", "y-2d"}))->capture_default_str();
    m->add_option("--vr-range", mm.vr_range)->capture_default_str();
    m->add_option("--vi-range", mm.vi_range)->capture_default_str();
    m->add_option("--vr-count", mm.vr_count)->capture_default_str();
    m->add_option("--vi-count", mm.vi_count)->capture_default_str();
    m->add_option("--nx", mm.nx, "Directional factor n_x (2D axes)");
    m->add_option("--verify", mm.verify, "Integrate this many random off-boundary cells to t_bar = 200");
    m->add_option("--verify-margin", mm.verify_margin, "Smallest |margin| eligible for --verify")->capture_default_str();
    m->add_option("--seed", mm.seed)->capture_default_str();
    m->add_option("--format", mm.format)->check(CLI::IsMember(data_formats))->capture_default_str();
    m->add_option("-o,--output", mm.output)->capture_default_str();

    ReproduceArgs rep;
    auto* r = app.add_subcommand("reproduce", "Reference tables: presets, six-plane energies, source comparison");
    r->add_option("--table", rep.table, "1, 2 or 3")->required();
    r->add_flag("--from-printed-lambdas", rep.from_printed, "Table 2 from the reference lambda_bar values");
    r->add_option("--source", rep.source, "Laser name or wavelength in nm (table 2)")->capture_default_str();
    r->add_option("--preset", rep.preset, "Trajectory for table 2")->capture_default_str();
    r->add_option("--t-end", rep.t_end)->capture_default_str();
    r->add_option("--format", rep.format)->check(CLI::IsMember(data_formats))->capture_default_str();
    r->add_option("-o,--output", rep.output, "Also write the report to this path");
    rep.integrator.add_to(r);

    VerifyArgs ver;
    auto* v = app.add_subcommand("verify", "Run the residual and consistency checks");
    v->add_option("--points", ver.points)->capture_default_str();
    v->add_option("--seed", ver.seed)->capture_default_str();
    v->add_flag("--inject-fault", ver.inject_fault)->group("");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*s) return cmd_simulate(sim, out);
        if (*c) return cmd_classify(cls, out);
        if (*p) return cmd_potential_grid(pg, out, err);
        if (*m) return cmd_mode_map(mm, out, err);
        if (*r) return cmd_reproduce(rep, out, err);
        if (*v) return cmd_verify(ver, out, err);
    } catch (const UsageError& e) {
        err << "photraj: " << e.what() << '\n';
        return kUsage;
    } catch (const IntegrationError& e) {
        err << "photraj: integration failed: " << e.what() << '\n';
        return kFailure;
    } catch (const Error& e) {
        err << "photraj: " << e.what() << '\n';
        return kFailure;
    }
    return kUsage;
}

}  // namespace photraj::cli
