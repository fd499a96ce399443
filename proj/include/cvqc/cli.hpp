#pragma once

// Command-line front end: CSV data products for each analysis.

#include <CLI11.hpp>

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cvqc/analysis.hpp"
#include "cvqc/grid.hpp"
#include "cvqc/mc.hpp"
#include "cvqc/teleport.hpp"

namespace cvqc::cli {

enum class Subcommand { CloneFidelity, Entanglement, Figure1, Figure2, Teleport, McValidate };

inline const std::map<std::string, Subcommand>& subcommand_names() {
    static const std::map<std::string, Subcommand> names{
        {"clone-fidelity", Subcommand::CloneFidelity}, {"entanglement", Subcommand::Entanglement},
        {"figure1", Subcommand::Figure1},             {"figure2", Subcommand::Figure2},
        {"teleport", Subcommand::Teleport},           {"mc-validate", Subcommand::McValidate}};
    return names;
}

inline constexpr std::uint64_t kDefaultSeed = 20001015;

struct RunRequest {
    Subcommand subcommand = Subcommand::Figure2;
    Grid grid;
    std::optional<double> r;
    double r0 = 0.0;
    double r1 = 0.0;
    std::optional<double> rz;
    std::optional<double> gain;
    mc::McConfig mc;
    std::string out_path;
    Convention convention = Convention::Paper;
};

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2 };

// ---- CSV -------------------------------------------------------------------

/// Data value: nine digits after the decimal point.
inline std::string fmt_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", v);
    return buf;
}

/// Grid coordinate: shortest round-trip text, always with a decimal point.
inline std::string fmt_coord(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, end);
    if (s.find_first_of(".en") == std::string::npos) s += ".0";
    return s;
}

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void header(std::initializer_list<const char*> cols) {
        bool first = true;
        for (const char* c : cols) {
            if (!first) os_ << ',';
            os_ << c;
            first = false;
        }
        os_ << '\n';
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ',';
            os_ << cells[i];
        }
        os_ << '\n';
    }

private:
    std::ostream& os_;
};

// ---- Subcommands -------------------------------------------------------------

namespace detail {

inline std::vector<double> r_values(const RunRequest& req) {
    if (req.r) return {*req.r};
    return req.grid.points();
}

inline int clone_fidelity(const RunRequest& req, CsvWriter& csv) {
    csv.header({"r", "F_clone", "F_literal"});
    for (double r : r_values(req)) {
        std::string literal;
        try {
            literal = fmt_value(clone_fidelity_paper_literal(r));
        } catch (const std::domain_error&) {
        }
        csv.row({fmt_coord(r), fmt_value(cvqc::clone_fidelity(r).fidelity), literal});
    }
    return kOk;
}

inline int entanglement(const RunRequest& req, CsvWriter& csv) {
    const SymplecticResult res = ppt_nu_minus(stuv_from_squeezing(req.r0, req.r1));
    csv.header({"r0", "r1", "nu_minus", "E_N", "entangled"});
    csv.row({fmt_coord(req.r0), fmt_coord(req.r1), fmt_value(res.nu(req.convention)),
             fmt_value(res.e_n(req.convention)), res.entangled(req.convention) ? "true" : "false"});
    return kOk;
}

inline int figure1(const RunRequest& req, CsvWriter& csv) {
    csv.header({"r", "nu_minus", "E_N"});
    for (double r : req.grid.points()) {
        const SymplecticResult res = ppt_nu_minus(stuv_from_squeezing(r, r));
        csv.row({fmt_coord(r), fmt_value(res.nu(req.convention)), fmt_value(res.e_n(req.convention))});
    }
    return kOk;
}

inline int figure2(const RunRequest& req, CsvWriter& csv) {
    csv.header({"r", "F_opt", "F_loock"});
    for (const ComparisonRow& row : comparison_curve(req.grid, req.convention))
        csv.row({fmt_coord(row.r), fmt_value(row.f_opt), fmt_value(row.f_loock)});
    return kOk;
}

inline int teleport(const RunRequest& req, CsvWriter& csv) {
    csv.header({"r", "g3", "sigma_x", "sigma_p", "F"});
    for (double r : r_values(req)) {
        const TeleportSqueezing sq{r, r, req.rz.value_or(r)};
        const double g3 = req.gain.value_or(optimal_gain(sq));
        const TeleportOutcome t = cvqc::teleport(sq, {1.0, g3});
        csv.row({fmt_coord(r), fmt_value(g3), fmt_value(t.sigma_x), fmt_value(t.sigma_p), fmt_value(t.fidelity)});
    }
    return kOk;
}

inline int mc_validate(const RunRequest& req, CsvWriter& csv) {
    constexpr double kSigmas = 4.0;
    constexpr double kFidelityTolerance = 5e-3;
    bool all_ok = true;
    csv.header({"quantity", "analytic", "mc", "stderr", "pass"});
    const auto emit = [&](const std::string& name, double analytic, const mc::McEstimate& e, double value, bool ok) {
        all_ok = all_ok && ok;
        csv.row({name, fmt_value(analytic), fmt_value(value), fmt_value(e.standard_error), ok ? "true" : "false"});
    };
    const auto structural = [&](const std::string& name, double analytic, const mc::McEstimate& e) {
        emit(name, analytic, e, e.variance, std::abs(e.variance - analytic) <= kSigmas * e.standard_error);
    };

    // Clone-pair moments at r0 = r1 = r, vacuum ancilla.
    const double r = req.r.value_or(0.5);
    const CloneOutput c = clone_1to2(r, r, 0.0);
    const Basis basis = vacuum_basis(3);
    const TwoModeCM cm = stuv_from_squeezing(r, r);
    structural("s", cm.s, mc::estimate_covariance(c.clone0.x, c.clone0.x, basis, req.mc));
    structural("t", cm.t, mc::estimate_covariance(c.clone0.x, c.clone1.x, basis, req.mc));
    structural("u", cm.u, mc::estimate_covariance(c.clone0.p, c.clone0.p, basis, req.mc));
    structural("v", cm.v, mc::estimate_covariance(c.clone0.p, c.clone1.p, basis, req.mc));

    // Teleportation excess noise and fidelity at optimal gain.
    for (double rt : {0.0, 0.5, 1.0}) {
        const double g3 = optimal_gain(rt);
        const TeleportOutcome analytic = cvqc::teleport(TeleportSqueezing::equal(rt), {1.0, g3});
        const mc::TeleportStats st = mc::estimate_teleport_moments(TeleportSqueezing::equal(rt), g3, 0.0, 0.0, req.mc);
        const std::string tag = "@r=" + fmt_coord(rt);
        structural("noise_x" + tag, analytic.sigma_x - kCoherentQVariance, st.x_noise);
        structural("noise_p" + tag, analytic.sigma_p - kCoherentQVariance, st.p_noise);
        const mc::McEstimate f = mc::fidelity_from_stats(st);
        emit("F_opt" + tag, optimal_fidelity(rt), f, f.mean,
             std::abs(f.mean - optimal_fidelity(rt)) <= kFidelityTolerance);
    }
    return all_ok ? kOk : kCheckFailed;
}

}  // namespace detail

inline int run(const RunRequest& req, std::ostream& out) {
    CsvWriter csv(out);
    switch (req.subcommand) {
        case Subcommand::CloneFidelity: return detail::clone_fidelity(req, csv);
        case Subcommand::Entanglement: return detail::entanglement(req, csv);
        case Subcommand::Figure1: return detail::figure1(req, csv);
        case Subcommand::Figure2: return detail::figure2(req, csv);
        case Subcommand::Teleport: return detail::teleport(req, csv);
        case Subcommand::McValidate: return detail::mc_validate(req, csv);
    }
    return kUsage;
}

// ---- Flags -------------------------------------------------------------------

struct ParseResult {
    std::optional<RunRequest> request;
    int exit_code = kOk;  ///< meaningful when `request` is empty
};

/// Parses argv. Reads CVQC_SEED as the default seed when --seed is absent.
inline ParseResult parse(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                         const char* env_seed = std::getenv("CVQC_SEED")) {
    RunRequest req;
    std::string command;
    std::string convention = "paper";
    double r = 0.0;
    double gain = 0.0;
    double rz = 0.0;

    CLI::App app{"Continuous-variable cloning and teleportation toolkit", "cvqc"};
    app.add_option("command", command, "clone-fidelity | entanglement | figure1 | figure2 | teleport | mc-validate")
        ->required()
        ->check(CLI::IsMember({"clone-fidelity", "entanglement", "figure1", "figure2", "teleport", "mc-validate"}));
    auto* r_opt = app.add_option("--r", r, "squeezing for single-point runs (r0 = r1 = rz = r)");
    app.add_option("--r0", req.r0, "input-mode squeezing (entanglement)");
    app.add_option("--r1", req.r1, "blank-mode squeezing (entanglement)");
    auto* rz_opt = app.add_option("--rz", rz, "ancilla squeezing for teleport (default: same as --r)");
    app.add_option("--r-min", req.grid.r_min, "grid start")->capture_default_str();
    app.add_option("--r-max", req.grid.r_max, "grid end (inclusive)")->capture_default_str();
    app.add_option("--step", req.grid.step, "grid step")->capture_default_str();
    auto* gain_opt = app.add_option("--gain", gain, "override the ancilla gain g3 (default: optimal)");
    app.add_option("--shots", req.mc.shots, "Monte-Carlo shots")->capture_default_str();
    auto* seed_opt = app.add_option("--seed", req.mc.seed, "Monte-Carlo seed (default: $CVQC_SEED)");
    app.add_option("--shards", req.mc.shards, "Monte-Carlo shards")->capture_default_str();
    app.add_option("--out", req.out_path, "write CSV here instead of stdout");
    app.add_option("--convention", convention, "entanglement threshold convention")
        ->check(CLI::IsMember({"paper", "standard"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return {std::nullopt, kOk};
    } catch (const CLI::ParseError& e) {
        err << "cvqc: " << e.what() << '\n';
        return {std::nullopt, kUsage};
    }

    req.subcommand = subcommand_names().at(command);
    req.convention = convention == "standard" ? Convention::Standard : Convention::Paper;
    if (*r_opt) req.r = r;
    if (*rz_opt) req.rz = rz;
    if (*gain_opt) req.gain = gain;
    if (!*seed_opt) {
        req.mc.seed = kDefaultSeed;
        if (env_seed && *env_seed) {
            std::uint64_t s = 0;
            const char* end = env_seed + std::char_traits<char>::length(env_seed);
            auto [p, ec] = std::from_chars(env_seed, end, s);
            if (ec != std::errc{} || p != end) {
                err << "cvqc: CVQC_SEED is not an unsigned integer\n";
                return {std::nullopt, kUsage};
            }
            req.mc.seed = s;
        }
    }

    try {
        req.grid.validate();
        req.mc.validate();
        if (req.r && !(*req.r >= 0.0)) throw std::invalid_argument("--r must be >= 0");
        if (req.r0 < 0.0 || req.r1 < 0.0) throw std::invalid_argument("--r0/--r1 must be >= 0");
        if (req.rz && !(*req.rz >= 0.0)) throw std::invalid_argument("--rz must be >= 0");
        if (req.subcommand == Subcommand::McValidate && req.mc.shots < 100)
            throw std::invalid_argument("mc-validate needs --shots >= 100");
    } catch (const std::invalid_argument& e) {
        err << "cvqc: " << e.what() << '\n';
        return {std::nullopt, kUsage};
    }
    return {req, kOk};
}

/// Full command: parse, run, route output.
inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    ParseResult parsed = parse(argc, argv, out, err);
    if (!parsed.request) return parsed.exit_code;
    const RunRequest& req = *parsed.request;
    try {
        if (req.out_path.empty()) return run(req, out);
        std::ostringstream buffer;
        const int code = run(req, buffer);
        std::ofstream file(req.out_path, std::ios::binary);
        if (!file) {
            err << "cvqc: cannot open " << req.out_path << '\n';
            return kUsage;
        }
        file << buffer.str();
        return code;
    } catch (const std::exception& e) {
        err << "cvqc: " << e.what() << '\n';
        return kUsage;
    }
}

}  // namespace cvqc::cli
