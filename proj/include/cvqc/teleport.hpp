#pragma once

// Teleportation through the three-mode clone/ancilla state.
//
// Alice keeps clone 0 and the ancilla, Bob gets clone 1. Alice mixes the
// unknown input with clone 0 on a 50:50 beam splitter and homodynes
//   x_m = (x_in - x_0'')/sqrt2,   p_n = (p_in + p_0'')/sqrt2,
// plus p_z' on the ancilla. Bob displaces
//   x -> x + sqrt2 x_m,   p -> p + sqrt2 p_n + g3 p_z'.
// Measured values are replaced by the commuting observables, so the protocol
// is a linear map in the Heisenberg picture.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "cvqc/analysis.hpp"
#include "cvqc/circuit.hpp"
#include "cvqc/gaussian.hpp"
#include "cvqc/grid.hpp"

namespace cvqc {

/// Basis slots for teleportation: the three cloning modes plus the input.
struct TeleportSlots {
    static constexpr std::size_t input_clone = 0;
    static constexpr std::size_t blank = 1;
    static constexpr std::size_t ancilla = 2;
    static constexpr std::size_t input = 3;
    static constexpr std::size_t count = 4;
};

struct GainSpec {
    double g = 1.0;   ///< feedforward gain on the displacement
    double g3 = 1.0;  ///< weight of the ancilla p outcome in Bob's p displacement
};

struct TeleportSqueezing {
    double r0 = 0.0;
    double r1 = 0.0;
    double rz = 0.0;

    static TeleportSqueezing equal(double r) { return {r, r, r}; }

    void validate() const {
        if (!(r0 >= 0.0) || !(r1 >= 0.0) || !(rz >= 0.0) || !std::isfinite(r0 + r1 + rz))
            throw std::invalid_argument("teleport: squeezing must be finite and non-negative");
    }
};

/// Every intermediate observable of one protocol run.
struct TeleportProtocol {
    CloneOutput clones;
    ModeOperator input;
    QuadExpr x_m;
    QuadExpr p_n;
    QuadExpr p_z;
    QuadExpr x_tel;
    QuadExpr p_tel;
};

inline Basis teleport_basis() { return vacuum_basis(TeleportSlots::count); }

/// Runs the protocol by composing the cloning circuit, Alice's combiner and
/// Bob's displacement.
inline TeleportProtocol run_protocol(const TeleportSqueezing& sq, double g3, double x_in = 0.0, double p_in = 0.0) {
    sq.validate();
    if (!std::isfinite(g3)) throw std::invalid_argument("teleport: g3 must be finite");
    constexpr std::size_t n = TeleportSlots::count;
    TeleportProtocol t;
    t.clones = clone_1to2(CloneSetup{InitialModeSpec::x_squeezed(sq.r0), InitialModeSpec::x_squeezed(sq.r1),
                                     InitialModeSpec::p_squeezed(sq.rz)},
                          n, {TeleportSlots::input_clone, TeleportSlots::blank, TeleportSlots::ancilla});
    t.input = prepare(TeleportSlots::input, n, InitialModeSpec::coherent(x_in, p_in));

    auto [plus, minus] = beam_splitter(t.clones.clone0, t.input, std::numbers::pi / 4.0);
    t.x_m = minus.x;
    t.p_n = plus.p;
    t.p_z = t.clones.ancilla.p;

    t.x_tel = t.clones.clone1.x + std::numbers::sqrt2 * t.x_m;
    t.p_tel = t.clones.clone1.p + std::numbers::sqrt2 * t.p_n + g3 * t.p_z;
    return t;
}

/// Closed form of Bob's mode after displacement:
///   x_tel = x_in - sqrt2 e^{-r1} x_1
///   p_tel = p_in + (2 - g3) e^{r0} p_0 + sqrt2 (g3 - 1) e^{-rz} p_z
inline std::pair<QuadExpr, QuadExpr> teleported_mode(const TeleportSqueezing& sq, double g3, double x_in = 0.0,
                                                     double p_in = 0.0) {
    sq.validate();
    constexpr std::size_t n = TeleportSlots::count;
    const ModeOperator in = prepare(TeleportSlots::input, n, InitialModeSpec::coherent(x_in, p_in));
    QuadExpr x = in.x - std::numbers::sqrt2 * std::exp(-sq.r1) * QuadExpr::x_of(TeleportSlots::blank, n);
    QuadExpr p = in.p + (2.0 - g3) * std::exp(sq.r0) * QuadExpr::p_of(TeleportSlots::input_clone, n) +
                 std::numbers::sqrt2 * (g3 - 1.0) * std::exp(-sq.rz) * QuadExpr::p_of(TeleportSlots::ancilla, n);
    return {std::move(x), std::move(p)};
}

/// Coherent-state Q-function variance, 1/4 for the state plus 1/4 smoothing.
inline constexpr double kCoherentQVariance = 0.5;

/// (sigma_x, sigma_p): Q variances of Bob's mode for a coherent input in `input_slot`.
inline std::pair<double, double> q_variances(const QuadExpr& x_tel, const QuadExpr& p_tel, const Basis& specs,
                                             std::size_t input_slot = TeleportSlots::input) {
    if (input_slot >= specs.size()) throw std::out_of_range("q_variances: no such input mode");
    const InitialModeSpec& in = specs[input_slot];
    const bool unit_channel = std::abs(x_tel.x_coeff(input_slot) - 1.0) <= kTolerance &&
                              std::abs(x_tel.p_coeff(input_slot)) <= kTolerance &&
                              std::abs(p_tel.p_coeff(input_slot) - 1.0) <= kTolerance &&
                              std::abs(p_tel.x_coeff(input_slot)) <= kTolerance;
    if (in.squeezing != 0.0 || !unit_channel)
        throw std::invalid_argument("q_variances: only unsqueezed (coherent) inputs carried with unit weight");
    return {kCoherentQVariance + variance(x_tel.without_mode(input_slot), specs),
            kCoherentQVariance + variance(p_tel.without_mode(input_slot), specs)};
}

/// pi Q_tel(x_in + i p_in) for a Gaussian Q function centred on g times the input.
inline double teleport_fidelity(double sigma_x, double sigma_p, double g = 1.0, double x_in = 0.0,
                                double p_in = 0.0) {
    if (!(sigma_x > 0.0) || !(sigma_p > 0.0))
        throw std::invalid_argument("teleport_fidelity: variances must be positive");
    const double k = (1.0 - g) * (1.0 - g);
    return std::exp(-k * (x_in * x_in / (2.0 * sigma_x) + p_in * p_in / (2.0 * sigma_p))) /
           (2.0 * std::sqrt(sigma_x * sigma_p));
}

struct TeleportOutcome {
    QuadExpr x_tel;
    QuadExpr p_tel;
    double sigma_x = 0.0;
    double sigma_p = 0.0;
    GainSpec gain;
    double fidelity = 0.0;
};

/// Full pipeline: circuit, combiner, displacement, Q variances, fidelity.
inline TeleportOutcome teleport(const TeleportSqueezing& sq, GainSpec gain, double x_in = 0.0, double p_in = 0.0) {
    TeleportProtocol t = run_protocol(sq, gain.g3, x_in, p_in);
    TeleportOutcome out;
    std::tie(out.sigma_x, out.sigma_p) = q_variances(t.x_tel, t.p_tel, teleport_basis());
    out.x_tel = std::move(t.x_tel);
    out.p_tel = std::move(t.p_tel);
    out.gain = gain;
    out.fidelity = teleport_fidelity(out.sigma_x, out.sigma_p, gain.g, x_in, p_in);
    return out;
}

/// g3 minimising sigma_p: with a = e^{2 r0}, b = e^{-2 rz}, the p excess noise
/// (2 - g3)^2 a/4 + (g3 - 1)^2 b/2 is smallest at 2(a + b)/(a + 2b).
inline double optimal_gain(const TeleportSqueezing& sq) {
    sq.validate();
    const double a = std::exp(2.0 * sq.r0);
    const double b = std::exp(-2.0 * sq.rz);
    return 2.0 * (a + b) / (a + 2.0 * b);
}

/// Equal squeezing r0 = r1 = rz = r: 2(e^{2r} + e^{-2r})/(e^{2r} + 2e^{-2r}).
inline double optimal_gain(double r) {
    if (!(r >= 0.0)) throw std::invalid_argument("optimal_gain: r must be >= 0");
    return optimal_gain(TeleportSqueezing::equal(r));
}

/// Golden-section minimisation of sigma_p over g3 in [lo, hi] via the full pipeline.
inline double optimal_gain_numeric(double r, double lo = 0.0, double hi = 4.0, double tol = 1e-10) {
    const auto sigma_p = [r](double g3) {
        TeleportProtocol t = run_protocol(TeleportSqueezing::equal(r), g3);
        return q_variances(t.x_tel, t.p_tel, teleport_basis()).second;
    };
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = sigma_p(c), fd = sigma_p(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = sigma_p(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = sigma_p(d);
        }
    }
    return 0.5 * (a + b);
}

/// Optimal-gain fidelity for equal squeezing,
///   [(1 + 2e^{-2r} + 3e^{-4r} + 2e^{-6r}) / (1 + 2e^{-4r})]^{-1/2}.
inline double optimal_fidelity(double r) {
    if (!(r >= 0.0)) throw std::invalid_argument("optimal_fidelity: r must be >= 0");
    const double e2 = std::exp(-2.0 * r);
    const double e4 = e2 * e2;
    const double e6 = e4 * e2;
    return 1.0 / std::sqrt((1.0 + 3.0 * e4 + 2.0 * e6 + 2.0 * e2) / (1.0 + 2.0 * e4));
}

/// Tritter-channel baseline, [(1 + e^{-2r})(1 + 3/(2e^{2r} + e^{-2r}))]^{-1/2}.
inline double loock_fidelity(double r) {
    if (!(r >= 0.0)) throw std::invalid_argument("loock_fidelity: r must be >= 0");
    return 1.0 / std::sqrt((1.0 + std::exp(-2.0 * r)) * (1.0 + 3.0 / (2.0 * std::exp(2.0 * r) + std::exp(-2.0 * r))));
}

struct ComparisonRow {
    double r;
    double f_opt;
    double f_loock;
    double e_n;
};

inline std::vector<ComparisonRow> comparison_curve(const Grid& grid, Convention convention = Convention::Paper) {
    std::vector<ComparisonRow> rows;
    rows.reserve(grid.size());
    for (double r : grid.points())
        rows.push_back({r, optimal_fidelity(r), loock_fidelity(r), ppt_nu_minus(stuv_from_squeezing(r, r)).e_n(convention)});
    return rows;
}

}  // namespace cvqc
