#pragma once

// Linear-optical elements acting on ModeOperators, and the 1->2 cloning machine
// built from a gain-2 phase-insensitive amplifier followed by a 50:50 beam splitter.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "cvqc/gaussian.hpp"

namespace cvqc {

/// Phase-free beam splitter: the same rotation by `theta` on the x and on the p
/// quadratures of the pair,
///   a' =  cos(theta) a + sin(theta) b
///   b' = -sin(theta) a + cos(theta) b
/// theta = 0 is the identity and angles add under composition. At pi/4 with
/// inputs (b, a) the outputs are (a + b)/sqrt2 and (a - b)/sqrt2.
inline std::pair<ModeOperator, ModeOperator> beam_splitter(const ModeOperator& a, const ModeOperator& b,
                                                           double theta) {
    detail::require_same_basis(a, b);
    if (!std::isfinite(theta)) throw std::invalid_argument("beam_splitter: angle must be finite");
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {{c * a.x + s * b.x, c * a.p + s * b.p}, {-s * a.x + c * b.x, -s * a.p + c * b.p}};
}

/// Two-mode Bogoliubov (non-degenerate parametric) amplifier with intensity gain G:
///   x_s' = sqrt(G) x_s + sqrt(G-1) x_z,   p_s' = sqrt(G) p_s - sqrt(G-1) p_z
///   x_z' = sqrt(G-1) x_s + sqrt(G) x_z,   p_z' = -sqrt(G-1) p_s + sqrt(G) p_z
inline std::pair<ModeOperator, ModeOperator> amplifier(const ModeOperator& signal, const ModeOperator& ancilla,
                                                       double gain) {
    detail::require_same_basis(signal, ancilla);
    if (!std::isfinite(gain) || gain < 1.0) throw std::invalid_argument("amplifier: gain must be >= 1");
    const double g = std::sqrt(gain);
    const double h = std::sqrt(gain - 1.0);
    return {{g * signal.x + h * ancilla.x, g * signal.p - h * ancilla.p},
            {h * signal.x + g * ancilla.x, -h * signal.p + g * ancilla.p}};
}

/// Angle of the first tritter beam splitter, acos(1/sqrt3).
inline double tritter_angle() { return std::acos(1.0 / std::numbers::sqrt3); }

/// B_23(pi/4) B_12(acos(1/sqrt3)): the 1-2 splitter acts first.
inline std::array<ModeOperator, 3> tritter(const ModeOperator& m1, const ModeOperator& m2, const ModeOperator& m3) {
    detail::require_same_basis(m1, m2);
    detail::require_same_basis(m2, m3);
    auto [o1, t2] = beam_splitter(m1, m2, tritter_angle());
    auto [o2, o3] = beam_splitter(t2, m3, std::numbers::pi / 4.0);
    return {o1, o2, o3};
}

struct BeamSplitterElement {
    double theta;
};
struct AmplifierElement {
    double gain;
};
struct TritterElement {};

/// One circuit element with the modes it acts on (indices into a mode list).
struct CircuitElement {
    std::variant<BeamSplitterElement, AmplifierElement, TritterElement> kind;
    std::vector<std::size_t> targets;

    std::size_t arity() const {
        return std::holds_alternative<TritterElement>(kind) ? 3 : 2;
    }

    void validate() const {
        if (targets.size() != arity()) throw std::invalid_argument("circuit element: wrong number of target modes");
        for (std::size_t i = 0; i < targets.size(); ++i)
            for (std::size_t j = i + 1; j < targets.size(); ++j)
                if (targets[i] == targets[j]) throw std::invalid_argument("circuit element: repeated target mode");
        if (const auto* bs = std::get_if<BeamSplitterElement>(&kind); bs && !std::isfinite(bs->theta))
            throw std::invalid_argument("beam splitter angle must be finite");
        if (const auto* amp = std::get_if<AmplifierElement>(&kind); amp && !(amp->gain >= 1.0))
            throw std::invalid_argument("amplifier gain must be >= 1");
    }
};

/// Applies `el` in place to the operators it targets.
inline void apply_element(const CircuitElement& el, std::vector<ModeOperator>& modes) {
    el.validate();
    for (std::size_t t : el.targets)
        if (t >= modes.size()) throw std::out_of_range("circuit element targets a missing mode");
    const auto& tg = el.targets;
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, BeamSplitterElement>) {
                std::tie(modes[tg[0]], modes[tg[1]]) = beam_splitter(modes[tg[0]], modes[tg[1]], k.theta);
            } else if constexpr (std::is_same_v<K, AmplifierElement>) {
                std::tie(modes[tg[0]], modes[tg[1]]) = amplifier(modes[tg[0]], modes[tg[1]], k.gain);
            } else {
                auto out = tritter(modes[tg[0]], modes[tg[1]], modes[tg[2]]);
                for (std::size_t i = 0; i < 3; ++i) modes[tg[i]] = out[i];
            }
        },
        el.kind);
}

inline void apply_all(std::span<const CircuitElement> circuit, std::vector<ModeOperator>& modes) {
    for (const auto& el : circuit) apply_element(el, modes);
}

inline constexpr double kCloningGain = 2.0;

struct CloneOutput {
    ModeOperator clone0;
    ModeOperator clone1;
    ModeOperator ancilla;
};

/// Cloning machine on already-prepared operators (any common basis):
/// amplifier(G=2) on (input, ancilla), then beam_splitter(pi/4) mixing the
/// amplified signal with the blank.
inline CloneOutput clone_modes(const ModeOperator& input, const ModeOperator& blank, const ModeOperator& ancilla) {
    auto [signal, idler] = amplifier(input, ancilla, kCloningGain);
    auto [c0, c1] = beam_splitter(blank, signal, std::numbers::pi / 4.0);
    return {std::move(c0), std::move(c1), std::move(idler)};
}

/// Mode slots of the three-mode cloning basis.
struct CloneSlots {
    static constexpr std::size_t input = 0;
    static constexpr std::size_t blank = 1;
    static constexpr std::size_t ancilla = 2;
};

struct CloneSetup {
    InitialModeSpec input = InitialModeSpec::x_squeezed(0.0);
    InitialModeSpec blank = InitialModeSpec::x_squeezed(0.0);
    InitialModeSpec ancilla = InitialModeSpec::p_squeezed(0.0);

    /// Input and blank squeezed in x, ancilla in p; anything else is rejected.
    void validate() const {
        input.validate();
        blank.validate();
        ancilla.validate();
        if (input.axis != Axis::X || blank.axis != Axis::X)
            throw std::invalid_argument("cloning machine expects x-squeezed input and blank modes");
        if (ancilla.axis != Axis::P) throw std::invalid_argument("cloning machine expects a p-squeezed ancilla");
    }
};

/// Prepares the three modes over `n_modes` vacuum basis modes at `slots` and clones.
inline CloneOutput clone_1to2(const CloneSetup& setup, std::size_t n_modes,
                              std::array<std::size_t, 3> slots = {CloneSlots::input, CloneSlots::blank,
                                                                  CloneSlots::ancilla}) {
    setup.validate();
    if (n_modes < 3) throw std::invalid_argument("cloning needs at least three basis modes");
    return clone_modes(prepare(slots[0], n_modes, setup.input), prepare(slots[1], n_modes, setup.blank),
                       prepare(slots[2], n_modes, setup.ancilla));
}

/// Squeezed-input clone over a three-mode vacuum basis (input, blank, ancilla).
inline CloneOutput clone_1to2(double r0, double r1, double rz) {
    if (!(r0 >= 0.0) || !(r1 >= 0.0) || !(rz >= 0.0))
        throw std::invalid_argument("clone_1to2: squeezing must be non-negative");
    return clone_1to2(CloneSetup{InitialModeSpec::x_squeezed(r0), InitialModeSpec::x_squeezed(r1),
                                 InitialModeSpec::p_squeezed(rz)},
                      3);
}

}  // namespace cvqc
