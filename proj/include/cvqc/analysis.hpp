#pragma once

// Entanglement and fidelity of the two clones.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "cvqc/gaussian.hpp"

namespace cvqc {

/// Two-mode CM in the symmetric pattern
///   [s 0 t 0; 0 u 0 v; t 0 s 0; 0 v 0 u]
struct TwoModeCM {
    double s = 0.0;
    double t = 0.0;
    double u = 0.0;
    double v = 0.0;

    /// s+t, s-t, u+v, u-v when known more accurately than the differences of the
    /// stored entries (large squeezing pushes u-v below the ulp of u).
    std::optional<std::array<double, 4>> exact_combos = std::nullopt;

    double x_sum() const { return exact_combos ? (*exact_combos)[0] : s + t; }
    double x_diff() const { return exact_combos ? (*exact_combos)[1] : s - t; }
    double p_sum() const { return exact_combos ? (*exact_combos)[2] : u + v; }
    double p_diff() const { return exact_combos ? (*exact_combos)[3] : u - v; }

    void validate() const {
        if (!(s > 0.0) || !(u > 0.0)) throw std::invalid_argument("TwoModeCM: s and u must be positive");
        if (std::abs(t) > s + kTolerance || std::abs(v) > u + kTolerance)
            throw std::invalid_argument("TwoModeCM: requires |t| <= s and |v| <= u");
        if (exact_combos) {
            const std::array<double, 4> plain{s + t, s - t, u + v, u - v};
            for (std::size_t i = 0; i < 4; ++i) {
                const double e = (*exact_combos)[i];
                if (!(e >= 0.0) || std::abs(e - plain[i]) > kTolerance * std::max({1.0, s, u}))
                    throw std::invalid_argument("TwoModeCM: combos disagree with entries");
            }
        }
    }

    CovMatrix matrix() const {
        return CovMatrix(4, {s, 0, t, 0,  //
                             0, u, 0, v,  //
                             t, 0, s, 0,  //
                             0, v, 0, u});
    }
};

/// Clone-pair CM with the ancilla traced out and r_z = 0.
inline TwoModeCM stuv_from_squeezing(double r0, double r1) {
    if (!(r0 >= 0.0) || !(r1 >= 0.0)) throw std::invalid_argument("stuv_from_squeezing: squeezing must be >= 0");
    const double a = std::exp(-2.0 * r0);
    const double b = std::exp(-2.0 * r1);
    const double c = std::exp(2.0 * r0);
    const double d = std::exp(2.0 * r1);
    return {0.25 * (a + b / 2 + 0.5), 0.25 * (a - b / 2 + 0.5), 0.25 * (c + d / 2 + 0.5), 0.25 * (c - d / 2 + 0.5),
            std::array<double, 4>{0.25 * (2 * a + 1), 0.25 * b, 0.25 * (2 * c + 1), 0.25 * d}};
}

/// s+t, s-t, u+v, u-v sorted descending (stable on ties).
inline std::array<double, 4> cm_eigenvalues(const TwoModeCM& cm) {
    std::array<double, 4> ev{cm.x_sum(), cm.x_diff(), cm.p_sum(), cm.p_diff()};
    std::stable_sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

inline Eigen::MatrixXd to_eigen(const CovMatrix& cm) {
    Eigen::MatrixXd m(cm.dim(), cm.dim());
    for (std::size_t i = 0; i < cm.dim(); ++i)
        for (std::size_t j = 0; j < cm.dim(); ++j) m(i, j) = cm(i, j);
    return m;
}

/// Eigenvalues of any CM from a dense symmetric solver, descending.
inline std::vector<double> cm_eigenvalues_generic(const CovMatrix& cm) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(cm), Eigen::EigenvaluesOnly);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

/// Flips the sign of p for `mode` (partial transposition of that mode).
inline CovMatrix partial_transpose(const CovMatrix& cm, std::size_t mode) {
    if (mode >= cm.modes()) throw std::out_of_range("partial_transpose: no such mode");
    CovMatrix out = cm;
    const std::size_t p = 2 * mode + 1;
    for (std::size_t j = 0; j < cm.dim(); ++j) {
        if (j == p) continue;
        out(p, j) = -cm(p, j);
        out(j, p) = -cm(j, p);
    }
    return out;
}

/// Symplectic eigenvalues (moduli of the eigenvalues of i Omega sigma), ascending,
/// one per mode, in the same units as `cm`.
inline std::vector<double> symplectic_eigenvalues(const CovMatrix& cm) {
    const std::size_t n = cm.dim();
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t k = 0; k < n / 2; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(omega * to_eigen(cm), false);
    std::vector<double> mod;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) mod.push_back(std::abs(es.eigenvalues()[i]));
    std::sort(mod.begin(), mod.end());
    // Eigenvalues come in +-i nu pairs.
    std::vector<double> nu;
    for (std::size_t i = 0; i < mod.size(); i += 2) nu.push_back(0.5 * (mod[i] + mod[i + 1]));
    return nu;
}

inline double log_negativity(double nu) {
    if (!(nu > 0.0)) throw std::domain_error("log_negativity: symplectic eigenvalue must be positive");
    return std::max(0.0, -std::log2(nu));
}

enum class Convention {
    Paper,     ///< closed-form branch sqrt((s+t)(u-v)), entangled when < 1
    Standard,  ///< true smallest PT symplectic eigenvalue, entangled when < 1/4
};

struct SymplecticResult {
    double delta_tilde = 0.0;
    double det = 0.0;
    /// Smallest symplectic eigenvalue of the partial transpose, from Delta~ and Det.
    double nu_minus = 0.0;
    /// sqrt((s+t)(u-v)); equals nu_minus only when that branch is the smaller one.
    double nu_minus_closed_form = 0.0;
    bool closed_form_is_minimal = false;
    double e_n_paper = 0.0;
    double e_n_standard = 0.0;
    bool entangled_paper_convention = false;
    bool entangled_standard_convention = false;

    double nu(Convention c) const { return c == Convention::Paper ? nu_minus_closed_form : nu_minus; }
    double e_n(Convention c) const { return c == Convention::Paper ? e_n_paper : e_n_standard; }
    bool entangled(Convention c) const {
        return c == Convention::Paper ? entangled_paper_convention : entangled_standard_convention;
    }
};

inline SymplecticResult ppt_nu_minus(const TwoModeCM& cm) {
    cm.validate();
    SymplecticResult r;
    // 2(su - tv) = (s+t)(u-v) + (s-t)(u+v)
    const double a = std::max(0.0, cm.x_sum() * cm.p_diff());
    const double b = std::max(0.0, cm.x_diff() * cm.p_sum());
    r.delta_tilde = a + b;
    r.det = a * b;
    // The PT symplectic spectrum squared is {a, b}.
    r.nu_minus = std::sqrt(std::min(a, b));
    r.nu_minus_closed_form = std::sqrt(a);
    r.closed_form_is_minimal = a <= b;
    r.e_n_paper = log_negativity(r.nu_minus_closed_form);
    r.e_n_standard = log_negativity(r.nu_minus / kVacuumVariance);
    r.entangled_paper_convention = r.nu_minus_closed_form < 1.0;
    r.entangled_standard_convention = r.nu_minus < kVacuumVariance;
    return r;
}

/// Equal-squeezing (r0 = r1 = r) value at which sqrt(2 + e^{2r})/4 reaches 1.
inline double entanglement_threshold() { return std::log(14.0) / 2.0; }

struct FidelityBreakdown {
    double delta = 0.0;
    double det_sum = 0.0;
    double fidelity = 0.0;
};

namespace detail {

inline double det2(const CovMatrix& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

inline void require_single_mode_pd(const CovMatrix& m) {
    if (m.dim() != 2) throw std::invalid_argument("gaussian_fidelity: expects single-mode (2x2) matrices");
    if (!(m(0, 0) > 0.0) || !(det2(m) > 0.0))
        throw std::invalid_argument("gaussian_fidelity: matrix is not positive definite");
}

}  // namespace detail

/// Fidelity of two zero-mean single-mode Gaussian states
///   F = 1 / (sqrt(Det[s_in + s_out] + delta) - sqrt(delta)),
///   delta = 4 (Det s_in - 1/4)(Det s_out - 1/4),
/// evaluated after scaling both matrices by 2 so that pure states have Det = 1/4.
inline FidelityBreakdown gaussian_fidelity(const CovMatrix& sigma_in, const CovMatrix& sigma_out) {
    detail::require_single_mode_pd(sigma_in);
    detail::require_single_mode_pd(sigma_out);
    constexpr double k = 2.0;
    const double det_in = k * k * detail::det2(sigma_in);
    const double det_out = k * k * detail::det2(sigma_out);
    const double sxx = k * (sigma_in(0, 0) + sigma_out(0, 0));
    const double spp = k * (sigma_in(1, 1) + sigma_out(1, 1));
    const double sxp = k * (sigma_in(0, 1) + sigma_out(0, 1));
    FidelityBreakdown f;
    f.det_sum = sxx * spp - sxp * sxp;
    // Snap round-off away for pure states, otherwise sqrt(delta) picks it up.
    const auto excess = [](double d) { return std::abs(d - 0.25) <= kTolerance ? 0.0 : d - 0.25; };
    f.delta = std::max(0.0, 4.0 * excess(det_in) * excess(det_out));
    f.fidelity = 1.0 / (std::sqrt(f.det_sum + f.delta) - std::sqrt(f.delta));
    return f;
}

inline CovMatrix single_mode_cm(double var_x, double var_p, double cov_xp = 0.0) {
    return CovMatrix(2, {var_x, cov_xp, cov_xp, var_p});
}

/// Fidelity of either clone against the x-squeezed input, r0 = r1 = r.
inline FidelityBreakdown clone_fidelity(double r) {
    const TwoModeCM cm = stuv_from_squeezing(r, r);
    const CovMatrix in = single_mode_cm(kVacuumVariance * std::exp(-2.0 * r), kVacuumVariance * std::exp(2.0 * r));
    return gaussian_fidelity(in, single_mode_cm(cm.s, cm.u));
}

/// Literal closed form 16 / (sqrt(434 + 71 c) - sqrt(18 - 9 c)), c = e^{2r} + e^{-2r}.
/// Its second radicand is negative for every r > 0.
inline double clone_fidelity_paper_literal(double r) {
    const double c = std::exp(2.0 * r) + std::exp(-2.0 * r);
    double second = 18.0 - 9.0 * c;
    if (second < 0.0 && second > -kTolerance) second = 0.0;
    if (second < 0.0) throw std::domain_error("clone_fidelity_paper_literal: negative radicand for r > 0");
    return 16.0 / (std::sqrt(434.0 + 71.0 * c) - std::sqrt(second));
}

}  // namespace cvqc
