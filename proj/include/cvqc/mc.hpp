#pragma once

// Monte-Carlo phase-space oracle.
//
// For Gaussian preparations, linear optics and homodyne detection with
// classical feedforward, sampling the initial Wigner function and pushing each
// sample through the protocol reproduces the output distribution exactly. The
// estimates here are therefore an independent check of the analytic moments.
//
// Shots are split into shards. Shard k draws from its own generator seeded by
// (seed, k), accumulates moments locally, and the shard accumulators are merged
// in index order. Results depend only on (shots, seed, shards).

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "cvqc/gaussian.hpp"
#include "cvqc/teleport.hpp"

namespace cvqc::mc {

struct McConfig {
    std::uint64_t shots = 1'000'000;
    std::uint64_t seed = 0x5eed'c10eULL;
    std::uint32_t shards = 8;
    /// Worker threads; 0 picks hardware concurrency. Does not affect results.
    unsigned threads = 0;

    void validate() const {
        if (shots < 1) throw std::invalid_argument("McConfig: shots must be >= 1");
        if (shards < 1) throw std::invalid_argument("McConfig: shards must be >= 1");
    }

    std::uint64_t shots_in_shard(std::uint32_t k) const {
        return shots / shards + (k < shots % shards ? 1 : 0);
    }
};

struct McEstimate {
    double mean = 0.0;
    double variance = 0.0;
    double standard_error = 0.0;
    std::uint64_t shots = 0;
};

using Rng = std::mt19937_64;

inline Rng shard_rng(std::uint64_t seed, std::uint32_t shard) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), shard};
    return Rng(seq);
}

/// Streaming means and co-moments of N variables (Welford), mergeable (Chan et al.).
template <std::size_t N>
class MomentAccumulator {
public:
    void add(const std::array<double, N>& v) {
        ++n_;
        std::array<long double, N> d{};
        for (std::size_t i = 0; i < N; ++i) {
            d[i] = v[i] - mean_[i];
            mean_[i] += d[i] / n_;
        }
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) m2_[i][j] += d[i] * (v[j] - mean_[j]);
    }

    void merge(const MomentAccumulator& o) {
        if (o.n_ == 0) return;
        if (n_ == 0) {
            *this = o;
            return;
        }
        const long double n = n_ + o.n_;
        std::array<long double, N> d{};
        for (std::size_t i = 0; i < N; ++i) d[i] = o.mean_[i] - mean_[i];
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j)
                m2_[i][j] += o.m2_[i][j] + d[i] * d[j] * static_cast<long double>(n_) * o.n_ / n;
        for (std::size_t i = 0; i < N; ++i) mean_[i] += d[i] * o.n_ / n;
        n_ += o.n_;
    }

    std::uint64_t count() const { return n_; }
    double mean(std::size_t i) const { return static_cast<double>(mean_[i]); }
    /// Unbiased sample covariance.
    double covariance(std::size_t i, std::size_t j) const {
        return n_ < 2 ? 0.0 : static_cast<double>(m2_[i][j] / (n_ - 1));
    }

private:
    std::uint64_t n_ = 0;
    std::array<long double, N> mean_{};
    std::array<std::array<long double, N>, N> m2_{};
};

/// Runs `body(rng, acc, count)` per shard and merges shard results in order.
template <std::size_t N, typename Body>
MomentAccumulator<N> run_sharded(const McConfig& cfg, Body body) {
    cfg.validate();
    std::vector<MomentAccumulator<N>> parts(cfg.shards);
    const auto work = [&](std::uint32_t k) {
        Rng rng = shard_rng(cfg.seed, k);
        body(rng, parts[k], cfg.shots_in_shard(k));
    };
    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, cfg.shards);
    if (threads <= 1) {
        for (std::uint32_t k = 0; k < cfg.shards; ++k) work(k);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (std::uint32_t k = t; k < cfg.shards; k += threads) work(k);
            });
    }
    // Pairwise tree merge in shard order.
    for (std::size_t width = 1; width < parts.size(); width *= 2)
        for (std::size_t i = 0; i + width < parts.size(); i += 2 * width) parts[i].merge(parts[i + width]);
    return parts.front();
}

/// One draw of all initial quadratures (x_0, p_0, x_1, p_1, ...).
inline std::vector<double> sample_shot(const Basis& specs, Rng& rng) {
    std::normal_distribution<double> normal;
    std::vector<double> q(2 * specs.size());
    for (std::size_t k = 0; k < specs.size(); ++k) {
        q[2 * k] = specs[k].x_mean + std::sqrt(specs[k].x_variance()) * normal(rng);
        q[2 * k + 1] = specs[k].p_mean + std::sqrt(specs[k].p_variance()) * normal(rng);
    }
    return q;
}

/// Empirical covariance of two observables. `.variance` holds the covariance,
/// `.mean` the mean of `a`.
inline McEstimate estimate_covariance(const QuadExpr& a, const QuadExpr& b, const Basis& specs, const McConfig& cfg) {
    detail::require_basis(a, specs);
    detail::require_basis(b, specs);
    if (cfg.shots < 2) throw std::invalid_argument("estimate_covariance: needs at least two shots");
    for (const auto& s : specs) s.validate();
    auto acc = run_sharded<2>(cfg, [&](Rng& rng, MomentAccumulator<2>& part, std::uint64_t count) {
        for (std::uint64_t i = 0; i < count; ++i) {
            const auto q = sample_shot(specs, rng);
            part.add({a.evaluate(q), b.evaluate(q)});
        }
    });
    McEstimate e;
    e.shots = acc.count();
    e.mean = acc.mean(0);
    e.variance = acc.covariance(0, 1);
    const double v1 = acc.covariance(0, 0), v2 = acc.covariance(1, 1);
    e.standard_error = std::sqrt((v1 * v2 + e.variance * e.variance) / static_cast<double>(e.shots - 1));
    return e;
}

struct TeleportShot {
    double x_in;
    double p_in;
    double x_tel;
    double p_tel;
};

/// One shot of the protocol on sampled numbers, independent of the symbolic path:
/// clone outputs from the squeezed samples, Alice's combiner outcomes, Bob's displacement.
inline TeleportShot run_teleport_shot(const TeleportSqueezing& sq, double g3, double x_in, double p_in, Rng& rng) {
    static const double s2 = std::numbers::sqrt2;
    const Basis specs{InitialModeSpec::x_squeezed(sq.r0), InitialModeSpec::x_squeezed(sq.r1),
                      InitialModeSpec::p_squeezed(sq.rz), InitialModeSpec::coherent(x_in, p_in)};
    const auto q = sample_shot(specs, rng);
    const double x0 = q[0], p0 = q[1], x1 = q[2], p1 = q[3], xz = q[4], pz = q[5], xi = q[6], pi = q[7];

    const double x0c = x0 + x1 / s2 + xz / s2;
    const double p0c = p0 + p1 / s2 - pz / s2;
    const double x1c = x0 - x1 / s2 + xz / s2;
    const double p1c = p0 - p1 / s2 - pz / s2;
    const double pzc = -p0 + s2 * pz;

    const double x_m = (xi - x0c) / s2;
    const double p_n = (pi + p0c) / s2;
    return {xi, pi, x1c + s2 * x_m, p1c + s2 * p_n + g3 * pzc};
}

/// Means of Bob's output quadratures and the excess-noise statistics.
struct TeleportStats {
    McEstimate x_mean;
    McEstimate p_mean;
    McEstimate x_noise;  ///< Var(x_tel - x_in) in .variance
    McEstimate p_noise;  ///< Var(p_tel - p_in) in .variance
};

inline TeleportStats estimate_teleport_moments(const TeleportSqueezing& sq, double g3, double x_in, double p_in,
                                               const McConfig& cfg) {
    sq.validate();
    if (cfg.shots < 2) throw std::invalid_argument("estimate_teleport_moments: needs at least two shots");
    auto acc = run_sharded<4>(cfg, [&](Rng& rng, MomentAccumulator<4>& part, std::uint64_t count) {
        for (std::uint64_t i = 0; i < count; ++i) {
            const TeleportShot s = run_teleport_shot(sq, g3, x_in, p_in, rng);
            part.add({s.x_tel, s.p_tel, s.x_tel - s.x_in, s.p_tel - s.p_in});
        }
    });
    const double n = static_cast<double>(acc.count());
    const auto mean_est = [&](std::size_t i) {
        return McEstimate{acc.mean(i), acc.covariance(i, i), std::sqrt(acc.covariance(i, i) / n), acc.count()};
    };
    const auto var_est = [&](std::size_t i) {
        const double v = acc.covariance(i, i);
        return McEstimate{acc.mean(i), v, std::sqrt(2.0 / (n - 1.0)) * v, acc.count()};
    };
    return {mean_est(0), mean_est(1), var_est(2), var_est(3)};
}

/// Fidelity from sampled excess noise, F = 1/(2 sqrt(sigma_x sigma_p)).
/// `.mean` holds F, `.standard_error` its delta-method error.
inline McEstimate fidelity_from_stats(const TeleportStats& st) {
    const double sx = kCoherentQVariance + st.x_noise.variance;
    const double sp = kCoherentQVariance + st.p_noise.variance;
    McEstimate e;
    e.shots = st.x_noise.shots;
    e.mean = teleport_fidelity(sx, sp);
    const double rel_x = st.x_noise.standard_error / sx;
    const double rel_p = st.p_noise.standard_error / sp;
    e.standard_error = 0.5 * e.mean * std::sqrt(rel_x * rel_x + rel_p * rel_p);
    e.variance = e.standard_error * e.standard_error;
    return e;
}

inline McEstimate estimate_teleport_fidelity(const TeleportSqueezing& sq, double g3, const McConfig& cfg) {
    if (cfg.shots < 100) throw std::invalid_argument("estimate_teleport_fidelity: needs at least 100 shots");
    return fidelity_from_stats(estimate_teleport_moments(sq, g3, 0.0, 0.0, cfg));
}

inline McEstimate estimate_teleport_fidelity(double r, double g3, const McConfig& cfg) {
    return estimate_teleport_fidelity(TeleportSqueezing::equal(r), g3, cfg);
}

}  // namespace cvqc::mc
