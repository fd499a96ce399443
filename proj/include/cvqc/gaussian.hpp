#pragma once

// Heisenberg-picture moment engine.
//
// Every quadrature observable is a linear form over the quadratures of a fixed
// set of independent initial modes, ordered (x_0, p_0, x_1, p_1, ...), plus a
// scalar offset carrying coherent displacement. Second moments are central, so
// offsets never enter them. Vacuum quadrature variance is 1/4.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvqc {

inline constexpr double kVacuumVariance = 0.25;
inline constexpr double kTolerance = 1e-12;

enum class Axis { X, P };

/// Preparation of one initial mode: squeezed vacuum along `axis`, displaced
/// by (x_mean, p_mean).
struct InitialModeSpec {
    double squeezing = 0.0;
    Axis axis = Axis::X;
    double x_mean = 0.0;
    double p_mean = 0.0;

    static InitialModeSpec vacuum() { return {}; }
    static InitialModeSpec x_squeezed(double r) { return {r, Axis::X, 0.0, 0.0}; }
    static InitialModeSpec p_squeezed(double r) { return {r, Axis::P, 0.0, 0.0}; }
    static InitialModeSpec coherent(double x, double p) { return {0.0, Axis::X, x, p}; }

    void validate() const {
        if (!std::isfinite(squeezing) || squeezing < 0.0)
            throw std::invalid_argument("squeezing must be finite and non-negative");
        if (!std::isfinite(x_mean) || !std::isfinite(p_mean))
            throw std::invalid_argument("displacement must be finite");
    }

    double x_variance() const {
        return kVacuumVariance * std::exp(axis == Axis::X ? -2.0 * squeezing : 2.0 * squeezing);
    }
    double p_variance() const {
        return kVacuumVariance * std::exp(axis == Axis::X ? 2.0 * squeezing : -2.0 * squeezing);
    }
};

using Basis = std::vector<InitialModeSpec>;

/// `n` vacuum modes.
inline Basis vacuum_basis(std::size_t n) { return Basis(n, InitialModeSpec::vacuum()); }

class QuadExpr {
public:
    QuadExpr() = default;

    /// The zero form over `n_modes` initial modes.
    explicit QuadExpr(std::size_t n_modes) : coeffs_(2 * n_modes, 0.0) {}

    QuadExpr(std::vector<double> coeffs, double offset = 0.0)
        : coeffs_(std::move(coeffs)), offset_(offset) {
        if (coeffs_.size() % 2 != 0)
            throw std::invalid_argument("QuadExpr needs an even number of coefficients");
        for (double c : coeffs_)
            if (!std::isfinite(c)) throw std::invalid_argument("QuadExpr coefficient is not finite");
        if (!std::isfinite(offset_)) throw std::invalid_argument("QuadExpr offset is not finite");
    }

    static QuadExpr x_of(std::size_t mode, std::size_t n_modes) {
        QuadExpr q(n_modes);
        q.coeffs_.at(2 * mode) = 1.0;
        return q;
    }
    static QuadExpr p_of(std::size_t mode, std::size_t n_modes) {
        QuadExpr q(n_modes);
        q.coeffs_.at(2 * mode + 1) = 1.0;
        return q;
    }

    std::size_t modes() const { return coeffs_.size() / 2; }
    std::span<const double> coeffs() const { return coeffs_; }
    double offset() const { return offset_; }

    double x_coeff(std::size_t mode) const { return coeffs_.at(2 * mode); }
    double p_coeff(std::size_t mode) const { return coeffs_.at(2 * mode + 1); }

    /// Same form with the coefficients of initial mode `mode` zeroed.
    QuadExpr without_mode(std::size_t mode) const {
        QuadExpr q = *this;
        q.coeffs_.at(2 * mode) = 0.0;
        q.coeffs_.at(2 * mode + 1) = 0.0;
        return q;
    }

    /// Value of the observable for one phase-space sample of the initial quadratures.
    double evaluate(std::span<const double> sample) const {
        check_same(sample.size());
        double v = offset_;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) v += coeffs_[i] * sample[i];
        return v;
    }

    QuadExpr& operator+=(const QuadExpr& o) {
        check_same(o.coeffs_.size());
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        offset_ += o.offset_;
        return *this;
    }
    QuadExpr& operator-=(const QuadExpr& o) {
        check_same(o.coeffs_.size());
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        offset_ -= o.offset_;
        return *this;
    }
    QuadExpr& operator*=(double a) {
        for (double& c : coeffs_) c *= a;
        offset_ *= a;
        return *this;
    }

    friend QuadExpr operator+(QuadExpr a, const QuadExpr& b) { return a += b; }
    friend QuadExpr operator-(QuadExpr a, const QuadExpr& b) { return a -= b; }
    friend QuadExpr operator*(double s, QuadExpr a) { return a *= s; }
    friend QuadExpr operator*(QuadExpr a, double s) { return a *= s; }
    friend QuadExpr operator-(QuadExpr a) { return a *= -1.0; }

    /// Entrywise comparison (coefficients and offset) within `tol`.
    bool approx_equal(const QuadExpr& o, double tol = kTolerance) const {
        if (coeffs_.size() != o.coeffs_.size()) return false;
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            if (std::abs(coeffs_[i] - o.coeffs_[i]) > tol) return false;
        return std::abs(offset_ - o.offset_) <= tol;
    }

private:
    void check_same(std::size_t n) const {
        if (n != coeffs_.size())
            throw std::invalid_argument("basis size mismatch: " + std::to_string(n) + " vs " +
                                        std::to_string(coeffs_.size()));
    }

    std::vector<double> coeffs_;
    double offset_ = 0.0;
};

/// A canonical pair (x, p) of one output mode.
struct ModeOperator {
    QuadExpr x;
    QuadExpr p;

    /// Untouched initial mode `mode` of an `n_modes` basis.
    static ModeOperator initial(std::size_t mode, std::size_t n_modes) {
        return {QuadExpr::x_of(mode, n_modes), QuadExpr::p_of(mode, n_modes)};
    }

    std::size_t modes() const { return x.modes(); }
};

namespace detail {

inline void require_basis(const QuadExpr& q, const Basis& specs) {
    if (q.modes() != specs.size())
        throw std::invalid_argument("expression spans " + std::to_string(q.modes()) +
                                    " modes but basis has " + std::to_string(specs.size()));
}

inline void require_same_basis(const ModeOperator& a, const ModeOperator& b) {
    if (a.x.modes() != b.x.modes() || a.p.modes() != b.p.modes() || a.x.modes() != a.p.modes())
        throw std::invalid_argument("mode operators are over different bases");
}

}  // namespace detail

/// Mode `mode` of a vacuum basis after preparation per `spec`: squeezing scales
/// the coefficients (e^{-r} on the squeezed quadrature), displacement goes to the
/// offsets. Use with vacuum_basis(n_modes) for moments.
inline ModeOperator prepare(std::size_t mode, std::size_t n_modes, const InitialModeSpec& spec) {
    spec.validate();
    const double sq = std::exp(-spec.squeezing);
    const double anti = std::exp(spec.squeezing);
    ModeOperator m = ModeOperator::initial(mode, n_modes);
    m.x *= spec.axis == Axis::X ? sq : anti;
    m.p *= spec.axis == Axis::X ? anti : sq;
    m.x += QuadExpr(std::vector<double>(2 * n_modes, 0.0), spec.x_mean);
    m.p += QuadExpr(std::vector<double>(2 * n_modes, 0.0), spec.p_mean);
    return m;
}

inline double covariance(const QuadExpr& a, const QuadExpr& b, const Basis& specs) {
    detail::require_basis(a, specs);
    detail::require_basis(b, specs);
    double c = 0.0;
    for (std::size_t k = 0; k < specs.size(); ++k) {
        c += a.x_coeff(k) * b.x_coeff(k) * specs[k].x_variance();
        c += a.p_coeff(k) * b.p_coeff(k) * specs[k].p_variance();
    }
    return c;
}

inline double variance(const QuadExpr& q, const Basis& specs) { return covariance(q, q, specs); }

/// Symmetric 2M x 2M second-moment matrix in (x_1, p_1, ..., x_M, p_M) order.
class CovMatrix {
public:
    explicit CovMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim, 0.0) {
        if (dim == 0 || dim % 2 != 0) throw std::invalid_argument("CovMatrix dimension must be 2M, M >= 1");
    }

    CovMatrix(std::size_t dim, std::vector<double> row_major) : dim_(dim), entries_(std::move(row_major)) {
        if (dim == 0 || dim % 2 != 0) throw std::invalid_argument("CovMatrix dimension must be 2M, M >= 1");
        if (entries_.size() != dim * dim) throw std::invalid_argument("CovMatrix entry count mismatch");
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = i + 1; j < dim_; ++j)
                if (std::abs((*this)(i, j) - (*this)(j, i)) > kTolerance)
                    throw std::invalid_argument("CovMatrix must be symmetric");
    }

    std::size_t dim() const { return dim_; }
    std::size_t modes() const { return dim_ / 2; }

    double operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }

    std::span<const double> row_major() const { return entries_; }

    /// Reduced matrix over the listed modes, in the listed order.
    CovMatrix submatrix(std::span<const std::size_t> keep_modes) const {
        for (std::size_t m : keep_modes)
            if (m >= modes()) throw std::out_of_range("submatrix: no such mode");
        CovMatrix out(2 * keep_modes.size());
        for (std::size_t a = 0; a < out.dim(); ++a)
            for (std::size_t b = 0; b < out.dim(); ++b)
                out(a, b) = (*this)(2 * keep_modes[a / 2] + a % 2, 2 * keep_modes[b / 2] + b % 2);
        return out;
    }

    /// Drops mode `mode` (partial trace of a Gaussian state).
    CovMatrix trace_out(std::size_t mode) const {
        if (mode >= modes()) throw std::out_of_range("trace_out: no such mode");
        std::vector<std::size_t> keep;
        for (std::size_t k = 0; k < modes(); ++k)
            if (k != mode) keep.push_back(k);
        return submatrix(keep);
    }

    bool approx_equal(const CovMatrix& o, double tol = kTolerance) const {
        if (dim_ != o.dim_) return false;
        for (std::size_t i = 0; i < entries_.size(); ++i)
            if (std::abs(entries_[i] - o.entries_[i]) > tol) return false;
        return true;
    }

private:
    std::size_t dim_;
    std::vector<double> entries_;
};

inline CovMatrix covariance_matrix(std::span<const ModeOperator> ops, const Basis& specs) {
    if (ops.empty()) throw std::invalid_argument("covariance_matrix: empty operator list");
    std::vector<const QuadExpr*> q;
    q.reserve(2 * ops.size());
    for (const auto& op : ops) {
        detail::require_basis(op.x, specs);
        detail::require_basis(op.p, specs);
        q.push_back(&op.x);
        q.push_back(&op.p);
    }
    CovMatrix cm(q.size());
    for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t j = i; j < q.size(); ++j) cm(i, j) = cm(j, i) = covariance(*q[i], *q[j], specs);
    return cm;
}

inline CovMatrix covariance_matrix(std::initializer_list<ModeOperator> ops, const Basis& specs) {
    return covariance_matrix(std::span<const ModeOperator>(ops.begin(), ops.size()), specs);
}

/// Symplectic product of the x and p coefficient rows. 1 means [x, p] = i survives.
inline double canonical_check(const ModeOperator& op) {
    detail::require_same_basis(op, op);
    double w = 0.0;
    for (std::size_t k = 0; k < op.x.modes(); ++k)
        w += op.x.x_coeff(k) * op.p.p_coeff(k) - op.x.p_coeff(k) * op.p.x_coeff(k);
    return w;
}

/// Symplectic product between quadratures of two different output modes; 0 means they commute.
inline double commutator(const QuadExpr& a, const QuadExpr& b) {
    if (a.modes() != b.modes()) throw std::invalid_argument("commutator: basis mismatch");
    double w = 0.0;
    for (std::size_t k = 0; k < a.modes(); ++k) w += a.x_coeff(k) * b.p_coeff(k) - a.p_coeff(k) * b.x_coeff(k);
    return w;
}

}  // namespace cvqc
