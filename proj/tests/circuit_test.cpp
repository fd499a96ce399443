#include "cvqc/circuit.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"

using namespace cvqc;

namespace {

constexpr double kTol = 1e-12;

std::vector<ModeOperator> fresh(std::size_t n) {
    std::vector<ModeOperator> m;
    for (std::size_t k = 0; k < n; ++k) m.push_back(ModeOperator::initial(k, n));
    return m;
}

// Output mode i must equal sum_j M[i][j] * (input mode j), on x and on p alike.
void expect_mixing(const std::vector<ModeOperator>& out, const oracle::Mat& m, double tol = kTol) {
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            EXPECT_NEAR(out[i].x.x_coeff(j), m[i][j], tol) << i << ',' << j;
            EXPECT_NEAR(out[i].p.p_coeff(j), m[i][j], tol) << i << ',' << j;
            EXPECT_EQ(out[i].x.p_coeff(j), 0.0);
            EXPECT_EQ(out[i].p.x_coeff(j), 0.0);
        }
}

}  // namespace

TEST(BeamSplitter, quarter_pi_sum_difference) {
    const auto m = fresh(2);
    // Inputs ordered (b, a) give ((a + b)/sqrt2, (a - b)/sqrt2).
    auto [sum, diff] = beam_splitter(m[1], m[0], std::numbers::pi / 4);
    const double h = 1 / std::numbers::sqrt2;
    EXPECT_TRUE(sum.x.approx_equal(QuadExpr({h, 0, h, 0})));
    EXPECT_TRUE(diff.x.approx_equal(QuadExpr({h, 0, -h, 0})));
    EXPECT_TRUE(diff.p.approx_equal(QuadExpr({0, h, 0, -h})));
}

TEST(BeamSplitter, zero_angle_is_identity) {
    const auto m = fresh(2);
    auto [a, b] = beam_splitter(m[0], m[1], 0.0);
    EXPECT_TRUE(a.x.approx_equal(m[0].x) && a.p.approx_equal(m[0].p));
    EXPECT_TRUE(b.x.approx_equal(m[1].x) && b.p.approx_equal(m[1].p));
}

TEST(BeamSplitter, composition_matches_matrix_product) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> th(-3.0, 3.0);
    for (int i = 0; i < 50; ++i) {
        const double t1 = th(rng), t2 = th(rng);
        auto m = fresh(2);
        std::tie(m[0], m[1]) = beam_splitter(m[0], m[1], t2);
        std::tie(m[0], m[1]) = beam_splitter(m[0], m[1], t1);
        expect_mixing(m, oracle::multiply(oracle::rotation(2, 0, 1, t1), oracle::rotation(2, 0, 1, t2)));
        expect_mixing(m, oracle::rotation(2, 0, 1, t1 + t2));
    }
}

TEST(BeamSplitter, quarter_pi_twice_swaps_with_sign) {
    auto m = fresh(2);
    auto [a1, b1] = beam_splitter(m[0], m[1], std::numbers::pi / 4);
    auto [a2, b2] = beam_splitter(a1, b1, std::numbers::pi / 4);
    EXPECT_TRUE(a2.x.approx_equal(m[1].x) && a2.p.approx_equal(m[1].p));
    EXPECT_TRUE(b2.x.approx_equal(-m[0].x) && b2.p.approx_equal(-m[0].p));
}

TEST(BeamSplitter, basis_mismatch_throws) {
    EXPECT_THROW(beam_splitter(ModeOperator::initial(0, 2), ModeOperator::initial(0, 3), 0.1), std::invalid_argument);
    EXPECT_THROW(beam_splitter(ModeOperator::initial(0, 2), ModeOperator::initial(1, 2), NAN), std::invalid_argument);
}

TEST(Amplifier, gain_two_matches_bogoliubov) {
    const auto m = fresh(2);
    auto [s, z] = amplifier(m[0], m[1], 2.0);
    const double r2 = std::numbers::sqrt2;
    EXPECT_TRUE(s.x.approx_equal(QuadExpr({r2, 0, 1, 0})));
    EXPECT_TRUE(s.p.approx_equal(QuadExpr({0, r2, 0, -1})));
    EXPECT_TRUE(z.x.approx_equal(QuadExpr({1, 0, r2, 0})));
    EXPECT_TRUE(z.p.approx_equal(QuadExpr({0, -1, 0, r2})));
}

TEST(Amplifier, unit_gain_is_identity) {
    const auto m = fresh(2);
    auto [s, z] = amplifier(m[0], m[1], 1.0);
    EXPECT_TRUE(s.x.approx_equal(m[0].x) && s.p.approx_equal(m[0].p));
    EXPECT_TRUE(z.x.approx_equal(m[1].x) && z.p.approx_equal(m[1].p));
}

TEST(Amplifier, rejects_sub_unit_gain) {
    const auto m = fresh(2);
    EXPECT_THROW(amplifier(m[0], m[1], 0.99), std::invalid_argument);
    EXPECT_THROW(amplifier(m[0], m[1], NAN), std::invalid_argument);
}

TEST(Amplifier, signal_noise_on_vacuum) {
    for (double g : {1.0, 1.5, 2.0, 7.0}) {
        const auto m = fresh(2);
        auto [s, z] = amplifier(m[0], m[1], g);
        EXPECT_NEAR(variance(s.x, vacuum_basis(2)), (2 * g - 1) / 4, kTol);
        EXPECT_NEAR(variance(s.p, vacuum_basis(2)), (2 * g - 1) / 4, kTol);
    }
}

TEST(Tritter, first_mode_coefficient) {
    const auto m = fresh(3);
    auto out = tritter(m[0], m[1], m[2]);
    EXPECT_NEAR(out[0].x.x_coeff(0), 1 / std::sqrt(3.0), kTol);
    for (const auto& o : out) EXPECT_NEAR(canonical_check(o), 1.0, kTol);
}

TEST(Tritter, matches_matrix_oracle_and_is_not_an_involution) {
    const auto m = fresh(3);
    auto once = tritter(m[0], m[1], m[2]);
    expect_mixing({once.begin(), once.end()}, oracle::tritter_matrix());
    auto twice = tritter(once[0], once[1], once[2]);
    const oracle::Mat sq = oracle::multiply(oracle::tritter_matrix(), oracle::tritter_matrix());
    expect_mixing({twice.begin(), twice.end()}, sq);
    double dist = 0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) dist += std::abs(sq[i][j] - (i == j ? 1.0 : 0.0));
    EXPECT_GT(dist, 0.1);
}

TEST(Tritter, equal_split_of_mode_one) {
    // A mode-1 excitation spreads with weight 1/3 into each output.
    const auto m = fresh(3);
    auto out = tritter(m[0], m[1], m[2]);
    for (const auto& o : out) EXPECT_NEAR(o.x.x_coeff(0) * o.x.x_coeff(0), 1.0 / 3, kTol);
}

TEST(CircuitElement, validation_and_apply) {
    CircuitElement bs{BeamSplitterElement{0.3}, {0, 1}};
    CircuitElement amp{AmplifierElement{2.0}, {0, 2}};
    CircuitElement tr{TritterElement{}, {0, 1, 2}};
    EXPECT_NO_THROW(bs.validate());
    EXPECT_THROW((CircuitElement{BeamSplitterElement{0.3}, {0}}.validate()), std::invalid_argument);
    EXPECT_THROW((CircuitElement{AmplifierElement{0.5}, {0, 1}}.validate()), std::invalid_argument);
    EXPECT_THROW((CircuitElement{TritterElement{}, {0, 1}}.validate()), std::invalid_argument);
    EXPECT_THROW((CircuitElement{BeamSplitterElement{0.3}, {1, 1}}.validate()), std::invalid_argument);

    auto m = fresh(3);
    const std::vector<CircuitElement> circuit{amp, bs, tr};
    apply_all(circuit, m);
    for (const auto& o : m) EXPECT_NEAR(canonical_check(o), 1.0, kTol);

    auto too_small = fresh(2);
    EXPECT_THROW(apply_element(tr, too_small), std::out_of_range);
}

TEST(Clone, closed_form_first_rows) {
    const double r0 = 0.4, r1 = 0.9, rz = 0.2;
    const CloneOutput c = clone_1to2(r0, r1, rz);
    const double h = 1 / std::numbers::sqrt2;
    EXPECT_NEAR(c.clone0.x.x_coeff(0), std::exp(-r0), kTol);
    EXPECT_NEAR(c.clone0.x.x_coeff(1), std::exp(-r1) * h, kTol);
    EXPECT_NEAR(c.clone0.x.x_coeff(2), std::exp(rz) * h, kTol);
    EXPECT_NEAR(c.clone1.p.p_coeff(0), std::exp(r0), kTol);
    EXPECT_NEAR(c.clone1.p.p_coeff(1), -std::exp(r1) * h, kTol);
    EXPECT_NEAR(c.clone1.p.p_coeff(2), -std::exp(-rz) * h, kTol);
}

TEST(Clone, clones_differ_only_in_blank_sign) {
    const CloneOutput c = clone_1to2(0.3, 0.5, 0.1);
    for (std::size_t k : {0u, 2u}) {
        EXPECT_NEAR(c.clone0.x.x_coeff(k), c.clone1.x.x_coeff(k), kTol);
        EXPECT_NEAR(c.clone0.p.p_coeff(k), c.clone1.p.p_coeff(k), kTol);
    }
    EXPECT_NEAR(c.clone0.x.x_coeff(1), -c.clone1.x.x_coeff(1), kTol);
    EXPECT_NEAR(c.clone0.p.p_coeff(1), -c.clone1.p.p_coeff(1), kTol);
}

TEST(Clone, rejects_bad_setup) {
    EXPECT_THROW(clone_1to2(-0.1, 0, 0), std::invalid_argument);
    EXPECT_THROW(clone_1to2(0, 0, -1e-3), std::invalid_argument);
    CloneSetup s;
    s.ancilla = InitialModeSpec::x_squeezed(0.5);
    EXPECT_THROW(clone_1to2(s, 3), std::invalid_argument);
    s = CloneSetup{};
    s.blank = InitialModeSpec::p_squeezed(0.5);
    EXPECT_THROW(clone_1to2(s, 3), std::invalid_argument);
    EXPECT_THROW(clone_1to2(CloneSetup{}, 2), std::invalid_argument);
}

TEST(CloneProperty, composition_equals_closed_form_and_stays_canonical) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> r(0.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double r0 = r(rng), r1 = r(rng), rz = r(rng);
        const CloneOutput c = clone_1to2(r0, r1, rz);
        const oracle::CloneRows rows = oracle::clone_rows(r0, r1, rz);
        const auto check = [](const QuadExpr& q, const std::array<double, 6>& row) {
            for (std::size_t k = 0; k < 6; ++k) EXPECT_NEAR(q.coeffs()[k], row[k], kTol) << k;
        };
        check(c.clone0.x, rows.x0);
        check(c.clone0.p, rows.p0);
        check(c.clone1.x, rows.x1);
        check(c.clone1.p, rows.p1);
        check(c.ancilla.x, rows.xz);
        check(c.ancilla.p, rows.pz);
        for (const ModeOperator* m : {&c.clone0, &c.clone1, &c.ancilla}) EXPECT_NEAR(canonical_check(*m), 1.0, kTol);
        EXPECT_NEAR(commutator(c.clone0.x, c.clone1.p), 0.0, kTol);
        EXPECT_NEAR(commutator(c.clone0.x, c.ancilla.p), 0.0, kTol);
        EXPECT_NEAR(commutator(c.clone1.x, c.ancilla.p), 0.0, kTol);
    }
}

TEST(CircuitProperty, elements_are_symplectic) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> th(-6.0, 6.0), g(1.0, 10.0), r(0.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        auto m = std::vector<ModeOperator>{prepare(0, 3, InitialModeSpec::x_squeezed(r(rng))),
                                           prepare(1, 3, InitialModeSpec::p_squeezed(r(rng))),
                                           prepare(2, 3, InitialModeSpec::x_squeezed(r(rng)))};
        apply_element(CircuitElement{BeamSplitterElement{th(rng)}, {0, 1}}, m);
        apply_element(CircuitElement{AmplifierElement{g(rng)}, {2, 0}}, m);
        apply_element(CircuitElement{TritterElement{}, {1, 2, 0}}, m);
        for (const auto& o : m) EXPECT_NEAR(canonical_check(o), 1.0, 1e-10);
        EXPECT_NEAR(commutator(m[0].x, m[1].p), 0.0, 1e-10);
        EXPECT_NEAR(commutator(m[1].x, m[2].p), 0.0, 1e-10);
    }
}
