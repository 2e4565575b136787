#include "ratvec/core.hpp"
#include "ratvec/harness.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

namespace {

using namespace ratvec;

ProblemSpec minimal_spec()
{
    ProblemSpec s;
    s.nodes.resize(2);
    s.nodes << 1.0, cplx(0.0, 1.0);
    s.weights = NodeMatrix::Identity(2, 2);
    s.poles = {ProjectivePole::infinity(), ProjectivePole::infinity()};
    s.index = {Component::First, Component::Second};
    return s;
}

ProblemSpec eight_node_spec()
{
    Rng rng(5);
    return build_exp1(8, rng);
}

ErrorCode validation_error(const ProblemSpec& s)
{
    try {
        validate(s);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "spec was accepted";
    return ErrorCode::InternalConsistency;
}

TEST(Validate, MinimalSpecIsAccepted)
{
    const ValidatedProblemSpec v = validate(minimal_spec());
    EXPECT_EQ(v.size(), 2);
}

TEST(Validate, NodeOnFinitePoleIsRejected)
{
    ProblemSpec s = eight_node_spec();
    s.poles[3] = ProjectivePole::finite(s.nodes(2));
    EXPECT_EQ(validation_error(s), ErrorCode::NodeEqualsPole);
}

TEST(Validate, NodeOnPoleWithMaskedComponentIsAccepted)
{
    ProblemSpec s = eight_node_spec();
    s.poles[3] = ProjectivePole::finite(s.nodes(2));
    s.weights(2, slot(s.index[3])) = 0.0;
    EXPECT_NO_THROW(validate(s));
}

TEST(Validate, RepeatedFinitePoleInOneComponentIsRejected)
{
    ProblemSpec s = eight_node_spec();
    s.poles[6] = s.poles[3];
    s.index[3] = Component::First;
    s.index[6] = Component::First;
    EXPECT_EQ(validation_error(s), ErrorCode::RepeatedFinitePoleInComponent);
}

TEST(Validate, RepeatedFinitePoleAcrossComponentsIsAccepted)
{
    ProblemSpec s = eight_node_spec();
    s.poles[6] = s.poles[3];
    s.index[3] = Component::First;
    s.index[6] = Component::Second;
    EXPECT_NO_THROW(validate(s));
}

TEST(Validate, ZeroWeightRowIsRejected)
{
    ProblemSpec s = eight_node_spec();
    s.weights.row(4).setZero();
    EXPECT_EQ(validation_error(s), ErrorCode::ZeroWeightRow);
}

TEST(Validate, LeadingPolesMustBeInfiniteInBothComponents)
{
    ProblemSpec s = eight_node_spec();
    s.index[1] = Component::First;
    EXPECT_EQ(validation_error(s), ErrorCode::BadPrefix);
    s = eight_node_spec();
    s.poles[0] = ProjectivePole::finite(2.0);
    EXPECT_EQ(validation_error(s), ErrorCode::BadPrefix);
}

TEST(Validate, LengthMismatchIsRejected)
{
    ProblemSpec s = eight_node_spec();
    s.poles.pop_back();
    EXPECT_EQ(validation_error(s), ErrorCode::LengthMismatch);
}

TEST(InnerProduct, SingleTerm)
{
    NodeMatrix phi(1, 2), w(1, 2);
    phi << 1.0, 0.0;
    w << 1.0, 0.0;
    EXPECT_NEAR(std::abs(inner_product(phi, phi, w) - 1.0), 0.0, 1e-15);
}

TEST(InnerProduct, MatchesTermByTermSum)
{
    Rng rng(11);
    const Index n = 9;
    NodeMatrix phi(n, 2), psi(n, 2), w(n, 2);
    for (Index i = 0; i < n; ++i)
        for (int c = 0; c < 2; ++c) {
            phi(i, c) = support::random_complex(rng);
            psi(i, c) = support::random_complex(rng);
            w(i, c) = support::random_complex(rng);
        }
    cplx expect(0.0);
    for (Index i = 0; i < n; ++i) {
        cplx wphi(0.0), wpsi(0.0);
        for (int c = 0; c < 2; ++c) {
            wphi += std::conj(w(i, c)) * phi(i, c);
            wpsi += std::conj(w(i, c)) * psi(i, c);
        }
        expect += std::conj(wpsi) * wphi;
    }
    EXPECT_LE(std::abs(inner_product(phi, psi, w) - expect), 1e-14 * std::abs(expect));
}

TEST(InnerProduct, InitialBasisIsOrthonormal)
{
    const ProblemSpec s = eight_node_spec();
    const EconomicalQr qr = economical_qr(weight_operator(s));
    const auto [phi1, phi2] = initial_basis(qr.r);
    NodeMatrix a(s.size(), 2), b(s.size(), 2);
    for (Index i = 0; i < s.size(); ++i) {
        a.row(i) = phi1.transpose();
        b.row(i) = phi2.transpose();
    }
    EXPECT_LE(std::abs(inner_product(a, b, s.weights)), 1e-14);
    EXPECT_LE(std::abs(inner_product(a, a, s.weights) - 1.0), 1e-14);
    EXPECT_LE(std::abs(inner_product(b, b, s.weights) - 1.0), 1e-14);
}

TEST(EconomicalQr, OrthonormalInputIsKept)
{
    NodeMatrix w = NodeMatrix::Zero(4, 2);
    w(0, 0) = 1.0;
    w(1, 1) = 1.0;
    const EconomicalQr qr = economical_qr(w);
    EXPECT_LE((qr.q - w).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE((qr.r - Matrix2c::Identity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(EconomicalQr, DiagonalScaling)
{
    NodeMatrix w = NodeMatrix::Zero(3, 2);
    w(0, 0) = 2.0;
    w(1, 1) = 3.0;
    const EconomicalQr qr = economical_qr(w);
    Matrix2c expect = Matrix2c::Zero();
    expect(0, 0) = 2.0;
    expect(1, 1) = 3.0;
    EXPECT_LE((qr.r - expect).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(EconomicalQr, RandomResidualAndOrthogonality)
{
    Rng rng(3);
    NodeMatrix w(10, 2);
    for (Index i = 0; i < 10; ++i)
        for (int c = 0; c < 2; ++c) w(i, c) = support::random_complex(rng);
    const EconomicalQr qr = economical_qr(w);
    EXPECT_LE((w - qr.q * qr.r).norm(), 10 * kEps * w.norm());
    EXPECT_LE((qr.q.adjoint() * qr.q - Matrix2c::Identity()).norm(), 10 * kEps);
    EXPECT_EQ(qr.r(1, 0), cplx(0.0));
    EXPECT_GE(qr.r(0, 0).real(), 0.0);
    EXPECT_EQ(qr.r(0, 0).imag(), 0.0);
    EXPECT_GE(qr.r(1, 1).real(), 0.0);
    EXPECT_EQ(qr.r(1, 1).imag(), 0.0);
}

TEST(EconomicalQr, RankDeficientWeightsAreRejected)
{
    NodeMatrix w(3, 2);
    w << 1.0, 2.0, cplx(0.0, 1.0), cplx(0.0, 2.0), 3.0, 6.0;
    try {
        economical_qr(w);
        FAIL() << "rank deficiency not reported";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::RankDeficientWeights);
    }
}

TEST(InitialBasis, Identity)
{
    const auto [phi1, phi2] = initial_basis(Matrix2c::Identity());
    EXPECT_EQ(phi1, Vector2c(1.0, 0.0));
    EXPECT_EQ(phi2, Vector2c(0.0, 1.0));
}

TEST(InitialBasis, DiagonalInverse)
{
    Matrix2c r = Matrix2c::Zero();
    r(0, 0) = 2.0;
    r(1, 1) = 4.0;
    const auto [phi1, phi2] = initial_basis(r);
    EXPECT_LE((phi1 - Vector2c(0.5, 0.0)).norm(), 1e-16);
    EXPECT_LE((phi2 - Vector2c(0.0, 0.25)).norm(), 1e-16);
}

TEST(InitialBasis, RandomMultiplyBack)
{
    Rng rng(8);
    for (int t = 0; t < 50; ++t) {
        Matrix2c r = Matrix2c::Zero();
        r(0, 0) = rng.uniform(0.1, 2.0);
        r(0, 1) = support::random_complex(rng);
        r(1, 1) = rng.uniform(0.1, 2.0);
        const auto [phi1, phi2] = initial_basis(r);
        Matrix2c p;
        p << phi1, phi2;
        const double kappa = r.norm() * r.inverse().norm();
        EXPECT_LE((r * p - Matrix2c::Identity()).norm(), 10 * kEps * kappa);
    }
}

TEST(ChordalDistance, TreatsInfinityUniformly)
{
    EXPECT_EQ(chordal_distance(ProjectivePole::infinity(), ProjectivePole::infinity()), 0.0);
    EXPECT_LE(chordal_distance(ProjectivePole::finite(2.0), ProjectivePole{cplx(4.0), cplx(2.0)}), 1e-16);
    EXPECT_GT(chordal_distance(ProjectivePole::finite(1e8), ProjectivePole::finite(0.0)), 0.99);
    EXPECT_LE(chordal_distance(ProjectivePole::finite(1e16), ProjectivePole::infinity()), 1e-15);
}

TEST(DegreeTable, TracksPolynomialAndFractionalDegrees)
{
    DegreeTable d;
    d.push(ProjectivePole::infinity(), Component::First);
    d.push(ProjectivePole::infinity(), Component::Second);
    d.push(ProjectivePole::infinity(), Component::First);
    d.push(ProjectivePole::finite(2.0), Component::First);
    d.push(ProjectivePole::finite(3.0), Component::Second);
    EXPECT_EQ(d.poly_degree(0, Component::First), 0);
    EXPECT_FALSE(d.poly_degree(0, Component::Second).has_value());
    EXPECT_EQ(d.poly_degree(2, Component::First), 1);
    EXPECT_EQ(d.infinite_multiplicity(4, Component::First), 2);
    EXPECT_EQ(d.fractional_degree(4, Component::First), 1);
    EXPECT_EQ(d.fractional_degree(4, Component::Second), 1);
    EXPECT_EQ(d.finite_poles(4, Component::Second), std::vector<cplx>{cplx(3.0)});
}

}  // namespace
