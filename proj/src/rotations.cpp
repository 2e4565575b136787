#include "ratvec/rotations.hpp"

#include <cmath>
#include <limits>
#include <optional>

namespace ratvec {

Matrix2c Rotation::matrix() const
{
    Matrix2c g;
    g << std::conj(c), -std::conj(s), s, c;
    return g;
}

Elimination givens_eliminate(cplx a, cplx b)
{
    if (a == cplx(0.0) && b == cplx(0.0)) throw Error(ErrorCode::ZeroVector, "nothing to eliminate");
    if (b == cplx(0.0) && a.imag() == 0.0 && a.real() > 0.0) return {Rotation{}, a.real()};
    const double r = std::hypot(std::abs(a), std::abs(b));
    return {Rotation{a / r, -b / r, 0, 1}, r};
}

Rotation zero_leading_of_row(cplx x, cplx y)
{
    if (x == cplx(0.0)) return Rotation{};
    const double t = std::hypot(std::abs(x), std::abs(y));
    return Rotation{std::conj(y) / t, -x / t, 0, 1};
}

namespace {

void check_indices(const Rotation& g, Index extent)
{
    if (g.i < 0 || g.j <= g.i || g.j >= extent)
        throw Error(ErrorCode::IndexOutOfRange, "rotation (" + std::to_string(g.i) + ", " + std::to_string(g.j)
                                                    + ") outside dimension " + std::to_string(extent));
}

}  // namespace

void apply_left(const Rotation& g, MatrixXc& m)
{
    check_indices(g, m.rows());
    const cplx cc = std::conj(g.c);
    const cplx sc = std::conj(g.s);
    for (Index col = 0; col < m.cols(); ++col) {
        const cplx x = m(g.i, col);
        const cplx y = m(g.j, col);
        m(g.i, col) = cc * x - sc * y;
        m(g.j, col) = g.s * x + g.c * y;
    }
}

void apply_right(MatrixXc& m, const Rotation& g)
{
    check_indices(g, m.cols());
    const cplx cc = std::conj(g.c);
    const cplx sc = std::conj(g.s);
    auto ci = m.col(g.i);
    auto cj = m.col(g.j);
    for (Index row = 0; row < m.rows(); ++row) {
        const cplx x = ci(row);
        const cplx y = cj(row);
        ci(row) = cc * x + g.s * y;
        cj(row) = -sc * x + g.c * y;
    }
}

namespace {

Matrix2c rotate(const Rotation& left, const Matrix2c& m, const Rotation& right)
{
    return left.matrix() * m * right.matrix();
}

struct PositionCheck {
    double deviation;  // worst chordal distance to the prescribed diagonal pair
    bool swapped;      // some diagonal pair sits closer to the other eigenvalue
};

PositionCheck check_positions(const Matrix2c& a, const Matrix2c& b, const Matrix2c& at, const Matrix2c& bt)
{
    const double d11 = chordal_distance(at(0, 0), bt(0, 0), a(0, 0), b(0, 0));
    const double d22 = chordal_distance(at(1, 1), bt(1, 1), a(1, 1), b(1, 1));
    const double x11 = chordal_distance(at(0, 0), bt(0, 0), a(1, 1), b(1, 1));
    const double x22 = chordal_distance(at(1, 1), bt(1, 1), a(0, 0), b(0, 0));
    return {std::max(d11, d22), x11 < d11 || x22 < d22};
}

// Rank-1 construction: the second row of G_L annihilates b22 A - a22 B, which
// makes the second rows of G_L A and G_L B proportional; G_R then zeroes them
// in the first column.
PencilTriangularization rank_one_route(const Matrix2c& a, const Matrix2c& b)
{
    PencilTriangularization out;
    const Eigen::Vector2cd v = b(1, 1) * a.col(0) - a(1, 1) * b.col(0);
    if (v(0) != cplx(0.0) || v(1) != cplx(0.0)) out.left = givens_eliminate(v(0), v(1)).rotation;
    const Matrix2c t = out.left.matrix() * a;
    const Matrix2c u = out.left.matrix() * b;
    if (t.row(1).norm() >= u.row(1).norm())
        out.right = zero_leading_of_row(t(1, 0), t(1, 1));
    else
        out.right = zero_leading_of_row(u(1, 0), u(1, 1));
    return out;
}

// Eigenvector route: the first column of G_R spans the right eigenvector of
// the top-left eigenvalue, G_L maps its image onto e_1.
PencilTriangularization eigenvector_route(const Matrix2c& a, const Matrix2c& b)
{
    PencilTriangularization out;
    out.used_fallback = true;
    const Matrix2c shifted = b(0, 0) * a - a(0, 0) * b;
    Eigen::Vector2cd x(shifted(1, 1), -shifted(1, 0));
    if (x.norm() == 0.0) x = Eigen::Vector2cd(shifted(0, 1), -shifted(0, 0));
    if (x.norm() == 0.0) x = Eigen::Vector2cd(1.0, 0.0);
    out.right = givens_eliminate(x(0), x(1)).rotation.adjoint();
    const Eigen::Vector2cd ax = a * x;
    const Eigen::Vector2cd bx = b * x;
    const Eigen::Vector2cd y = ax.norm() >= bx.norm() ? ax : bx;
    if (y.norm() > 0.0) out.left = givens_eliminate(y(0), y(1)).rotation;
    return out;
}

}  // namespace

PencilTriangularization triangularize_2x2_pencil(const Matrix2c& a, const Matrix2c& b)
{
    if ((a(0, 0) == cplx(0.0) && b(0, 0) == cplx(0.0)) || (a(1, 1) == cplx(0.0) && b(1, 1) == cplx(0.0)))
        throw Error(ErrorCode::SingularPencil, "a diagonal pair of the pencil is (0, 0)");

    // Position accuracy is limited by the conditioning of the eigenvalues;
    // the tight tolerance is met by well-conditioned pencils, otherwise the
    // more accurate route is kept as long as no eigenvalue changed place.
    constexpr double tol_position = 1e-12;
    const double tol_zero = 32.0 * kEps * std::max(a.norm(), b.norm());
    std::optional<PencilTriangularization> best;
    double best_deviation = std::numeric_limits<double>::infinity();
    for (const auto& route : {rank_one_route, eigenvector_route}) {
        const PencilTriangularization t = route(a, b);
        const Matrix2c at = rotate(t.left, a, t.right);
        const Matrix2c bt = rotate(t.left, b, t.right);
        if (std::abs(at(1, 0)) > tol_zero || std::abs(bt(1, 0)) > tol_zero) continue;
        const PositionCheck check = check_positions(a, b, at, bt);
        if (check.swapped) continue;
        if (check.deviation <= tol_position) return t;
        if (check.deviation < best_deviation) {
            best_deviation = check.deviation;
            best = t;
        }
    }
    if (best) return *best;
    throw Error(ErrorCode::OrderLost, "2x2 pencil could not be triangularized with eigenvalues in place");
}

PolePlacement place_pole(MatrixXc& h, MatrixXc& k, const ProjectivePole& pole, const OffComponentEvaluator& eval)
{
    const Index n = h.rows();
    if (n < 3 || h.cols() != n || k.rows() != n || k.cols() != n)
        throw Error(ErrorCode::IndexOutOfRange, "pole placement needs square pencils of size >= 3");

    const ProjectivePole p = pole.normalized();
    const Index last = n - 1;
    auto shifted = [&](Index col) { return p.mu * h(last, col) - p.nu * k(last, col); };

    const double row_scale = h.row(last).tail(3).norm() + k.row(last).tail(3).norm();
    const double shifted_norm
        = std::sqrt(std::norm(shifted(n - 3)) + std::norm(shifted(n - 2)) + std::norm(shifted(n - 1)));
    if (shifted_norm <= 4.0 * kEps * row_scale)
        throw Error(ErrorCode::DegenerateRotation, "last row of mu H - nu K vanishes");

    PolePlacement out;
    out.rotations[0] = zero_leading_of_row(shifted(n - 2), shifted(n - 1)).at(n - 2, n - 1);
    apply_right(h, out.rotations[0]);
    apply_right(k, out.rotations[0]);

    out.rotations[1] = zero_leading_of_row(shifted(n - 3), shifted(n - 1)).at(n - 3, n - 1);
    apply_right(h, out.rotations[1]);
    apply_right(k, out.rotations[1]);

    if (p.is_infinite()) {
        const double tol = 32.0 * kEps * row_scale;
        for (Index col : {n - 3, n - 2}) {
            if (std::abs(k(last, col)) > tol)
                throw Error(ErrorCode::InternalConsistency, "infinite pole left a nonzero K entry");
            k(last, col) = 0.0;
        }
    }

    const auto values = eval(h, k);
    if (values[0] == cplx(0.0) && values[1] == cplx(0.0))
        throw Error(ErrorCode::DegenerateRotation, "off-component values vanish at the pole");
    out.rotations[2] = zero_leading_of_row(values[0], values[1]).at(n - 3, n - 2);
    apply_right(h, out.rotations[2]);
    apply_right(k, out.rotations[2]);
    return out;
}

}  // namespace ratvec
