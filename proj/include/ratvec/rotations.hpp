#pragma once

#include "ratvec/core.hpp"

#include <array>
#include <functional>

namespace ratvec {

/// Plane rotation acting on positions (i, j), i < j. Embedded in the
/// identity as
///
///     row i:  conj(c)  -conj(s)
///     row j:  s         c
///
/// with |c|^2 + |s|^2 = 1.
struct Rotation {
    cplx c{1.0, 0.0};
    cplx s{0.0, 0.0};
    Index i = 0;
    Index j = 1;

    Matrix2c matrix() const;
    Rotation adjoint() const { return {std::conj(c), -s, i, j}; }
    Rotation at(Index row_i, Index row_j) const { return {c, s, row_i, row_j}; }
    bool is_identity() const { return c == cplx(1.0) && s == cplx(0.0); }
};

struct Elimination {
    Rotation rotation;
    double r;  // real nonnegative
};

/// G [a; b] = [r; 0] with r = sqrt(|a|^2 + |b|^2).
Elimination givens_eliminate(cplx a, cplx b);

/// [x y] G = [0 t]; the identity when x is already zero.
Rotation zero_leading_of_row(cplx x, cplx y);

/// M <- G M on rows (i, j).
void apply_left(const Rotation& g, MatrixXc& m);
/// M <- M G on columns (i, j).
void apply_right(MatrixXc& m, const Rotation& g);

struct PencilTriangularization {
    Rotation left;
    Rotation right;
    bool used_fallback = false;
};

/// For a regular lower triangular 2 x 2 pencil (A, B), rotations with
/// G_L (A, B) G_R upper triangular and the generalized eigenvalues kept in
/// their diagonal positions. Rotations act on positions (0, 1).
PencilTriangularization triangularize_2x2_pencil(const Matrix2c& a, const Matrix2c& b);

/// Returns [phi~_{n-3,off}(p), phi~_{n-2,off}(p)] (0-based columns) for the
/// pencil handed in, i.e. the off-target component of the two combination
/// functions at the new pole.
using OffComponentEvaluator = std::function<std::array<cplx, 2>(const MatrixXc& h, const MatrixXc& k)>;

struct PolePlacement {
    std::array<Rotation, 3> rotations;  // columns (n-2,n-1), (n-3,n-1), (n-3,n-2), 0-based
};

/// Places `pole` on both subdiagonals of the last row by two column
/// rotations, then rotates columns n-3 and n-2 so that the off-target
/// component of the new basis function loses the pole.
PolePlacement place_pole(MatrixXc& h, MatrixXc& k, const ProjectivePole& pole, const OffComponentEvaluator& eval);

}  // namespace ratvec
