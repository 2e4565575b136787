#pragma once

#include "ratvec/core.hpp"
#include "ratvec/eval.hpp"

#include <array>
#include <vector>

namespace ratvec {

struct KrylovOptions {
    /// Residual norm below tol * ||q^|| means the space did not grow.
    double breakdown_tol = 1e-14;
};

/// Arnoldi state after k basis vectors. Vector q_i stands for the rational
/// vector phi_i through q_i = [w_1^H phi_i(z_1), ..., w_n^H phi_i(z_n)].
struct KrylovState {
    ProblemSpec spec;
    NodeMatrix omega;  // conj(W): the start vectors
    Matrix2c r;        // omega = [q_1 q_2] R
    MatrixXc basis;    // n x k
    MatrixXc h;        // n x n pencil, columns 0..k-3 filled
    MatrixXc k;
    DegreeTable degrees;

    /// Per component: current top polynomial degree and the vector that
    /// introduced it.
    std::array<int, 2> top_degree{0, 0};
    std::array<Index, 2> top_vector{0, 1};

    /// Laurent windows at infinity, kept only when the spec has more than
    /// the two leading infinite poles.
    bool track_shadows = false;
    int shadow_lo = 0;
    int shadow_hi = 0;
    std::vector<LaurentVector> shadows;

    Index size() const { return basis.cols(); }
};

KrylovState krylov_init(const ValidatedProblemSpec& spec);

/// Right-hand side of one expansion: (mu A - nu I) q^ = sum (rho_i A - eta_i I) q_i.
/// For finite poles `vector` is the sum itself (rho = 0); for infinite poles
/// it is psi = sum rho_i q_i, which the expansion multiplies by A.
struct Continuation {
    VectorXc vector;
    VectorXc rho;
    VectorXc eta;
    LaurentVector shadow;  // empty windows unless shadows are tracked
};

Continuation continuation_vector(const KrylovState& state, const ProjectivePole& pole, Component c);

/// q^ = (mu A - nu I)^{-1} r for finite poles, A r / (-nu) for infinite ones.
/// A zero denominator is accepted only against a zero entry of r.
VectorXc expand(const KrylovState& state, const ProjectivePole& pole, const VectorXc& r);

struct Orthonormalized {
    VectorXc q;
    VectorXc h;  // k projections followed by the real positive norm
};

/// Classical Gram-Schmidt against the current basis: two passes, repeated
/// (up to five) while a pass removes more than half of the remaining norm.
Orthonormalized orthonormalize(const KrylovState& state, const VectorXc& qhat, const KrylovOptions& options = {});

/// One full Arnoldi step: adds basis vector size() with the given pole.
void krylov_step(KrylovState& state, const ProjectivePole& pole, Component c, const KrylovOptions& options = {});

/// Fills the two closure columns and returns the square pencil (H, K).
/// Throws IncompleteIteration unless the basis spans all n nodes.
std::pair<MatrixXc, MatrixXc> assemble_pencil(const KrylovState& state);

PencilSolution solve_krylov(const ValidatedProblemSpec& spec, const KrylovOptions& options = {});

}  // namespace ratvec
