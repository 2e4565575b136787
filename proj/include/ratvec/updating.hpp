#pragma once

#include "ratvec/core.hpp"

namespace ratvec {

/// How an infinite pole is handled once some component carries more than
/// two of them.
enum class InfinitePolePolicy {
    kExactSymbolic,  // leading coefficients from the symbolic basis
    kReject,         // throw UnsupportedInfiniteMultiplicity
};

struct UpdatingOptions {
    InfinitePolePolicy infinite_policy = InfinitePolePolicy::kExactSymbolic;
};

struct UpdatingDiagnostics {
    int fallback_swaps = 0;      // 2x2 triangularizations that needed the eigenvector route
    int symbolic_leading = 0;    // infinite poles placed with symbolic leading coefficients
};

/// Solution for the first k nodes: Z Q K = Q H, Q^H conj(W_k) = [R; 0].
struct UpdatingState {
    MatrixXc q;
    MatrixXc h;
    MatrixXc k;
    Matrix2c r;
    ProblemSpec spec;
    DegreeTable degrees;
    UpdatingDiagnostics diagnostics;

    Index size() const { return q.cols(); }
    PencilSolution solution() const { return {q, h, k, r, spec, degrees}; }
};

/// One-node pencil (z1, 1) with Q = 1. Not a valid start for update_step.
UpdatingState init_single(cplx z1, const Vector2c& w1);

/// Two-node base case. w1, w2 are the weight rows w_i^T.
UpdatingState init_base(cplx z1, cplx z2, const Vector2c& w1, const Vector2c& w2);

/// Adds one node and places `pole` in component `c` on the new function.
UpdatingState update_step(UpdatingState state, cplx z, const Vector2c& w, const ProjectivePole& pole, Component c,
                          const UpdatingOptions& options = {});

PencilSolution solve_updating(const ValidatedProblemSpec& spec, const UpdatingOptions& options = {},
                              UpdatingDiagnostics* diagnostics = nullptr);

}  // namespace ratvec
