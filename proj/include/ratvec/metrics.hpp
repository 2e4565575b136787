#pragma once

#include "ratvec/core.hpp"

#include <optional>

namespace ratvec {

struct MetricsRow {
    Index n = 0;
    double err_q = 0.0;
    double err_phi = 0.0;
    std::optional<double> err_p;  // absent without finite poles
    double err_r = 0.0;
};

/// Spectral norm of a Hermitian matrix.
double hermitian_norm2(const MatrixXc& a);
/// Spectral norm of a general matrix.
double norm2(const MatrixXc& a);

/// ||Q^H Q - I||_2
double err_q(const PencilSolution& s);
/// ||M - I||_2 with M the Gram matrix of the basis evaluated at the nodes.
double err_phi(const PencilSolution& s);
/// max |h_{j+2,j}/k_{j+2,j} - p_{j+2}| / |p_{j+2}| over finite poles
/// (absolute error where p = 0). Absent when no finite pole exists.
std::optional<double> err_p(const PencilSolution& s);
/// ||Z Q K - Q H||_2 / max(||Z Q K||_2, ||Q H||_2)
double err_r(const PencilSolution& s);

MetricsRow compute_metrics(const PencilSolution& s);

}  // namespace ratvec
