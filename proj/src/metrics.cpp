#include "ratvec/metrics.hpp"

#include "ratvec/eval.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace ratvec {

double hermitian_norm2(const MatrixXc& a)
{
    if (a.size() == 0) return 0.0;
    const Eigen::SelfAdjointEigenSolver<MatrixXc> eig(a, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().cwiseAbs().maxCoeff();
}

double norm2(const MatrixXc& a)
{
    if (a.size() == 0) return 0.0;
    // ||A||_2^2 = lambda_max(A^H A)
    return std::sqrt(std::max(0.0, hermitian_norm2(a.adjoint() * a)));
}

double err_q(const PencilSolution& s)
{
    const Index n = s.q.cols();
    return hermitian_norm2(s.q.adjoint() * s.q - MatrixXc::Identity(n, n));
}

double err_phi(const PencilSolution& s)
{
    const MatrixXc m = node_table(s).gram();
    return hermitian_norm2(m - MatrixXc::Identity(m.rows(), m.cols()));
}

std::optional<double> err_p(const PencilSolution& s)
{
    std::optional<double> worst;
    for (Index j = 2; j < s.size(); ++j) {
        const ProjectivePole& p = s.spec.poles[static_cast<std::size_t>(j)];
        if (p.is_infinite()) continue;
        const cplx target = p.value();
        const cplx encoded = s.h(j, j - 2) / s.k(j, j - 2);
        double e = std::abs(encoded - target);
        if (target != cplx(0.0)) e /= std::abs(target);
        if (!std::isfinite(e)) e = std::numeric_limits<double>::infinity();
        worst = std::max(worst.value_or(0.0), e);
    }
    return worst;
}

double err_r(const PencilSolution& s)
{
    const MatrixXc zqk = s.spec.nodes.asDiagonal() * (s.q * s.k);
    const MatrixXc qh = s.q * s.h;
    const double denom = std::max(norm2(zqk), norm2(qh));
    return denom == 0.0 ? 0.0 : norm2(zqk - qh) / denom;
}

MetricsRow compute_metrics(const PencilSolution& s)
{
    return {s.size(), err_q(s), err_phi(s), err_p(s), err_r(s)};
}

}  // namespace ratvec
