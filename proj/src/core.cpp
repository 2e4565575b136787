#include "ratvec/core.hpp"

#include <cmath>
#include <sstream>

namespace ratvec {

const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NodeEqualsPole: return "NodeEqualsPole";
    case ErrorCode::ZeroWeightRow: return "ZeroWeightRow";
    case ErrorCode::RepeatedFinitePoleInComponent: return "RepeatedFinitePoleInComponent";
    case ErrorCode::BadPrefix: return "BadPrefix";
    case ErrorCode::RankDeficientWeights: return "RankDeficientWeights";
    case ErrorCode::SingularR: return "SingularR";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::SingularPencil: return "SingularPencil";
    case ErrorCode::OrderLost: return "OrderLost";
    case ErrorCode::DegenerateRotation: return "DegenerateRotation";
    case ErrorCode::Breakdown: return "Breakdown";
    case ErrorCode::UnsupportedInfiniteMultiplicity: return "UnsupportedInfiniteMultiplicity";
    case ErrorCode::ShadowUnavailable: return "ShadowUnavailable";
    case ErrorCode::DegenerateCombination: return "DegenerateCombination";
    case ErrorCode::PoleHitsNode: return "PoleHitsNode";
    case ErrorCode::KrylovBreakdown: return "KrylovBreakdown";
    case ErrorCode::IncompleteIteration: return "IncompleteIteration";
    case ErrorCode::EvaluationAtPole: return "EvaluationAtPole";
    case ErrorCode::PoleCollision: return "PoleCollision";
    case ErrorCode::DivisionByZeroComponent: return "DivisionByZeroComponent";
    case ErrorCode::NoFinitePoles: return "NoFinitePoles";
    case ErrorCode::InternalConsistency: return "InternalConsistency";
    case ErrorCode::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
{
}

Component component_from_label(int label)
{
    if (label == 1) return Component::First;
    if (label == 2) return Component::Second;
    throw Error(ErrorCode::InvalidInput, "component label must be 1 or 2, got " + std::to_string(label));
}

ProjectivePole ProjectivePole::normalized() const
{
    const double scale = std::sqrt(std::norm(nu) + std::norm(mu));
    return {nu / scale, mu / scale};
}

double chordal_distance(cplx nu1, cplx mu1, cplx nu2, cplx mu2)
{
    const double denom = std::sqrt((std::norm(nu1) + std::norm(mu1)) * (std::norm(nu2) + std::norm(mu2)));
    return std::abs(nu1 * mu2 - nu2 * mu1) / denom;
}

namespace {

std::string position(Index i) { return std::to_string(i + 1); }

bool same_point(const ProjectivePole& a, const ProjectivePole& b)
{
    return a.nu * b.mu == b.nu * a.mu;
}

}  // namespace

ValidatedProblemSpec validate(ProblemSpec spec)
{
    const Index n = spec.size();
    if (spec.weights.rows() != n || static_cast<Index>(spec.poles.size()) != n
        || static_cast<Index>(spec.index.size()) != n) {
        std::ostringstream msg;
        msg << "nodes " << n << ", weight rows " << spec.weights.rows() << ", poles " << spec.poles.size()
            << ", labels " << spec.index.size();
        throw Error(ErrorCode::LengthMismatch, msg.str());
    }
    if (n < 2) throw Error(ErrorCode::LengthMismatch, "at least two nodes are required");

    for (const auto& p : spec.poles) {
        if (p.nu == cplx(0.0) && p.mu == cplx(0.0))
            throw Error(ErrorCode::InvalidInput, "pole (0, 0) is not a point");
    }
    if (!spec.poles[0].is_infinite() || !spec.poles[1].is_infinite() || spec.index[0] != Component::First
        || spec.index[1] != Component::Second) {
        throw Error(ErrorCode::BadPrefix, "the first two poles must be infinite with labels (1, 2)");
    }

    for (Index i = 0; i < n; ++i) {
        if (spec.weights(i, 0) == cplx(0.0) && spec.weights(i, 1) == cplx(0.0))
            throw Error(ErrorCode::ZeroWeightRow, "weight row " + position(i) + " is zero");
    }

    for (Index k = 0; k < n; ++k) {
        const auto& p = spec.poles[k];
        if (p.is_infinite()) continue;
        const cplx value = p.value();
        const int c = slot(spec.index[k]);
        for (Index i = 0; i < n; ++i) {
            if (spec.nodes(i) == value && spec.weights(i, c) != cplx(0.0)) {
                throw Error(ErrorCode::NodeEqualsPole,
                            "node " + position(i) + " coincides with pole " + position(k));
            }
        }
        for (Index j = k + 1; j < n; ++j) {
            if (spec.index[j] == spec.index[k] && !spec.poles[j].is_infinite() && same_point(p, spec.poles[j])) {
                throw Error(ErrorCode::RepeatedFinitePoleInComponent,
                            "poles " + position(k) + " and " + position(j) + " repeat in one component");
            }
        }
    }
    return ValidatedProblemSpec(std::move(spec));
}

NodeMatrix weight_operator(const ProblemSpec& spec) { return spec.weights.conjugate(); }

cplx inner_product(const NodeMatrix& phi, const NodeMatrix& psi, const NodeMatrix& weights)
{
    if (phi.rows() != weights.rows() || psi.rows() != weights.rows())
        throw Error(ErrorCode::LengthMismatch, "evaluation lists must match the number of nodes");
    cplx sum(0.0);
    for (Index i = 0; i < weights.rows(); ++i) {
        const cplx wp = std::conj(weights(i, 0)) * phi(i, 0) + std::conj(weights(i, 1)) * phi(i, 1);
        const cplx ws = std::conj(weights(i, 0)) * psi(i, 0) + std::conj(weights(i, 1)) * psi(i, 1);
        sum += std::conj(ws) * wp;
    }
    return sum;
}

EconomicalQr economical_qr(const NodeMatrix& w)
{
    const double wnorm = w.norm();
    if (wnorm == 0.0) throw Error(ErrorCode::RankDeficientWeights, "weight matrix is zero");

    EconomicalQr out;
    out.q = w;
    out.r.setZero();

    const double r11 = out.q.col(0).norm();
    if (r11 <= 100.0 * kEps * wnorm) throw Error(ErrorCode::RankDeficientWeights, "first weight column vanishes");
    out.q.col(0) /= r11;
    out.r(0, 0) = r11;

    for (int pass = 0; pass < 2; ++pass) {
        const cplx proj = out.q.col(0).dot(out.q.col(1));
        out.q.col(1) -= proj * out.q.col(0);
        out.r(0, 1) += proj;
    }
    const double r22 = out.q.col(1).norm();
    if (r22 <= 100.0 * kEps * wnorm)
        throw Error(ErrorCode::RankDeficientWeights, "weight columns are numerically dependent");
    out.q.col(1) /= r22;
    out.r(1, 1) = r22;
    return out;
}

std::pair<Vector2c, Vector2c> initial_basis(const Matrix2c& r)
{
    if (r(1, 0) != cplx(0.0)) throw Error(ErrorCode::InvalidInput, "R must be upper triangular");
    if (r(0, 0) == cplx(0.0) || r(1, 1) == cplx(0.0)) throw Error(ErrorCode::SingularR, "R has a zero pivot");
    Vector2c phi1(1.0 / r(0, 0), 0.0);
    Vector2c phi2(-r(0, 1) / (r(0, 0) * r(1, 1)), 1.0 / r(1, 1));
    return {phi1, phi2};
}

void DegreeTable::push(const ProjectivePole& pole, Component c)
{
    Step step{pole, c, {0, 0}, {0, 0}};
    if (!steps_.empty()) {
        step.infinite_count = steps_.back().infinite_count;
        step.finite_count = steps_.back().finite_count;
    }
    if (pole.is_infinite())
        ++step.infinite_count[slot(c)];
    else
        ++step.finite_count[slot(c)];
    steps_.push_back(step);
}

std::optional<int> DegreeTable::poly_degree(Index j, Component c) const
{
    const int count = steps_.at(static_cast<std::size_t>(j)).infinite_count[slot(c)];
    if (count == 0) return std::nullopt;
    return count - 1;
}

int DegreeTable::fractional_degree(Index j, Component c) const
{
    return steps_.at(static_cast<std::size_t>(j)).finite_count[slot(c)];
}

int DegreeTable::infinite_multiplicity(Index j, Component c) const
{
    return steps_.at(static_cast<std::size_t>(j)).infinite_count[slot(c)];
}

std::vector<cplx> DegreeTable::finite_poles(Index j, Component c) const
{
    std::vector<cplx> poles;
    for (Index i = 0; i <= j; ++i) {
        const auto& s = steps_.at(static_cast<std::size_t>(i));
        if (s.component == c && !s.pole.is_infinite()) poles.push_back(s.pole.value());
    }
    return poles;
}

ProjectivePole encoded_pole(const MatrixXc& h, const MatrixXc& k, Index j)
{
    if (j < 2 || j >= h.rows()) throw Error(ErrorCode::IndexOutOfRange, "encoded poles start at the third function");
    return {h(j, j - 2), k(j, j - 2)};
}

MatrixXc InnerProductTable::weighted() const
{
    MatrixXc q(comp[0].rows(), comp[0].cols());
    for (Index i = 0; i < q.rows(); ++i) {
        q.row(i).setZero();
        // Zero weights mask the component, which may be infinite at the node.
        for (int c = 0; c < 2; ++c)
            if (weights(i, c) != cplx(0.0)) q.row(i) += std::conj(weights(i, c)) * comp[c].row(i);
    }
    return q;
}

MatrixXc InnerProductTable::gram() const
{
    const MatrixXc e = weighted();
    // <phi_i, phi_j> = sum_k conj(E_kj) E_ki
    return (e.adjoint() * e).transpose();
}

}  // namespace ratvec
