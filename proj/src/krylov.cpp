#include "ratvec/krylov.hpp"

#include <algorithm>
#include <cmath>

namespace ratvec {

namespace {

LaurentVector empty_vector(const KrylovState& s)
{
    return {LaurentWindow(s.shadow_lo, s.shadow_hi), LaurentWindow(s.shadow_lo, s.shadow_hi)};
}

LaurentVector combine(const KrylovState& s, const VectorXc& coef)
{
    LaurentVector out = empty_vector(s);
    for (Index i = 0; i < coef.size(); ++i) {
        if (coef(i) == cplx(0.0)) continue;
        for (int c = 0; c < 2; ++c) out[c].add_scaled(coef(i), s.shadows[i][c]);
    }
    return out;
}

cplx lead(const KrylovState& s, Index vec, Component c)
{
    return s.shadows[vec][slot(c)].coeff(s.top_degree[slot(c)]);
}

// psi = sum rho_i q_i whose product with z raises the degree of component c
// only.
VectorXc infinite_rho(const KrylovState& s, Component c)
{
    const Component off = other(c);
    const Index ell = s.top_vector[slot(c)];
    const Index m = s.top_vector[slot(off)];
    VectorXc rho = VectorXc::Zero(s.size());
    rho(ell) = 1.0;
    if (m > ell) return rho;

    cplx alpha;
    if (!s.track_shadows) {
        // Only the two constant start functions carry degrees.
        if (ell != 1 || m != 0) throw Error(ErrorCode::ShadowUnavailable, "no shadows for a raised degree");
        alpha = -s.r(0, 1) / s.r(1, 1);
    } else {
        const cplx denom = lead(s, m, off);
        if (denom == cplx(0.0)) throw Error(ErrorCode::ShadowUnavailable, "leading coefficient lost");
        alpha = lead(s, ell, off) / denom;
    }
    rho(m) = -alpha;
    if (s.track_shadows) {
        const LaurentVector psi = combine(s, rho);
        if (psi[slot(c)].coeff(s.top_degree[slot(c)]) == cplx(0.0))
            throw Error(ErrorCode::DegenerateCombination, "combination lost its leading term");
    }
    return rho;
}

}  // namespace

KrylovState krylov_init(const ValidatedProblemSpec& validated)
{
    const ProblemSpec& spec = validated.spec();
    KrylovState s;
    s.spec = spec;
    s.omega = weight_operator(spec);
    const EconomicalQr qr = economical_qr(s.omega);
    s.r = qr.r;
    s.basis = qr.q;
    const Index n = spec.size();
    s.h = MatrixXc::Zero(n, n);
    s.k = MatrixXc::Zero(n, n);
    s.degrees.push(spec.poles[0], spec.index[0]);
    s.degrees.push(spec.poles[1], spec.index[1]);

    const int infinite = static_cast<int>(
        std::count_if(spec.poles.begin(), spec.poles.end(), [](const ProjectivePole& p) { return p.is_infinite(); }));
    s.track_shadows = infinite > 2;
    if (s.track_shadows) {
        s.shadow_lo = -(infinite + 2);
        s.shadow_hi = infinite + 1;
        const auto [phi1, phi2] = initial_basis(s.r);
        for (const Vector2c& phi : {phi1, phi2}) {
            s.shadows.push_back({LaurentWindow::constant(s.shadow_lo, s.shadow_hi, phi(0)),
                                 LaurentWindow::constant(s.shadow_lo, s.shadow_hi, phi(1))});
        }
    }
    return s;
}

Continuation continuation_vector(const KrylovState& s, const ProjectivePole& pole, Component c)
{
    const Index k = s.size();
    Continuation out;
    out.rho = VectorXc::Zero(k);
    out.eta = VectorXc::Zero(k);
    if (!pole.is_infinite()) {
        if (c == Component::First) {
            out.eta(0) = -1.0;
            out.vector = s.basis.col(0);
        } else {
            out.eta(0) = -s.r(0, 1) / s.r(1, 1);
            out.eta(1) = -1.0;
            out.vector = s.omega.col(1) / s.r(1, 1);
        }
        if (s.track_shadows) out.shadow = combine(s, -out.eta);
        return out;
    }
    out.rho = infinite_rho(s, c);
    out.vector = s.basis * out.rho;
    if (s.track_shadows) out.shadow = combine(s, out.rho);
    return out;
}

VectorXc expand(const KrylovState& s, const ProjectivePole& pole, const VectorXc& r)
{
    const VectorXc& z = s.spec.nodes;
    if (r.size() != z.size()) throw Error(ErrorCode::LengthMismatch, "continuation vector has the wrong length");
    if (pole.is_infinite()) return (z.array() * r.array() / (-pole.nu)).matrix();
    VectorXc out(z.size());
    for (Index i = 0; i < z.size(); ++i) {
        const cplx d = pole.mu * z(i) - pole.nu;
        if (d == cplx(0.0)) {
            if (r(i) != cplx(0.0)) throw Error(ErrorCode::PoleHitsNode, "pole coincides with node " + std::to_string(i + 1));
            out(i) = 0.0;
        } else {
            out(i) = r(i) / d;
        }
    }
    return out;
}

constexpr int kMaxPasses = 5;

Orthonormalized orthonormalize(const KrylovState& s, const VectorXc& qhat, const KrylovOptions& options)
{
    const Index k = s.size();
    const double scale = qhat.norm();
    Orthonormalized out;
    out.h = VectorXc::Zero(k + 1);
    VectorXc v = qhat;
    double before = scale;
    double norm = scale;
    // Two passes, then more while a pass still cancels most of the vector.
    for (int pass = 0; pass < kMaxPasses; ++pass) {
        const VectorXc proj = s.basis.adjoint() * v;
        v -= s.basis * proj;
        out.h.head(k) += proj;
        before = norm;
        norm = v.norm();
        if (pass >= 1 && norm > 0.5 * before) break;
    }
    if (norm <= options.breakdown_tol * scale || norm == 0.0)
        throw Error(ErrorCode::KrylovBreakdown, "expansion vector lies in the current space");
    out.h(k) = norm;
    out.q = v / norm;
    return out;
}

void krylov_step(KrylovState& s, const ProjectivePole& pole, Component c, const KrylovOptions& options)
{
    const Index k = s.size();
    if (k >= s.spec.size()) throw Error(ErrorCode::IndexOutOfRange, "the space already spans all nodes");
    const Continuation cont = continuation_vector(s, pole, c);
    const VectorXc qhat = expand(s, pole, cont.vector);
    const Orthonormalized o = orthonormalize(s, qhat, options);

    s.basis.conservativeResize(Eigen::NoChange, k + 1);
    s.basis.col(k) = o.q;
    const Index col = k - 2;
    s.k.col(col).head(k + 1) = pole.mu * o.h;
    s.h.col(col).head(k + 1) = pole.nu * o.h;
    s.k.col(col).head(k) -= cont.rho;
    s.h.col(col).head(k) -= cont.eta;

    if (s.track_shadows) {
        LaurentVector next = empty_vector(s);
        for (int cc = 0; cc < 2; ++cc) {
            next[cc] = pole.is_infinite() ? cont.shadow[cc].times_z() : cont.shadow[cc].divided_by_linear(pole.mu, pole.nu);
            if (pole.is_infinite()) next[cc].scale(1.0 / (-pole.nu));
            for (Index i = 0; i < k; ++i) next[cc].add_scaled(-o.h(i), s.shadows[i][cc]);
            next[cc].scale(1.0 / o.h(k));
        }
        s.shadows.push_back(std::move(next));
    }
    if (pole.is_infinite()) {
        ++s.top_degree[slot(c)];
        s.top_vector[slot(c)] = k;
    }
    s.degrees.push(pole, c);
}

std::pair<MatrixXc, MatrixXc> assemble_pencil(const KrylovState& s)
{
    const Index n = s.spec.size();
    if (s.size() != n) throw Error(ErrorCode::IncompleteIteration, "basis has " + std::to_string(s.size()) + " of "
                                                                        + std::to_string(n) + " vectors");
    MatrixXc h = s.h;
    MatrixXc k = s.k;
    // Two virtual steps with poles at infinity; the residual vanishes and the
    // subdiagonal entries are dropped.
    const ProjectivePole inf = ProjectivePole::infinity();
    for (int t = 0; t < 2; ++t) {
        const Component c = t == 0 ? Component::First : Component::Second;
        const Continuation cont = continuation_vector(s, inf, c);
        VectorXc v = expand(s, inf, cont.vector);
        VectorXc proj = VectorXc::Zero(n);
        for (int pass = 0; pass < 2; ++pass) {
            const VectorXc p = s.basis.adjoint() * v;
            v -= s.basis * p;
            proj += p;
        }
        k.col(n - 2 + t) = -cont.rho;
        h.col(n - 2 + t) = inf.nu * proj;
    }
    return {h, k};
}

PencilSolution solve_krylov(const ValidatedProblemSpec& validated, const KrylovOptions& options)
{
    KrylovState s = krylov_init(validated);
    const ProblemSpec& spec = validated.spec();
    for (Index i = 2; i < spec.size(); ++i)
        krylov_step(s, spec.poles[static_cast<std::size_t>(i)], spec.index[static_cast<std::size_t>(i)], options);
    auto [h, k] = assemble_pencil(s);
    return {s.basis, std::move(h), std::move(k), s.r, spec, s.degrees};
}

}  // namespace ratvec
