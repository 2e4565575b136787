#include "ratvec/updating.hpp"

#include "ratvec/eval.hpp"
#include "ratvec/rotations.hpp"

#include <algorithm>
#include <cmath>

namespace ratvec {

namespace {

void append_prefix(ProblemSpec& spec, cplx z, const Vector2c& w, const ProjectivePole& pole, Component c)
{
    const Index n = spec.size();
    spec.nodes.conservativeResize(n + 1);
    spec.nodes(n) = z;
    spec.weights.conservativeResize(n + 1, Eigen::NoChange);
    spec.weights.row(n) = w.transpose();
    spec.poles.push_back(pole);
    spec.index.push_back(c);
}

MatrixXc grow(const MatrixXc& m, cplx corner)
{
    const Index n = m.rows();
    MatrixXc out = MatrixXc::Zero(n + 1, n + 1);
    out.topLeftCorner(n, n) = m;
    out(n, n) = corner;
    return out;
}

void apply_row_rotation(UpdatingState& s, const Rotation& g)
{
    apply_left(g, s.h);
    apply_left(g, s.k);
    apply_right(s.q, g.adjoint());
}

void apply_column_rotation(UpdatingState& s, const Rotation& g)
{
    apply_right(s.h, g);
    apply_right(s.k, g);
}

void snap_zero(MatrixXc& m, Index i, Index j, double tol)
{
    if (std::abs(m(i, j)) > tol)
        throw Error(ErrorCode::InternalConsistency, "entry (" + std::to_string(i + 1) + ", " + std::to_string(j + 1)
                                                        + ") should vanish but has modulus "
                                                        + std::to_string(std::abs(m(i, j))));
    m(i, j) = 0.0;
}

int max_infinite_multiplicity(const DegreeTable& degrees, Index j, Component extra)
{
    const int first = degrees.infinite_multiplicity(j, Component::First) + (extra == Component::First ? 1 : 0);
    const int second = degrees.infinite_multiplicity(j, Component::Second) + (extra == Component::Second ? 1 : 0);
    return std::max(first, second);
}

int infinite_count(const ProblemSpec& spec)
{
    return static_cast<int>(std::count_if(spec.poles.begin(), spec.poles.end(),
                                          [](const ProjectivePole& p) { return p.is_infinite(); }));
}

// Off-component values [phi~_{n-3}(p), phi~_{n-2}(p)] (0-based columns), with
// phi~_j = -sum_{i < n-1} (z k_ij - h_ij) phi_i.
class OffComponentValues {
public:
    OffComponentValues(UpdatingState& state, const ProjectivePole& pole, Component c, const UpdatingOptions& options)
        : state_(state), pole_(pole), off_(other(c)), c_(c), options_(options)
    {
    }

    std::array<cplx, 2> operator()(const MatrixXc& h, const MatrixXc& k) const
    {
        return pole_.is_infinite() ? at_infinity(h, k) : at_finite(h, k);
    }

private:
    std::array<cplx, 2> at_finite(const MatrixXc& h, const MatrixXc& k) const
    {
        const Index n = h.rows();
        const cplx p = pole_.value();
        const MatrixXc phi = evaluate_prefix_scaled(h, k, state_.r, n - 1, p);
        std::array<cplx, 2> out{};
        double scale = 0.0;
        for (int t = 0; t < 2; ++t) {
            const Index j = n - 3 + t;
            cplx acc(0.0);
            for (Index i = 0; i < n - 1; ++i) {
                const cplx term = (p * k(i, j) - h(i, j)) * phi(slot(off_), i);
                acc -= term;
                scale += std::abs(term);
            }
            out[t] = acc;
        }
        check(out, scale);
        return out;
    }

    std::array<cplx, 2> at_infinity(const MatrixXc& h, const MatrixXc& k) const
    {
        const Index n = h.rows();
        const Index last_fn = n - 2;
        const int degree = *state_.degrees.poly_degree(last_fn, off_);
        std::vector<cplx> lead(static_cast<std::size_t>(n - 1));

        if (max_infinite_multiplicity(state_.degrees, last_fn, c_) <= 2) {
            const int count = infinite_count(state_.spec);
            const auto windows = laurent_prefix(h, k, state_.r, n - 1, -(count + 2), count + 1);
            for (Index i = 0; i < n - 1; ++i) lead[i] = windows[i][slot(off_)].coeff(degree);
        } else if (options_.infinite_policy == InfinitePolePolicy::kExactSymbolic) {
            const auto basis = symbolic_prefix(h, k, state_.r, n - 1);
            for (Index i = 0; i < n - 1; ++i) {
                const auto& poly = basis[i].comp[slot(off_)].poly;
                lead[i] = degree < static_cast<int>(poly.size()) ? poly[degree] : cplx(0.0);
            }
            ++state_.diagnostics.symbolic_leading;
        } else {
            throw Error(ErrorCode::UnsupportedInfiniteMultiplicity,
                        "more than two infinite poles in one component");
        }

        std::array<cplx, 2> out{};
        double scale = 0.0;
        for (int t = 0; t < 2; ++t) {
            const Index j = n - 3 + t;
            cplx acc(0.0);
            for (Index i = 0; i < n - 1; ++i) {
                acc -= k(i, j) * lead[i];
                scale += std::abs(k(i, j) * lead[i]);
            }
            out[t] = acc;
        }
        check(out, scale);
        return out;
    }

    static void check(const std::array<cplx, 2>& v, double scale)
    {
        if (std::abs(v[0]) + std::abs(v[1]) <= 64.0 * kEps * scale)
            throw Error(ErrorCode::Breakdown, "off-component values vanish at the new pole");
    }

    UpdatingState& state_;
    ProjectivePole pole_;
    Component off_;
    Component c_;
    const UpdatingOptions& options_;
};

}  // namespace

UpdatingState init_single(cplx z1, const Vector2c& w1)
{
    if (w1.isZero(0.0)) throw Error(ErrorCode::ZeroWeightRow, "weight row is zero");
    UpdatingState s;
    s.q = MatrixXc::Ones(1, 1);
    s.h = MatrixXc::Constant(1, 1, z1);
    s.k = MatrixXc::Ones(1, 1);
    s.r.setZero();
    s.r.row(0) = w1.conjugate().transpose();
    s.spec.nodes = VectorXc::Constant(1, z1);
    s.spec.weights = w1.transpose();
    s.spec.poles = {ProjectivePole::infinity()};
    s.spec.index = {Component::First};
    s.degrees.push(ProjectivePole::infinity(), Component::First);
    return s;
}

UpdatingState init_base(cplx z1, cplx z2, const Vector2c& w1, const Vector2c& w2)
{
    NodeMatrix wc(2, 2);
    wc.row(0) = w1.conjugate().transpose();
    wc.row(1) = w2.conjugate().transpose();
    const EconomicalQr qr = economical_qr(wc);

    UpdatingState s;
    s.q = qr.q;
    s.r = qr.r;
    Eigen::Vector2cd z(z1, z2);
    s.k = qr.q.adjoint();
    s.h = s.k * z.asDiagonal();
    s.spec.nodes = z;
    s.spec.weights.resize(2, 2);
    s.spec.weights.row(0) = w1.transpose();
    s.spec.weights.row(1) = w2.transpose();
    s.spec.poles = {ProjectivePole::infinity(), ProjectivePole::infinity()};
    s.spec.index = {Component::First, Component::Second};
    s.degrees.push(ProjectivePole::infinity(), Component::First);
    s.degrees.push(ProjectivePole::infinity(), Component::Second);
    return s;
}

UpdatingState update_step(UpdatingState s, cplx z, const Vector2c& w, const ProjectivePole& pole, Component c,
                          const UpdatingOptions& options)
{
    const Index k = s.size();
    if (k < 2) throw Error(ErrorCode::InvalidInput, "updating starts from the two-node base case");
    if (w.isZero(0.0)) throw Error(ErrorCode::Breakdown, "zero weight row cannot extend the basis");
    if (max_infinite_multiplicity(s.degrees, k - 1, c) > 2 && pole.is_infinite()
        && options.infinite_policy == InfinitePolePolicy::kReject)
        throw Error(ErrorCode::UnsupportedInfiniteMultiplicity, "more than two infinite poles in one component");

    s.q = grow(s.q, 1.0);
    s.h = grow(s.h, z);
    s.k = grow(s.k, 1.0);

    // Eliminate the appended row conj(w)^T against R.
    Eigen::RowVector2cd t = w.conjugate().transpose();
    for (Index c_idx = 0; c_idx < 2; ++c_idx) {
        if (t(c_idx) == cplx(0.0)) continue;
        const Rotation g = givens_eliminate(s.r(c_idx, c_idx), t(c_idx)).rotation;
        const Eigen::RowVector2cd top = s.r.row(c_idx);
        s.r.row(c_idx) = std::conj(g.c) * top - std::conj(g.s) * t;
        t = g.s * top + g.c * t;
        t(c_idx) = 0.0;
        apply_row_rotation(s, g.at(c_idx, k));
    }
    s.r(1, 0) = 0.0;

    // Chase the filled last row back to the 2-Hessenberg pattern.
    for (Index j = 0; j + 2 < k; ++j) {
        Matrix2c a, b;
        a << s.h(j + 2, j), s.h(j + 2, k), s.h(k, j), s.h(k, k);
        b << s.k(j + 2, j), s.k(j + 2, k), s.k(k, j), s.k(k, k);
        const PencilTriangularization tri = triangularize_2x2_pencil(a, b);
        if (tri.used_fallback) ++s.diagnostics.fallback_swaps;
        apply_row_rotation(s, tri.left.at(j + 2, k));
        apply_column_rotation(s, tri.right.at(j, k));
        const double tol = 64.0 * kEps * std::max({a.norm(), b.norm(), s.h.col(j).norm(), s.k.col(j).norm()});
        snap_zero(s.h, k, j, tol);
        snap_zero(s.k, k, j, tol);
        if (s.spec.poles[static_cast<std::size_t>(j + 2)].is_infinite()) s.k(j + 2, j) = 0.0;
    }

    append_prefix(s.spec, z, w, pole, c);
    const OffComponentValues eval(s, pole, c, options);
    try {
        place_pole(s.h, s.k, pole, eval);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::DegenerateRotation) throw Error(ErrorCode::Breakdown, e.what());
        throw;
    }
    s.degrees.push(pole, c);
    return s;
}

PencilSolution solve_updating(const ValidatedProblemSpec& validated, const UpdatingOptions& options,
                              UpdatingDiagnostics* diagnostics)
{
    const ProblemSpec& spec = validated.spec();
    const Index n = spec.size();
    UpdatingState s = init_base(spec.nodes(0), spec.nodes(1), spec.weights.row(0).transpose(),
                                spec.weights.row(1).transpose());
    for (Index i = 2; i < n; ++i) {
        s = update_step(std::move(s), spec.nodes(i), spec.weights.row(i).transpose(),
                        spec.poles[static_cast<std::size_t>(i)], spec.index[static_cast<std::size_t>(i)], options);
    }
    if (diagnostics) *diagnostics = s.diagnostics;
    PencilSolution out = s.solution();
    out.spec = spec;
    return out;
}

}  // namespace ratvec
