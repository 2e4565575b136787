#include "ratvec/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ratvec {

namespace {

void check_prefix(const MatrixXc& h, const MatrixXc& k, Index count)
{
    if (count < 0 || (count > 2 && (h.cols() < count - 2 || h.rows() < count || k.rows() < count
                                    || k.cols() < count - 2)))
        throw Error(ErrorCode::IndexOutOfRange, "pencil too small for " + std::to_string(count) + " functions");
}

Matrix2c r_inverse(const Matrix2c& r)
{
    const auto [phi1, phi2] = initial_basis(r);
    Matrix2c out;
    out.col(0) = phi1;
    out.col(1) = phi2;
    return out;
}

}  // namespace

MatrixXc evaluate_prefix(const MatrixXc& h, const MatrixXc& k, const Matrix2c& r, Index count, cplx z)
{
    check_prefix(h, k, count);
    MatrixXc phi = MatrixXc::Zero(2, count);
    const Matrix2c init = r_inverse(r);
    phi.leftCols(std::min<Index>(count, 2)) = init.leftCols(std::min<Index>(count, 2));
    for (Index j = 0; j + 2 < count; ++j) {
        const VectorXc coef = z * k.col(j).head(j + 2) - h.col(j).head(j + 2);
        const Vector2c num = phi.leftCols(j + 2) * coef;
        const cplx zk = z * k(j + 2, j);
        const cplx div = zk - h(j + 2, j);
        if (std::abs(div) <= 4.0 * kEps * (std::abs(zk) + std::abs(h(j + 2, j))))
            throw Error(ErrorCode::EvaluationAtPole, "z hits the pole of function " + std::to_string(j + 3));
        phi.col(j + 2) = -num / div;
    }
    return phi;
}

MatrixXc evaluate_prefix_scaled(const MatrixXc& h, const MatrixXc& k, const Matrix2c& r, Index count, cplx z)
{
    constexpr double kCeiling = 1e150;
    check_prefix(h, k, count);
    MatrixXc phi = MatrixXc::Zero(2, count);
    const Matrix2c init = r_inverse(r);
    phi.leftCols(std::min<Index>(count, 2)) = init.leftCols(std::min<Index>(count, 2));
    for (Index j = 0; j + 2 < count; ++j) {
        const VectorXc coef = z * k.col(j).head(j + 2) - h.col(j).head(j + 2);
        const Vector2c num = phi.leftCols(j + 2) * coef;
        const cplx zk = z * k(j + 2, j);
        const cplx div = zk - h(j + 2, j);
        if (std::abs(div) <= 4.0 * kEps * (std::abs(zk) + std::abs(h(j + 2, j))))
            throw Error(ErrorCode::EvaluationAtPole, "z hits the pole of function " + std::to_string(j + 3));
        phi.col(j + 2) = -num / div;
        const double top = phi.col(j + 2).cwiseAbs().maxCoeff();
        if (top > kCeiling) phi.leftCols(j + 3) *= 1.0 / top;
    }
    return phi;
}

MatrixXc evaluate_basis(const PencilSolution& solution, cplx z)
{
    return evaluate_prefix(solution.h, solution.k, solution.r, solution.size(), z);
}

double recurrence_divisor_proxy(const PencilSolution& solution, cplx z)
{
    double worst = 1.0;
    for (Index j = 0; j + 2 < solution.size(); ++j) {
        const cplx zk = z * solution.k(j + 2, j);
        const cplx hh = solution.h(j + 2, j);
        const double scale = std::abs(zk) + std::abs(hh);
        if (scale > 0.0) worst = std::min(worst, std::abs(zk - hh) / scale);
    }
    return worst;
}

// ---------------------------------------------------------------------------

cplx SymbolicComponent::evaluate(cplx z) const
{
    cplx acc(0.0);
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * z + *it;
    for (const auto& [pole, res] : fracs) acc += res / (z - pole);
    return acc;
}

void SymbolicComponent::add_scaled(cplx a, const SymbolicComponent& other)
{
    if (poly.size() < other.poly.size()) poly.resize(other.poly.size(), cplx(0.0));
    for (std::size_t d = 0; d < other.poly.size(); ++d) poly[d] += a * other.poly[d];
    for (const auto& [pole, res] : other.fracs) {
        auto it = std::find_if(fracs.begin(), fracs.end(), [&](const auto& f) { return f.first == pole; });
        if (it == fracs.end())
            fracs.emplace_back(pole, a * res);
        else
            it->second += a * res;
    }
    canonicalize();
}

void SymbolicComponent::scale(cplx a)
{
    for (auto& c : poly) c *= a;
    for (auto& f : fracs) f.second *= a;
    canonicalize();
}

void SymbolicComponent::times_z()
{
    // z a / (z - q) = a + a q / (z - q)
    cplx constant(0.0);
    for (auto& [pole, res] : fracs) {
        constant += res;
        res *= pole;
    }
    if (!poly.empty()) poly.insert(poly.begin(), cplx(0.0));
    if (constant != cplx(0.0)) {
        if (poly.empty()) poly.push_back(cplx(0.0));
        poly[0] += constant;
    }
    canonicalize();
}

void SymbolicComponent::divide_by_root(cplx p)
{
    for (const auto& f : fracs) {
        const cplx q = f.first;
        if (std::abs(p - q) <= 1e-12 * std::max({std::abs(p), std::abs(q), 1.0}))
            throw Error(ErrorCode::PoleCollision, "division would create a double pole");
    }
    cplx new_res(0.0);
    // a / ((z - q)(z - p)) = a / (q - p) (1/(z - q) - 1/(z - p))
    for (auto& [q, a] : fracs) {
        const cplx c = a / (q - p);
        a = c;
        new_res -= c;
    }
    if (!poly.empty()) {
        std::vector<cplx> quot(poly.size() - 1, cplx(0.0));
        cplx carry(0.0);
        for (std::size_t d = poly.size(); d-- > 0;) {
            const cplx value = poly[d] + p * carry;
            if (d == 0)
                new_res += value;
            else
                quot[d - 1] = value;
            carry = value;
        }
        poly = std::move(quot);
    }
    fracs.emplace_back(p, new_res);
    canonicalize();
}

cplx SymbolicComponent::residue(cplx pole) const
{
    for (const auto& f : fracs)
        if (f.first == pole) return f.second;
    return cplx(0.0);
}

void SymbolicComponent::canonicalize()
{
    while (!poly.empty() && poly.back() == cplx(0.0)) poly.pop_back();
    fracs.erase(std::remove_if(fracs.begin(), fracs.end(), [](const auto& f) { return f.second == cplx(0.0); }),
                fracs.end());
}

SymbolicRationalVector SymbolicRationalVector::constant(const Vector2c& v)
{
    SymbolicRationalVector out;
    for (int c = 0; c < 2; ++c) {
        out.comp[c].poly = {v(c)};
        out.comp[c].canonicalize();
    }
    return out;
}

Vector2c SymbolicRationalVector::evaluate(cplx z) const
{
    return Vector2c(comp[0].evaluate(z), comp[1].evaluate(z));
}

LeadingTerm leading_coefficient(const SymbolicRationalVector& v, Component c)
{
    const auto& poly = v.comp[slot(c)].poly;
    if (poly.empty()) return {};
    return {static_cast<int>(poly.size()) - 1, poly.back()};
}

std::vector<SymbolicRationalVector> symbolic_prefix(const MatrixXc& h, const MatrixXc& k, const Matrix2c& r,
                                                    Index count)
{
    check_prefix(h, k, count);
    const Matrix2c init = r_inverse(r);
    std::vector<SymbolicRationalVector> out;
    for (Index j = 0; j < std::min<Index>(count, 2); ++j) out.push_back(SymbolicRationalVector::constant(init.col(j)));
    for (Index j = 0; j + 2 < count; ++j) {
        SymbolicRationalVector acc;
        for (Index i = 0; i <= j + 1; ++i) {
            for (int c = 0; c < 2; ++c) {
                if (k(i, j) != cplx(0.0)) {
                    SymbolicComponent zphi = out[i].comp[c];
                    zphi.times_z();
                    acc.comp[c].add_scaled(-k(i, j), zphi);
                }
                acc.comp[c].add_scaled(h(i, j), out[i].comp[c]);
            }
        }
        const cplx kd = k(j + 2, j);
        const cplx hd = h(j + 2, j);
        for (int c = 0; c < 2; ++c) {
            if (kd == cplx(0.0)) {
                acc.comp[c].scale(-1.0 / hd);
            } else {
                acc.comp[c].divide_by_root(hd / kd);
                acc.comp[c].scale(1.0 / kd);
            }
        }
        out.push_back(std::move(acc));
    }
    return out;
}

std::vector<SymbolicRationalVector> symbolic_basis(const PencilSolution& solution)
{
    return symbolic_prefix(solution.h, solution.k, solution.r, solution.size());
}

// ---------------------------------------------------------------------------

LaurentWindow::LaurentWindow(int lo, int hi) : lo_(lo), c_(static_cast<std::size_t>(hi - lo + 1), cplx(0.0))
{
    if (hi < lo) throw Error(ErrorCode::InvalidInput, "empty Laurent window");
}

LaurentWindow LaurentWindow::constant(int lo, int hi, cplx value)
{
    LaurentWindow w(lo, hi);
    if (lo > 0 || hi < 0) throw Error(ErrorCode::InvalidInput, "window must contain degree 0");
    w.c_[static_cast<std::size_t>(-lo)] = value;
    return w;
}

cplx LaurentWindow::coeff(int degree) const
{
    if (degree < lo_ || degree > hi()) return cplx(0.0);
    return c_[static_cast<std::size_t>(degree - lo_)];
}

void LaurentWindow::scale(cplx a)
{
    for (auto& c : c_) c *= a;
}

void LaurentWindow::add_scaled(cplx a, const LaurentWindow& x)
{
    if (x.lo_ != lo_ || x.c_.size() != c_.size()) throw Error(ErrorCode::InvalidInput, "Laurent windows differ");
    for (std::size_t d = 0; d < c_.size(); ++d) c_[d] += a * x.c_[d];
}

LaurentWindow LaurentWindow::times_z() const
{
    LaurentWindow out(lo_, hi());
    for (std::size_t d = 1; d < c_.size(); ++d) out.c_[d] = c_[d - 1];
    return out;
}

LaurentWindow LaurentWindow::divided_by_linear(cplx mu, cplx nu) const
{
    // a = (mu z - nu) b  =>  b_d = (a_{d+1} + nu b_{d+1}) / mu
    LaurentWindow out(lo_, hi());
    cplx above(0.0);
    for (int d = hi(); d >= lo_; --d) {
        const cplx b = (coeff(d + 1) + nu * above) / mu;
        out.c_[static_cast<std::size_t>(d - lo_)] = b;
        above = b;
    }
    return out;
}

std::vector<LaurentVector> laurent_prefix(const MatrixXc& h, const MatrixXc& k, const Matrix2c& r, Index count,
                                          int lo, int hi)
{
    check_prefix(h, k, count);
    const Matrix2c init = r_inverse(r);
    std::vector<LaurentVector> out;
    for (Index j = 0; j < std::min<Index>(count, 2); ++j)
        out.push_back({LaurentWindow::constant(lo, hi, init(0, j)), LaurentWindow::constant(lo, hi, init(1, j))});
    for (Index j = 0; j + 2 < count; ++j) {
        LaurentVector acc{LaurentWindow(lo, hi), LaurentWindow(lo, hi)};
        for (Index i = 0; i <= j + 1; ++i) {
            for (int c = 0; c < 2; ++c) {
                if (k(i, j) != cplx(0.0)) acc[c].add_scaled(-k(i, j), out[i][c].times_z());
                acc[c].add_scaled(h(i, j), out[i][c]);
            }
        }
        const cplx kd = k(j + 2, j);
        const cplx hd = h(j + 2, j);
        for (int c = 0; c < 2; ++c) {
            if (kd == cplx(0.0))
                acc[c].scale(-1.0 / hd);
            else
                acc[c] = acc[c].divided_by_linear(kd, hd);
        }
        out.push_back(std::move(acc));
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// Truncated Laurent series in t = z - z0, degrees -1 .. 2.
struct LocalSeries {
    static constexpr int kSize = 4;
    std::array<cplx, kSize> a{};

    cplx at(int degree) const { return (degree < -1 || degree > 2) ? cplx(0.0) : a[degree + 1]; }
};

using LocalVector = std::array<LocalSeries, 2>;

bool is_prescribed_pole(const ProblemSpec& spec, Index j, cplx z)
{
    if (j >= static_cast<Index>(spec.poles.size())) return false;
    const auto& p = spec.poles[static_cast<std::size_t>(j)];
    return !p.is_infinite() && p.value() == z;
}

bool touches_prescribed_pole(const ProblemSpec& spec, Index count, cplx z)
{
    for (Index j = 2; j < count; ++j)
        if (is_prescribed_pole(spec, j, z)) return true;
    return false;
}

std::vector<LocalVector> local_prefix(const PencilSolution& s, Index count, cplx z0)
{
    const Matrix2c init = r_inverse(s.r);
    std::vector<LocalVector> out(static_cast<std::size_t>(count));
    for (Index j = 0; j < std::min<Index>(count, 2); ++j)
        for (int c = 0; c < 2; ++c) out[j][c].a[1] = init(c, j);

    for (Index j = 0; j + 2 < count; ++j) {
        LocalVector num{};
        for (Index i = 0; i <= j + 1; ++i) {
            const cplx alpha = s.k(i, j) * z0 - s.h(i, j);
            const cplx beta = s.k(i, j);
            for (int c = 0; c < 2; ++c)
                for (int d = -1; d <= 2; ++d)
                    num[c].a[d + 1] += alpha * out[i][c].at(d) + beta * out[i][c].at(d - 1);
        }
        const cplx beta = s.k(j + 2, j);
        const cplx alpha = beta * z0 - s.h(j + 2, j);
        LocalVector& phi = out[j + 2];
        if (is_prescribed_pole(s.spec, j + 2, z0)) {
            if (beta == cplx(0.0)) throw Error(ErrorCode::EvaluationAtPole, "degenerate local step");
            for (int c = 0; c < 2; ++c) {
                if (num[c].at(-1) != cplx(0.0))
                    throw Error(ErrorCode::EvaluationAtPole, "double pole in the local expansion");
                for (int d = -1; d <= 2; ++d) phi[c].a[d + 1] = -num[c].at(d + 1) / beta;
            }
        } else {
            if (std::abs(alpha) <= 4.0 * kEps * (std::abs(beta * z0) + std::abs(s.h(j + 2, j))))
                throw Error(ErrorCode::EvaluationAtPole, "z hits the pole of function " + std::to_string(j + 3));
            for (int c = 0; c < 2; ++c) {
                cplx below(0.0);
                for (int d = -1; d <= 2; ++d) {
                    const cplx v = (num[c].at(d) - beta * below) / alpha;
                    phi[c].a[d + 1] = v;
                    below = v;
                }
                for (auto& v : phi[c].a) v = -v;
            }
        }
    }
    return out;
}

cplx local_ratio(const LocalVector& v)
{
    const cplx top1 = v[0].at(-1);
    const cplx top2 = v[1].at(-1);
    if (top1 != cplx(0.0) || top2 != cplx(0.0)) {
        if (top2 == cplx(0.0)) throw Error(ErrorCode::DivisionByZeroComponent, "second component is regular there");
        return top1 / top2;
    }
    if (v[1].at(0) == cplx(0.0)) throw Error(ErrorCode::DivisionByZeroComponent, "second component vanishes");
    return v[0].at(0) / v[1].at(0);
}

}  // namespace

InnerProductTable node_table(const PencilSolution& solution)
{
    const Index n = solution.spec.size();
    const Index m = solution.size();
    InnerProductTable table;
    table.comp[0] = MatrixXc::Zero(n, m);
    table.comp[1] = MatrixXc::Zero(n, m);
    table.weights = solution.spec.weights;
    for (Index i = 0; i < n; ++i) {
        const cplx z = solution.spec.nodes(i);
        if (touches_prescribed_pole(solution.spec, m, z)) {
            // A component with a pole here carries a zero weight at this node.
            const auto local = local_prefix(solution, m, z);
            for (Index j = 0; j < m; ++j)
                for (int c = 0; c < 2; ++c)
                    table.comp[c](i, j) = local[j][c].at(-1) == cplx(0.0) ? local[j][c].at(0)
                                                                           : cplx(std::numeric_limits<double>::infinity());
            continue;
        }
        const MatrixXc phi = evaluate_basis(solution, z);
        table.comp[0].row(i) = phi.row(0);
        table.comp[1].row(i) = phi.row(1);
    }
    return table;
}

std::vector<cplx> evaluate_approximants(const PencilSolution& solution, Index first, Index last, cplx z)
{
    if (first < 0 || last > solution.size() || first >= last)
        throw Error(ErrorCode::IndexOutOfRange, "basis index range out of bounds");
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(last - first));
    if (touches_prescribed_pole(solution.spec, last, z)) {
        const auto local = local_prefix(solution, last, z);
        for (Index i = first; i < last; ++i) out.push_back(local_ratio(local[i]));
        return out;
    }
    const MatrixXc phi = evaluate_prefix(solution.h, solution.k, solution.r, last, z);
    for (Index i = first; i < last; ++i) {
        if (phi(1, i) == cplx(0.0)) throw Error(ErrorCode::DivisionByZeroComponent, "second component vanishes");
        out.push_back(phi(0, i) / phi(1, i));
    }
    return out;
}

cplx evaluate_approximant(const PencilSolution& solution, Index i, cplx z)
{
    if (i < 0 || i >= solution.size()) throw Error(ErrorCode::IndexOutOfRange, "basis index out of range");
    return evaluate_approximants(solution, i, i + 1, z).front();
}

}  // namespace ratvec
