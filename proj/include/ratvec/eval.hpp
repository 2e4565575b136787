#pragma once

#include "ratvec/core.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace ratvec {

// ---------------------------------------------------------------------------
// Numeric recurrence
// ---------------------------------------------------------------------------

/// Values of the first `count` basis functions at z, as a 2 x count matrix.
/// Columns 0, 1 come from R^{-1}; column j + 2 from pencil column j.
/// Throws EvaluationAtPole when |z k_{j+2,j} - h_{j+2,j}| <= 4 eps (|z k| + |h|).
MatrixXc evaluate_prefix(const MatrixXc& h, const MatrixXc& k, const Matrix2c& r, Index count, cplx z);

/// evaluate_prefix up to one positive factor shared by all columns, chosen
/// to keep the values finite; only ratios between entries are meaningful.
MatrixXc evaluate_prefix_scaled(const MatrixXc& h, const MatrixXc& k, const Matrix2c& r, Index count, cplx z);

/// Phi(z) for all basis functions of a solution.
MatrixXc evaluate_basis(const PencilSolution& solution, cplx z);

/// Smallest relative recurrence divisor |z k - h| / (|z k| + |h|) met while
/// evaluating at z; small values flag ill-conditioned evaluation.
double recurrence_divisor_proxy(const PencilSolution& solution, cplx z);

/// comp[c](i, j) = phi_{j,c}(z_i) at every node.
InnerProductTable node_table(const PencilSolution& solution);

// ---------------------------------------------------------------------------
// Exact structure: polynomial plus simple fractions
// ---------------------------------------------------------------------------

struct SymbolicComponent {
    std::vector<cplx> poly;                    // ascending degree, no trailing zeros
    std::vector<std::pair<cplx, cplx>> fracs;  // (pole, residue), distinct poles, nonzero residues

    cplx evaluate(cplx z) const;
    /// this += a * other
    void add_scaled(cplx a, const SymbolicComponent& other);
    void scale(cplx a);
    void times_z();
    /// Divides by (z - p). Throws PoleCollision if p is too close to a pole
    /// already present.
    void divide_by_root(cplx p);
    /// Residue at `pole`, zero if absent.
    cplx residue(cplx pole) const;
    void canonicalize();
};

struct SymbolicRationalVector {
    std::array<SymbolicComponent, 2> comp;

    static SymbolicRationalVector constant(const Vector2c& v);
    Vector2c evaluate(cplx z) const;
};

struct LeadingTerm {
    std::optional<int> degree;
    cplx coeff{0.0};
};

/// Top polynomial term of one component; (none, 0) without polynomial part.
LeadingTerm leading_coefficient(const SymbolicRationalVector& v, Component c);

/// Symbolic form of the first `count` basis functions. A step whose
/// subdiagonal k entry is exactly zero divides by -h; otherwise it divides
/// by k (z - h/k).
std::vector<SymbolicRationalVector> symbolic_prefix(const MatrixXc& h, const MatrixXc& k, const Matrix2c& r,
                                                    Index count);
std::vector<SymbolicRationalVector> symbolic_basis(const PencilSolution& solution);

// ---------------------------------------------------------------------------
// Expansion at infinity
// ---------------------------------------------------------------------------

/// Coefficients of z^lo .. z^hi of a Laurent expansion at infinity. The top
/// coefficients stay exact under the recurrence as long as the window
/// reaches low enough: multiplication by z loses the bottom coefficient,
/// division by a linear factor gains one back.
class LaurentWindow {
public:
    LaurentWindow() = default;
    LaurentWindow(int lo, int hi);
    static LaurentWindow constant(int lo, int hi, cplx value);

    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(c_.size()) - 1; }
    /// Zero outside the window.
    cplx coeff(int degree) const;

    void scale(cplx a);
    /// this += a * x; windows must match.
    void add_scaled(cplx a, const LaurentWindow& x);
    LaurentWindow times_z() const;
    /// Quotient by (mu z - nu) with mu != 0.
    LaurentWindow divided_by_linear(cplx mu, cplx nu) const;

private:
    int lo_ = 0;
    std::vector<cplx> c_;
};

using LaurentVector = std::array<LaurentWindow, 2>;

/// Laurent windows of the first `count` basis functions.
std::vector<LaurentVector> laurent_prefix(const MatrixXc& h, const MatrixXc& k, const Matrix2c& r, Index count,
                                          int lo, int hi);

// ---------------------------------------------------------------------------
// Approximants
// ---------------------------------------------------------------------------

/// phi_{i,1}(z) / phi_{i,2}(z) for 0-based basis index i. When z equals a
/// finite prescribed pole exactly, the value is the limit
/// (z - z) phi_{i,1} / ((z - z) phi_{i,2}) taken from a local expansion.
/// Throws DivisionByZeroComponent when the denominator vanishes.
cplx evaluate_approximant(const PencilSolution& solution, Index i, cplx z);

/// Approximant values of the basis functions first..last-1 at z in one pass.
std::vector<cplx> evaluate_approximants(const PencilSolution& solution, Index first, Index last, cplx z);

}  // namespace ratvec
