#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ratvec {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;
using Matrix2c = Eigen::Matrix2cd;
using Vector2c = Eigen::Vector2cd;
/// n x 2 matrix whose i-th row is a 2-vector attached to node i.
using NodeMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, 2>;

inline constexpr double kEps = 2.220446049250313e-16;

enum class ErrorCode {
    LengthMismatch,
    NodeEqualsPole,
    ZeroWeightRow,
    RepeatedFinitePoleInComponent,
    BadPrefix,
    RankDeficientWeights,
    SingularR,
    ZeroVector,
    IndexOutOfRange,
    SingularPencil,
    OrderLost,
    DegenerateRotation,
    Breakdown,
    UnsupportedInfiniteMultiplicity,
    ShadowUnavailable,
    DegenerateCombination,
    PoleHitsNode,
    KrylovBreakdown,
    IncompleteIteration,
    EvaluationAtPole,
    PoleCollision,
    DivisionByZeroComponent,
    NoFinitePoles,
    InternalConsistency,
    InvalidInput,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Which entry of a rational function vector a pole is added to.
enum class Component : int { First = 0, Second = 1 };

constexpr int slot(Component c) { return static_cast<int>(c); }
constexpr Component other(Component c)
{
    return c == Component::First ? Component::Second : Component::First;
}
/// 1-based label used in files and on the command line.
constexpr int label(Component c) { return slot(c) + 1; }
Component component_from_label(int label);

/// A pole p = nu / mu on the Riemann sphere; mu == 0 encodes infinity.
struct ProjectivePole {
    cplx nu{-1.0, 0.0};
    cplx mu{0.0, 0.0};

    static ProjectivePole finite(cplx p) { return {p, cplx(1.0)}; }
    static ProjectivePole infinity() { return {cplx(-1.0), cplx(0.0)}; }

    bool is_infinite() const { return mu == cplx(0.0); }
    /// Only meaningful for finite poles.
    cplx value() const { return nu / mu; }
    /// Same point with (|nu|^2 + |mu|^2) = 1.
    ProjectivePole normalized() const;
};

/// Chordal distance between two points of the Riemann sphere given as pairs.
double chordal_distance(cplx nu1, cplx mu1, cplx nu2, cplx mu2);
inline double chordal_distance(const ProjectivePole& a, const ProjectivePole& b)
{
    return chordal_distance(a.nu, a.mu, b.nu, b.mu);
}

/// Nodes, weight rows, poles and component labels of one discrete inner
/// product problem. Row i of `weights` is w_i^T.
struct ProblemSpec {
    VectorXc nodes;
    NodeMatrix weights;
    std::vector<ProjectivePole> poles;
    std::vector<Component> index;

    Index size() const { return nodes.size(); }
};

/// A ProblemSpec that has passed `validate`. Only `validate` constructs it.
class ValidatedProblemSpec {
public:
    const ProblemSpec& spec() const { return spec_; }
    Index size() const { return spec_.size(); }

private:
    explicit ValidatedProblemSpec(ProblemSpec spec) : spec_(std::move(spec)) {}
    friend ValidatedProblemSpec validate(ProblemSpec spec);

    ProblemSpec spec_;
};

/// Checks the structural requirements on nodes, weights, poles and labels.
///
/// A node may coincide with a finite pole only if the weight entry for the
/// pole's component is exactly zero at that node: the inner product then
/// never sees the singular component there.
ValidatedProblemSpec validate(ProblemSpec spec);

/// Rows of conj(W), i.e. w_i^H. Columns of the orthonormal matrix Q are
/// Q_ij = w_i^H phi_j(z_i), so QR factorizations act on this matrix.
NodeMatrix weight_operator(const ProblemSpec& spec);

/// Sum_i psi(z_i)^H w_i w_i^H phi(z_i). Row i of phi/psi is the value at z_i.
cplx inner_product(const NodeMatrix& phi, const NodeMatrix& psi, const NodeMatrix& weights);

struct EconomicalQr {
    NodeMatrix q;  // n x 2, orthonormal columns
    Matrix2c r;    // upper triangular, real nonnegative diagonal
};

/// Thin QR of an n x 2 matrix by two-pass Gram-Schmidt.
/// Throws RankDeficientWeights when |r_22| <= 100 eps ||W||_F.
EconomicalQr economical_qr(const NodeMatrix& w);

/// Columns of R^{-1}: the first two orthonormal functions (constants).
std::pair<Vector2c, Vector2c> initial_basis(const Matrix2c& r);

/// Degree bookkeeping of the generated basis. Basis function j (0-based)
/// lives in the space spanned by the first j+1 poles; per component we
/// record the polynomial degree (absent if no pole at infinity reached that
/// component yet) and the finite poles it carries.
class DegreeTable {
public:
    DegreeTable() = default;

    /// Records the pole of basis function `size()`.
    void push(const ProjectivePole& pole, Component c);

    Index size() const { return static_cast<Index>(steps_.size()); }
    std::optional<int> poly_degree(Index j, Component c) const;
    /// Number of finite poles of phi_{j,c}.
    int fractional_degree(Index j, Component c) const;
    std::vector<cplx> finite_poles(Index j, Component c) const;
    /// Number of infinite poles assigned to component c among the first j+1.
    int infinite_multiplicity(Index j, Component c) const;

private:
    struct Step {
        ProjectivePole pole;
        Component component;
        std::array<int, 2> infinite_count;
        std::array<int, 2> finite_count;
    };
    std::vector<Step> steps_;
};

/// Output of either solver: Z Q K = Q H with (H, K) 2-Hessenberg.
struct PencilSolution {
    MatrixXc q;
    MatrixXc h;
    MatrixXc k;
    Matrix2c r;  // R of Q^H conj(W) = [R; 0]
    ProblemSpec spec;
    DegreeTable degrees;

    Index size() const { return q.cols(); }
};

/// Encoded pole of basis function j (0-based, j >= 2) as the pair
/// (h_{j,j-2} : k_{j,j-2}).
ProjectivePole encoded_pole(const MatrixXc& h, const MatrixXc& k, Index j);

/// Node evaluations of the basis: comp[c](i, j) = phi_{j,c}(z_i).
struct InnerProductTable {
    std::array<MatrixXc, 2> comp;
    NodeMatrix weights;

    /// Q_ij = w_i^H phi_j(z_i).
    MatrixXc weighted() const;
    /// Gram matrix M_ij = <phi_i, phi_j>.
    MatrixXc gram() const;
};

}  // namespace ratvec
