#pragma once

#include "ratvec/core.hpp"
#include "ratvec/krylov.hpp"
#include "ratvec/metrics.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace ratvec {

enum class Algorithm { Updating, Krylov };

/// Seeded source of uniform doubles; the mapping from raw 64-bit draws to
/// [0, 1) is fixed so that outputs do not depend on the standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

private:
    std::mt19937_64 engine_;
};

/// Seed of one (size, run) instance derived from the sweep seed.
std::uint64_t instance_seed(std::uint64_t seed, Index n, int run);

struct ExperimentConfig {
    std::vector<Index> n_values;
    int runs = 5;
    std::uint64_t seed = 1;
    /// Close pair of nodes and dependent weights (second experiment); off
    /// when close_index == 0.
    Index close_index = 0;
    double theta = 1e-6;
    /// Krylov breakdown threshold used by the sweep. Zero lets the iteration
    /// continue through roundoff-level residuals in the last steps, so every
    /// size yields a full pencil.
    double krylov_breakdown_tol = 0.0;
};

ExperimentConfig exp1_config(Index n_min, Index n_max, Index n_step, int runs, std::uint64_t seed);
ExperimentConfig exp2_config(Index n_min, Index n_max, Index n_step, int runs, std::uint64_t seed,
                             Index close_index = 40, double theta = 1e-6);

/// Unit-circle nodes, poles on radius 3/2, random weights and labels.
ProblemSpec build_exp1(Index n, Rng& rng);
/// As build_exp1, then node close_index + 1 (1-based) is moved to angle
/// theta from node close_index and its weight row made a real multiple of
/// that node's row. Unchanged when n <= close_index.
ProblemSpec build_exp2(Index n, Rng& rng, Index close_index, double theta);

ProblemSpec build_instance(const ExperimentConfig& cfg, Index n, int run);
PencilSolution solve(const ProblemSpec& spec, Algorithm algorithm);
PencilSolution solve(const ProblemSpec& spec, Algorithm algorithm, const KrylovOptions& krylov);

/// Per n, the mean of each metric over the runs that solved; NaN where
/// none did.
std::vector<MetricsRow> run_experiment(const ExperimentConfig& cfg, Algorithm algorithm);

/// Space-separated table with the columns
/// Nvec err_orth_Q_up err_orth_phi_up err_orth_Q_kryl err_orth_phi_kryl
/// err_poles_up err_recc_up err_poles_kryl err_recc_kryl
void write_experiment_csv(std::ostream& out, const std::vector<MetricsRow>& updating,
                          const std::vector<MetricsRow>& krylov);

std::string format_number(double x);

// ---------------------------------------------------------------------------
// Square-root approximation on [0, 1]
// ---------------------------------------------------------------------------

struct SqrtConfig {
    int n1 = 4;
    double c = 2.0;
    double sigma = 2.0 * 1.4142135623730951 * 3.141592653589793;
    double surrogate_radius = 1e16;
    int oversampling = 20;
    int grid_points = 1000;

    int n2() const;
    int n() const { return n1 + n2() + 3; }
    int n3() const { return oversampling * n(); }
    int m() const { return 3 + n1 + n2() + n3(); }
};

ProblemSpec build_sqrt_problem(const SqrtConfig& cfg);

/// 1000 log-spaced points on [1e-10, 1] plus 0.
std::vector<double> validation_grid(const SqrtConfig& cfg);

enum class Selection { Rate, Min };

struct SqrtCurvePoint {
    Index index;  // 1-based basis index
    double max_error;
};

struct SqrtResult {
    int n = 0;
    Index index = 0;  // 1-based selected basis index
    double max_error = 0.0;
    double fzero = 0.0;
    std::vector<SqrtCurvePoint> curve;  // indices 2..N
};

/// Picks the approximant in [N - N2, N] whose error is closest to
/// exp(-pi sqrt(2N)) on a log scale (Rate) or smallest (Min).
SqrtResult select_approximant(const PencilSolution& solution, const SqrtConfig& cfg, Selection rule);

std::vector<SqrtResult> run_sqrt(const std::vector<int>& n1_list, Selection rule);

void write_sqrt_csv(std::ostream& out, const std::vector<SqrtResult>& rows);
void write_curves_csv(std::ostream& out, const std::vector<SqrtResult>& rows);

}  // namespace ratvec
