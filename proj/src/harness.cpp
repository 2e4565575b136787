#include "ratvec/harness.hpp"

#include "ratvec/eval.hpp"
#include "ratvec/krylov.hpp"
#include "ratvec/updating.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace ratvec {

namespace {

constexpr double kPi = 3.141592653589793;

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::vector<Index> grid(Index lo, Index hi, Index step)
{
    if (step <= 0 || lo > hi) throw Error(ErrorCode::InvalidInput, "empty size grid");
    std::vector<Index> out;
    for (Index n = lo; n <= hi; n += step) out.push_back(n);
    return out;
}

cplx unit(double angle) { return std::polar(1.0, angle); }

}  // namespace

std::uint64_t instance_seed(std::uint64_t seed, Index n, int run)
{
    return splitmix64(splitmix64(seed ^ static_cast<std::uint64_t>(n) << 20) + static_cast<std::uint64_t>(run));
}

ExperimentConfig exp1_config(Index n_min, Index n_max, Index n_step, int runs, std::uint64_t seed)
{
    ExperimentConfig cfg;
    cfg.n_values = grid(n_min, n_max, n_step);
    cfg.runs = runs;
    cfg.seed = seed;
    return cfg;
}

ExperimentConfig exp2_config(Index n_min, Index n_max, Index n_step, int runs, std::uint64_t seed,
                             Index close_index, double theta)
{
    ExperimentConfig cfg = exp1_config(n_min, n_max, n_step, runs, seed);
    cfg.close_index = close_index;
    cfg.theta = theta;
    return cfg;
}

ProblemSpec build_exp1(Index n, Rng& rng)
{
    if (n < 3) throw Error(ErrorCode::InvalidInput, "experiment sizes start at 3");
    ProblemSpec s;
    s.nodes.resize(n);
    s.weights.resize(n, 2);
    for (Index j = 0; j < n; ++j) {
        const double angle = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
        s.nodes(j) = unit(angle);
        for (int c = 0; c < 2; ++c) {
            const double re = rng.uniform(0.5, 1.5);
            const double im = rng.uniform(0.5, 1.5);
            s.weights(j, c) = cplx(re, im);
        }
        if (j < 2) {
            s.poles.push_back(ProjectivePole::infinity());
            s.index.push_back(j == 0 ? Component::First : Component::Second);
        } else {
            s.poles.push_back(ProjectivePole::finite(1.5 * unit(angle)));
            s.index.push_back(rng.uniform() < 0.5 ? Component::First : Component::Second);
        }
    }
    return s;
}

ProblemSpec build_exp2(Index n, Rng& rng, Index close_index, double theta)
{
    ProblemSpec s = build_exp1(n, rng);
    if (close_index < 1 || n <= close_index) return s;
    const double alpha = rng.uniform(0.5, 1.5);
    const Index a = close_index - 1;
    s.nodes(a + 1) = s.nodes(a) * unit(theta);
    s.weights.row(a + 1) = alpha * s.weights.row(a);
    return s;
}

ProblemSpec build_instance(const ExperimentConfig& cfg, Index n, int run)
{
    Rng rng(instance_seed(cfg.seed, n, run));
    if (cfg.close_index > 0) return build_exp2(n, rng, cfg.close_index, cfg.theta);
    return build_exp1(n, rng);
}

PencilSolution solve(const ProblemSpec& spec, Algorithm algorithm) { return solve(spec, algorithm, KrylovOptions{}); }

PencilSolution solve(const ProblemSpec& spec, Algorithm algorithm, const KrylovOptions& krylov)
{
    const ValidatedProblemSpec v = validate(spec);
    return algorithm == Algorithm::Updating ? solve_updating(v) : solve_krylov(v, krylov);
}

std::vector<MetricsRow> run_experiment(const ExperimentConfig& cfg, Algorithm algorithm)
{
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    KrylovOptions krylov;
    krylov.breakdown_tol = cfg.krylov_breakdown_tol;
    std::vector<MetricsRow> rows;
    for (Index n : cfg.n_values) {
        MetricsRow sum{n, 0.0, 0.0, 0.0, 0.0};
        int solved = 0;
        int with_poles = 0;
        for (int run = 0; run < cfg.runs; ++run) {
            try {
                const MetricsRow m = compute_metrics(solve(build_instance(cfg, n, run), algorithm, krylov));
                sum.err_q += m.err_q;
                sum.err_phi += m.err_phi;
                sum.err_r += m.err_r;
                if (m.err_p) {
                    *sum.err_p += *m.err_p;
                    ++with_poles;
                }
                ++solved;
            } catch (const Error&) {
                // A failed instance is left out of the mean.
            }
        }
        MetricsRow mean{n, nan, nan, std::nullopt, nan};
        if (solved > 0) {
            mean.err_q = sum.err_q / solved;
            mean.err_phi = sum.err_phi / solved;
            mean.err_r = sum.err_r / solved;
        }
        if (with_poles > 0) mean.err_p = *sum.err_p / with_poles;
        rows.push_back(mean);
    }
    return rows;
}

std::string format_number(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15e", x);
    return buf;
}

void write_experiment_csv(std::ostream& out, const std::vector<MetricsRow>& up, const std::vector<MetricsRow>& kr)
{
    if (up.size() != kr.size()) throw Error(ErrorCode::LengthMismatch, "algorithm tables differ in length");
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    out << "Nvec err_orth_Q_up err_orth_phi_up err_orth_Q_kryl err_orth_phi_kryl err_poles_up err_recc_up "
           "err_poles_kryl err_recc_kryl\n";
    for (std::size_t i = 0; i < up.size(); ++i) {
        out << up[i].n << ' ' << format_number(up[i].err_q) << ' ' << format_number(up[i].err_phi) << ' '
            << format_number(kr[i].err_q) << ' ' << format_number(kr[i].err_phi) << ' '
            << format_number(up[i].err_p.value_or(nan)) << ' ' << format_number(up[i].err_r) << ' '
            << format_number(kr[i].err_p.value_or(nan)) << ' ' << format_number(kr[i].err_r) << '\n';
    }
}

// ---------------------------------------------------------------------------

int SqrtConfig::n2() const { return static_cast<int>(std::ceil(2.0 * std::sqrt(static_cast<double>(n1)))); }

ProblemSpec build_sqrt_problem(const SqrtConfig& cfg)
{
    if (cfg.n1 < 1) throw Error(ErrorCode::InvalidInput, "at least one tapered pole is required");
    const int m = cfg.m();
    ProblemSpec s;
    s.nodes.resize(m);
    s.weights.resize(m, 2);
    // logspace(-10, 0, m - 1), then 0. The node at 0 arrives after the pole
    // at 0 is placed; a node sitting on a pole at placement time leaves the
    // component of that pole undetermined.
    for (int i = 0; i < m - 1; ++i) {
        const double e = -10.0 + 10.0 * static_cast<double>(i) / static_cast<double>(m - 2);
        s.nodes(i) = std::pow(10.0, e);
    }
    s.nodes(m - 1) = 0.0;
    for (int i = 0; i < m; ++i) {
        s.weights(i, 0) = 1.0;
        s.weights(i, 1) = -std::sqrt(s.nodes(i).real());
    }

    s.poles = {ProjectivePole::infinity(), ProjectivePole::infinity(), ProjectivePole::finite(0.0)};
    s.index = {Component::First, Component::Second, Component::Second};
    const double root = std::sqrt(static_cast<double>(cfg.n1));
    for (int j = 1; j <= cfg.n1; ++j) {
        s.poles.push_back(ProjectivePole::finite(-cfg.c * std::exp(-cfg.sigma * (root - std::sqrt(double(j))))));
        s.index.push_back(Component::First);
    }
    const int surrogates = cfg.n2() + cfg.n3();
    for (int k = 0; k < surrogates; ++k) {
        const cplx p = cfg.surrogate_radius * unit(2.0 * kPi * k / surrogates) + 0.5;
        s.poles.push_back(ProjectivePole::finite(p));
        s.index.push_back(k < cfg.n2() ? Component::First : Component::Second);
    }
    return s;
}

std::vector<double> validation_grid(const SqrtConfig& cfg)
{
    std::vector<double> t;
    t.reserve(static_cast<std::size_t>(cfg.grid_points) + 1);
    for (int i = 0; i < cfg.grid_points; ++i)
        t.push_back(std::pow(10.0, -10.0 + 10.0 * i / static_cast<double>(cfg.grid_points - 1)));
    t.push_back(0.0);
    return t;
}

SqrtResult select_approximant(const PencilSolution& solution, const SqrtConfig& cfg, Selection rule)
{
    const Index n = cfg.n();
    if (solution.size() < n) throw Error(ErrorCode::IndexOutOfRange, "solution shorter than N");
    const Index first = 1;  // 0-based index of the first function with a nonzero second component
    std::vector<double> err(static_cast<std::size_t>(n - first), 0.0);
    for (double t : validation_grid(cfg)) {
        const auto r = evaluate_approximants(solution, first, n, cplx(t));
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double e = std::abs(std::sqrt(t) - r[i]);
            err[i] = std::isnan(e) ? std::numeric_limits<double>::infinity() : std::max(err[i], e);
        }
    }

    SqrtResult out;
    out.n = static_cast<int>(n);
    for (Index i = first; i < n; ++i) out.curve.push_back({i + 1, err[static_cast<std::size_t>(i - first)]});

    const double target = std::log10(std::exp(-kPi * std::sqrt(2.0 * static_cast<double>(n))));
    double best = std::numeric_limits<double>::infinity();
    for (Index idx = n - cfg.n2(); idx <= n; ++idx) {
        const double e = err[static_cast<std::size_t>(idx - 1 - first)];
        const double score = rule == Selection::Rate ? std::abs(std::log10(e) - target) : e;
        if (score < best) {
            best = score;
            out.index = idx;
            out.max_error = e;
        }
    }
    if (out.index == 0) throw Error(ErrorCode::InternalConsistency, "no approximant could be selected");
    out.fzero = std::abs(evaluate_approximant(solution, out.index - 1, 0.0));
    return out;
}

std::vector<SqrtResult> run_sqrt(const std::vector<int>& n1_list, Selection rule)
{
    std::vector<SqrtResult> out;
    for (int n1 : n1_list) {
        SqrtConfig cfg;
        cfg.n1 = n1;
        const PencilSolution sol = solve(build_sqrt_problem(cfg), Algorithm::Updating);
        out.push_back(select_approximant(sol, cfg, rule));
    }
    return out;
}

void write_sqrt_csv(std::ostream& out, const std::vector<SqrtResult>& rows)
{
    out << "N Maxerr fzero\n";
    for (const auto& r : rows) out << r.n << ' ' << format_number(r.max_error) << ' ' << format_number(r.fzero) << '\n';
}

void write_curves_csv(std::ostream& out, const std::vector<SqrtResult>& rows)
{
    out << "N i Maxerr\n";
    for (const auto& r : rows)
        for (const auto& p : r.curve) out << r.n << ' ' << p.index << ' ' << format_number(p.max_error) << '\n';
}

}  // namespace ratvec
