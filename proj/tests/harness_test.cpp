#include "ratvec/harness.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <string>

namespace {

using namespace ratvec;

int count_lines(const std::string& s)
{
    int n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

TEST(BuildExp1, FourNodesOnTheUnitCircle)
{
    Rng rng(1);
    const ProblemSpec s = build_exp1(4, rng);
    const cplx expect[4] = {1.0, cplx(0.0, 1.0), -1.0, cplx(0.0, -1.0)};
    for (Index i = 0; i < 4; ++i) EXPECT_LE(std::abs(s.nodes(i) - expect[i]), 1e-15);
    EXPECT_TRUE(s.poles[0].is_infinite());
    EXPECT_TRUE(s.poles[1].is_infinite());
    EXPECT_EQ(s.index[0], Component::First);
    EXPECT_EQ(s.index[1], Component::Second);
    for (std::size_t j = 2; j < 4; ++j) {
        ASSERT_FALSE(s.poles[j].is_infinite());
        EXPECT_LE(std::abs(s.poles[j].value() - 1.5 * s.nodes(static_cast<Index>(j))), 1e-15);
    }
}

TEST(BuildExp1, WeightsLieInTheSquare)
{
    Rng rng(2);
    const ProblemSpec s = build_exp1(60, rng);
    for (Index i = 0; i < 60; ++i)
        for (int c = 0; c < 2; ++c) {
            EXPECT_GE(s.weights(i, c).real(), 0.5);
            EXPECT_LT(s.weights(i, c).real(), 1.5);
            EXPECT_GE(s.weights(i, c).imag(), 0.5);
            EXPECT_LT(s.weights(i, c).imag(), 1.5);
        }
    EXPECT_NO_THROW(validate(s));
}

TEST(BuildExp1, BothLabelsOccur)
{
    Rng rng(3);
    const ProblemSpec s = build_exp1(100, rng);
    int first = 0;
    for (std::size_t j = 2; j < 100; ++j) first += s.index[j] == Component::First;
    EXPECT_GT(first, 20);
    EXPECT_LT(first, 78);
}

TEST(BuildExp1, TooFewNodesAreRejected)
{
    Rng rng(4);
    try {
        build_exp1(2, rng);
        FAIL() << "two nodes accepted";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
    }
}

TEST(BuildExp2, ClosePairWithDependentWeights)
{
    Rng rng(5);
    const ProblemSpec s = build_exp2(45, rng, 40, 1e-6);
    const cplx ratio = s.nodes(40) / s.nodes(39);
    EXPECT_NEAR(std::arg(ratio), 1e-6, 1e-15);
    EXPECT_NEAR(std::abs(ratio), 1.0, 1e-15);
    const cplx alpha = s.weights(40, 0) / s.weights(39, 0);
    EXPECT_EQ(alpha.imag(), 0.0);
    EXPECT_GE(alpha.real(), 0.5 - 1e-15);
    EXPECT_LE(alpha.real(), 1.5 + 1e-15);
    EXPECT_LE(std::abs(s.weights(39, 0) * s.weights(40, 1) - s.weights(39, 1) * s.weights(40, 0)), 1e-15);
    EXPECT_NO_THROW(validate(s));
}

TEST(BuildExp2, SmallSizesAreUnchanged)
{
    Rng a(6), b(6);
    const ProblemSpec s = build_exp2(40, a, 40, 1e-6);
    const ProblemSpec t = build_exp1(40, b);
    EXPECT_EQ(s.nodes, t.nodes);
    EXPECT_EQ(s.weights, t.weights);
}

TEST(Instances, SeedsDifferAcrossSizesAndRuns)
{
    std::set<std::uint64_t> seen;
    for (Index n = 3; n < 40; ++n)
        for (int run = 0; run < 5; ++run) seen.insert(instance_seed(1, n, run));
    EXPECT_EQ(seen.size(), 37u * 5u);
    EXPECT_NE(instance_seed(1, 10, 0), instance_seed(2, 10, 0));
}

TEST(Instances, SameConfigurationGivesTheSameSpec)
{
    const ExperimentConfig cfg = exp1_config(10, 20, 5, 2, 9);
    const ProblemSpec a = build_instance(cfg, 15, 1);
    const ProblemSpec b = build_instance(cfg, 15, 1);
    EXPECT_EQ(a.nodes, b.nodes);
    EXPECT_EQ(a.weights, b.weights);
    EXPECT_EQ(a.index, b.index);
}

TEST(Config, GridAndDefaults)
{
    const ExperimentConfig cfg = exp2_config(35, 45, 5, 3, 2);
    EXPECT_EQ(cfg.n_values, (std::vector<Index>{35, 40, 45}));
    EXPECT_EQ(cfg.close_index, 40);
    EXPECT_EQ(cfg.theta, 1e-6);
    EXPECT_THROW(exp1_config(10, 5, 1, 1, 1), Error);
    EXPECT_THROW(exp1_config(5, 10, 0, 1, 1), Error);
}

TEST(RunExperiment, OneRowPerSize)
{
    const ExperimentConfig cfg = exp1_config(5, 25, 10, 2, 3);
    for (Algorithm alg : {Algorithm::Updating, Algorithm::Krylov}) {
        const auto rows = run_experiment(cfg, alg);
        ASSERT_EQ(rows.size(), 3u);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            EXPECT_EQ(rows[i].n, cfg.n_values[i]);
            EXPECT_LE(rows[i].err_q, 1e-13);
            EXPECT_LE(rows[i].err_r, 1e-13);
            ASSERT_TRUE(rows[i].err_p.has_value());
            EXPECT_LE(*rows[i].err_p, 1e-13);
        }
    }
}

TEST(Csv, FormatNumber)
{
    EXPECT_EQ(format_number(1.0), "1.000000000000000e+00");
    EXPECT_EQ(format_number(-2.5e-12), "-2.500000000000000e-12");
    EXPECT_EQ(format_number(std::nan("")), "nan");
    EXPECT_EQ(format_number(INFINITY), "inf");
}

TEST(Csv, ExperimentTableLayout)
{
    const ExperimentConfig cfg = exp1_config(5, 15, 5, 1, 4);
    const auto up = run_experiment(cfg, Algorithm::Updating);
    const auto kr = run_experiment(cfg, Algorithm::Krylov);
    std::ostringstream a, b;
    write_experiment_csv(a, up, kr);
    write_experiment_csv(b, run_experiment(cfg, Algorithm::Updating), run_experiment(cfg, Algorithm::Krylov));
    EXPECT_EQ(a.str(), b.str());
    EXPECT_EQ(count_lines(a.str()), 4);
    EXPECT_EQ(a.str().rfind("Nvec err_orth_Q_up err_orth_phi_up err_orth_Q_kryl err_orth_phi_kryl err_poles_up "
                            "err_recc_up err_poles_kryl err_recc_kryl\n",
                            0),
              0u);
    std::istringstream rows(a.str());
    std::string line;
    std::getline(rows, line);
    while (std::getline(rows, line)) {
        std::istringstream fields(line);
        int count = 0;
        for (std::string f; fields >> f;) ++count;
        EXPECT_EQ(count, 9);
    }
    std::ostringstream c;
    EXPECT_THROW(write_experiment_csv(c, up, {}), Error);
}

TEST(SqrtConfig, Sizes)
{
    SqrtConfig cfg;
    cfg.n1 = 25;
    EXPECT_EQ(cfg.n2(), 10);
    EXPECT_EQ(cfg.n(), 38);
    EXPECT_EQ(cfg.n3(), 760);
    EXPECT_EQ(cfg.m(), 3 + 25 + 10 + 760);
    cfg.n1 = 4;
    EXPECT_EQ(cfg.n2(), 4);
    EXPECT_EQ(cfg.n(), 11);
}

TEST(SqrtProblem, PolesNodesAndWeights)
{
    SqrtConfig cfg;
    cfg.n1 = 9;
    const ProblemSpec s = build_sqrt_problem(cfg);
    ASSERT_EQ(s.size(), cfg.m());
    ASSERT_EQ(static_cast<Index>(s.poles.size()), cfg.m());
    EXPECT_EQ(s.poles[2].value(), cplx(0.0));
    EXPECT_EQ(s.index[2], Component::Second);
    // The last tapered pole is -c.
    EXPECT_LE(std::abs(s.poles[static_cast<std::size_t>(2 + cfg.n1)].value() + 2.0), 1e-15);
    for (int j = 3; j < 3 + cfg.n1; ++j) {
        const cplx p = s.poles[static_cast<std::size_t>(j)].value();
        EXPECT_EQ(p.imag(), 0.0);
        EXPECT_LT(p.real(), 0.0);
        EXPECT_EQ(s.index[static_cast<std::size_t>(j)], Component::First);
    }
    std::set<std::pair<double, double>> surrogates;
    int first = 0;
    for (std::size_t j = static_cast<std::size_t>(3 + cfg.n1); j < s.poles.size(); ++j) {
        const cplx p = s.poles[j].value();
        surrogates.insert({p.real(), p.imag()});
        EXPECT_GE(std::abs(p - 0.5), 0.99e16);
        first += s.index[j] == Component::First;
    }
    EXPECT_EQ(surrogates.size(), static_cast<std::size_t>(cfg.n2() + cfg.n3()));
    EXPECT_EQ(first, cfg.n2());
    EXPECT_EQ(s.nodes(s.size() - 1), cplx(0.0));
    for (Index i = 0; i < s.size(); ++i) {
        EXPECT_EQ(s.weights(i, 0), cplx(1.0));
        EXPECT_EQ(s.weights(i, 1), cplx(-std::sqrt(s.nodes(i).real())));
        EXPECT_GE(s.nodes(i).real(), 0.0);
        EXPECT_LE(s.nodes(i).real(), 1.0 + 1e-15);
    }
    EXPECT_NO_THROW(validate(s));
}

TEST(SqrtProblem, ValidationGrid)
{
    const auto t = validation_grid(SqrtConfig{});
    ASSERT_EQ(t.size(), 1001u);
    EXPECT_NEAR(t.front(), 1e-10, 1e-24);
    EXPECT_NEAR(t[999], 1.0, 1e-15);
    EXPECT_EQ(t.back(), 0.0);
}

TEST(SqrtSelection, IndexLiesInTheWindow)
{
    SqrtConfig cfg;
    cfg.n1 = 4;
    const PencilSolution sol = solve(build_sqrt_problem(cfg), Algorithm::Updating);
    const SqrtResult rate = select_approximant(sol, cfg, Selection::Rate);
    EXPECT_EQ(rate.n, cfg.n());
    EXPECT_GE(rate.index, cfg.n() - cfg.n2());
    EXPECT_LE(rate.index, cfg.n());
    ASSERT_EQ(static_cast<int>(rate.curve.size()), cfg.n() - 1);
    EXPECT_EQ(rate.curve.front().index, 2);
    EXPECT_EQ(rate.curve.back().index, cfg.n());
    EXPECT_EQ(rate.max_error, rate.curve[static_cast<std::size_t>(rate.index - 2)].max_error);

    const SqrtResult min = select_approximant(sol, cfg, Selection::Min);
    for (Index i = cfg.n() - cfg.n2(); i <= cfg.n(); ++i)
        EXPECT_LE(min.max_error, min.curve[static_cast<std::size_t>(i - 2)].max_error);
    EXPECT_LE(rate.fzero, 1e-12);
}

TEST(SqrtSelection, TablesAreDeterministic)
{
    const auto a = run_sqrt({4}, Selection::Rate);
    const auto b = run_sqrt({4}, Selection::Rate);
    std::ostringstream x, y, u, v;
    write_sqrt_csv(x, a);
    write_sqrt_csv(y, b);
    write_curves_csv(u, a);
    write_curves_csv(v, b);
    EXPECT_EQ(x.str(), y.str());
    EXPECT_EQ(u.str(), v.str());
    EXPECT_EQ(x.str().rfind("N Maxerr fzero\n", 0), 0u);
    EXPECT_EQ(count_lines(x.str()), 2);
    EXPECT_EQ(count_lines(u.str()), 1 + a.front().n - 1);
}

}  // namespace
