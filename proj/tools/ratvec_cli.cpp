#include "ratvec/harness.hpp"
#include "ratvec/metrics.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace {

using ratvec::cplx;
using ratvec::Error;
using ratvec::ErrorCode;
using json = nlohmann::json;

std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidInput, "cannot open " + path + " for writing");
    return out;
}

// A scalar is either a real number or a [re, im] pair.
cplx parse_scalar(const json& v)
{
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw Error(ErrorCode::InvalidInput, "expected a number or a [re, im] pair, got " + v.dump());
}

const json& field(const json& doc, const char* name)
{
    if (!doc.contains(name) || !doc[name].is_array())
        throw Error(ErrorCode::InvalidInput, std::string("problem file lacks the array '") + name + "'");
    return doc[name];
}

ratvec::ProblemSpec parse_problem(std::istream& in)
{
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidInput, std::string("malformed JSON: ") + e.what());
    }
    const json& nodes = field(doc, "nodes");
    const json& weights = field(doc, "weights");
    const json& poles = field(doc, "poles");
    const json& index = field(doc, "index");

    ratvec::ProblemSpec s;
    const auto n = static_cast<ratvec::Index>(nodes.size());
    s.nodes.resize(n);
    for (ratvec::Index i = 0; i < n; ++i) s.nodes(i) = parse_scalar(nodes[static_cast<std::size_t>(i)]);

    s.weights.resize(static_cast<ratvec::Index>(weights.size()), 2);
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!weights[i].is_array() || weights[i].size() != 2)
            throw Error(ErrorCode::InvalidInput, "each weight row needs two entries");
        for (std::size_t c = 0; c < 2; ++c)
            s.weights(static_cast<ratvec::Index>(i), static_cast<ratvec::Index>(c)) = parse_scalar(weights[i][c]);
    }
    for (const json& p : poles) {
        if (!p.is_array() || p.size() != 2) throw Error(ErrorCode::InvalidInput, "each pole is a (nu, mu) pair");
        s.poles.push_back({parse_scalar(p[0]), parse_scalar(p[1])});
    }
    for (const json& c : index) {
        if (!c.is_number_integer()) throw Error(ErrorCode::InvalidInput, "index entries are 1 or 2");
        s.index.push_back(ratvec::component_from_label(c.get<int>()));
    }
    return s;
}

void write_solve_metrics(std::ostream& out, const ratvec::PencilSolution& sol)
{
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    double phi = nan;
    try {
        phi = ratvec::err_phi(sol);
    } catch (const Error&) {
        // The basis cannot be evaluated at every node; reported as nan.
    }
    out << "n err_Q err_phi err_p err_r\n";
    out << sol.size() << ' ' << ratvec::format_number(ratvec::err_q(sol)) << ' ' << ratvec::format_number(phi) << ' '
        << ratvec::format_number(ratvec::err_p(sol).value_or(nan)) << ' ' << ratvec::format_number(ratvec::err_r(sol))
        << '\n';
}

struct SweepFlags {
    ratvec::Index n_min = 5;
    ratvec::Index n_max = 300;
    ratvec::Index n_step = 10;
    int runs = 5;
    std::uint64_t seed = 1;
    std::string out;
};

void add_sweep_flags(CLI::App* cmd, SweepFlags& f)
{
    cmd->add_option("--n-min", f.n_min, "smallest n")->capture_default_str();
    cmd->add_option("--n-max", f.n_max, "largest n")->capture_default_str();
    cmd->add_option("--n-step", f.n_step, "step between sizes")->capture_default_str();
    cmd->add_option("--runs", f.runs, "seeded runs per size")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--seed", f.seed, "sweep seed")->capture_default_str();
    cmd->add_option("--out", f.out, "output CSV path")->required();
}

void run_sweep(const ratvec::ExperimentConfig& cfg, const std::string& path)
{
    const auto up = ratvec::run_experiment(cfg, ratvec::Algorithm::Updating);
    const auto kr = ratvec::run_experiment(cfg, ratvec::Algorithm::Krylov);
    std::ofstream out = open_output(path);
    ratvec::write_experiment_csv(out, up, kr);
}

std::vector<int> parse_int_list(const std::string& text)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::InvalidInput, "not an integer list: " + text);
        }
    }
    if (out.empty()) throw Error(ErrorCode::InvalidInput, "empty integer list");
    return out;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Orthonormal rational function vectors: solvers and experiment harness"};
    app.require_subcommand(1);

    SweepFlags exp1;
    CLI::App* exp1_cmd = app.add_subcommand("exp1", "unit-circle sweep, both algorithms");
    add_sweep_flags(exp1_cmd, exp1);

    SweepFlags exp2;
    ratvec::Index close_index = 40;
    double theta = 1e-6;
    CLI::App* exp2_cmd = app.add_subcommand("exp2", "unit-circle sweep with a close node pair");
    add_sweep_flags(exp2_cmd, exp2);
    exp2_cmd->add_option("--close-index", close_index, "1-based index of the first node of the pair")
        ->capture_default_str();
    exp2_cmd->add_option("--theta", theta, "angle between the paired nodes")->capture_default_str();

    std::string n1_list = "4,9,16,25,36";
    std::string sqrt_out;
    std::string curves_out;
    std::string select = "rate";
    CLI::App* sqrt_cmd = app.add_subcommand("sqrt", "rational approximation of sqrt(t) on [0, 1]");
    sqrt_cmd->add_option("--n1", n1_list, "comma-separated tapered pole counts")->capture_default_str();
    sqrt_cmd->add_option("--out", sqrt_out, "selected approximants CSV")->required();
    sqrt_cmd->add_option("--curves", curves_out, "per-index error curves CSV");
    sqrt_cmd->add_option("--select", select, "selection rule")
        ->capture_default_str()
        ->check(CLI::IsMember({"rate", "min"}));

    std::string input;
    std::string algorithm = "updating";
    std::string solve_out;
    CLI::App* solve_cmd = app.add_subcommand("solve", "solve one problem given as JSON");
    solve_cmd->add_option("--input", input, "problem JSON")->required();
    solve_cmd->add_option("--algorithm", algorithm, "solver")
        ->capture_default_str()
        ->check(CLI::IsMember({"updating", "krylov"}));
    solve_cmd->add_option("--out", solve_out, "metrics CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*exp1_cmd) {
            run_sweep(ratvec::exp1_config(exp1.n_min, exp1.n_max, exp1.n_step, exp1.runs, exp1.seed), exp1.out);
        } else if (*exp2_cmd) {
            run_sweep(ratvec::exp2_config(exp2.n_min, exp2.n_max, exp2.n_step, exp2.runs, exp2.seed, close_index,
                                          theta),
                      exp2.out);
        } else if (*sqrt_cmd) {
            const auto rule = select == "min" ? ratvec::Selection::Min : ratvec::Selection::Rate;
            const auto rows = ratvec::run_sqrt(parse_int_list(n1_list), rule);
            std::ofstream out = open_output(sqrt_out);
            ratvec::write_sqrt_csv(out, rows);
            if (!curves_out.empty()) {
                std::ofstream curves = open_output(curves_out);
                ratvec::write_curves_csv(curves, rows);
            }
        } else if (*solve_cmd) {
            std::ifstream in(input);
            if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + input);
            const auto alg = algorithm == "krylov" ? ratvec::Algorithm::Krylov : ratvec::Algorithm::Updating;
            const ratvec::PencilSolution sol = ratvec::solve(parse_problem(in), alg);
            std::ofstream out = open_output(solve_out);
            write_solve_metrics(out, sol);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
