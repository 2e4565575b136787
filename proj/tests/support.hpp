#pragma once

#include "ratvec/core.hpp"
#include "ratvec/eval.hpp"
#include "ratvec/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace ratvec::support {

constexpr double kTwoPi = 6.283185307179586;

inline cplx random_complex(Rng& rng, double lo = -1.0, double hi = 1.0)
{
    return {rng.uniform(lo, hi), rng.uniform(lo, hi)};
}

struct RandomSpecOptions {
    double infinite_probability = 0.2;
    double pole_radius_lo = 1.3;
    double pole_radius_hi = 2.0;
};

/// Jittered nodes on the unit circle, finite poles in an annulus outside
/// it, random weights and labels. Valid by construction.
inline ProblemSpec random_spec(Index n, Rng& rng, const RandomSpecOptions& opt = {})
{
    ProblemSpec s;
    s.nodes.resize(n);
    s.weights.resize(n, 2);
    const double phase = rng.uniform(0.0, kTwoPi);
    for (Index j = 0; j < n; ++j) {
        const double angle = phase + kTwoPi * (static_cast<double>(j) + rng.uniform(-0.3, 0.3)) / static_cast<double>(n);
        s.nodes(j) = std::polar(1.0, angle);
        s.weights(j, 0) = random_complex(rng, 0.5, 1.5);
        s.weights(j, 1) = random_complex(rng, -1.5, 1.5);
        if (j < 2) {
            s.poles.push_back(ProjectivePole::infinity());
            s.index.push_back(j == 0 ? Component::First : Component::Second);
            continue;
        }
        s.index.push_back(rng.uniform() < 0.5 ? Component::First : Component::Second);
        if (rng.uniform() < opt.infinite_probability) {
            s.poles.push_back(ProjectivePole::infinity());
        } else {
            const double radius = rng.uniform(opt.pole_radius_lo, opt.pole_radius_hi);
            s.poles.push_back(ProjectivePole::finite(std::polar(radius, rng.uniform(0.0, kTwoPi))));
        }
    }
    return s;
}

/// Largest modulus among the coefficients of a symbolic vector.
inline double coefficient_scale(const SymbolicRationalVector& v)
{
    double scale = 0.0;
    for (const auto& c : v.comp) {
        for (const cplx& a : c.poly) scale = std::max(scale, std::abs(a));
        for (const auto& [p, a] : c.fracs) scale = std::max(scale, std::abs(a));
    }
    return scale;
}

struct PlacementReport {
    double stray = 0.0;    // worst relative residue or degree term outside the prescription
    double missing = 1.0;  // smallest relative size of a newest term, 1 when none
};

/// Checks the basis against its pole prescription: basis function j may
/// carry a residue at p_i (i <= j) only in component pi_i, its polynomial
/// degree in component c is below the number of infinite poles with label
/// c among the first j + 1, and the term introduced by pole j is present.
inline PlacementReport placement_report(const PencilSolution& sol)
{
    PlacementReport rep;
    const auto basis = symbolic_basis(sol);
    const ProblemSpec& s = sol.spec;
    for (Index j = 0; j < sol.size(); ++j) {
        const auto& v = basis[static_cast<std::size_t>(j)];
        const double scale = coefficient_scale(v);
        if (scale == 0.0) {
            rep.missing = 0.0;
            continue;
        }
        for (int c = 0; c < 2; ++c) {
            int infinite = 0;
            for (Index i = 0; i <= j; ++i)
                if (s.poles[static_cast<std::size_t>(i)].is_infinite() && slot(s.index[static_cast<std::size_t>(i)]) == c)
                    ++infinite;
            const auto& poly = v.comp[c].poly;
            for (std::size_t d = static_cast<std::size_t>(infinite); d < poly.size(); ++d)
                rep.stray = std::max(rep.stray, std::abs(poly[d]) / scale);
            for (const auto& [pole, res] : v.comp[c].fracs) {
                bool prescribed = false;
                for (Index i = 2; i <= j && !prescribed; ++i) {
                    const auto& p = s.poles[static_cast<std::size_t>(i)];
                    prescribed = !p.is_infinite() && slot(s.index[static_cast<std::size_t>(i)]) == c
                                 && std::abs(p.value() - pole) <= 1e-8 * std::max(1.0, std::abs(pole));
                }
                if (!prescribed) rep.stray = std::max(rep.stray, std::abs(res) / scale);
            }
        }
        if (j < 2) continue;
        const auto& p = s.poles[static_cast<std::size_t>(j)];
        const int c = slot(s.index[static_cast<std::size_t>(j)]);
        double newest = 0.0;
        if (p.is_infinite()) {
            int infinite = 0;
            for (Index i = 0; i <= j; ++i)
                if (s.poles[static_cast<std::size_t>(i)].is_infinite() && slot(s.index[static_cast<std::size_t>(i)]) == c)
                    ++infinite;
            const auto& poly = v.comp[c].poly;
            const auto d = static_cast<std::size_t>(infinite - 1);
            newest = d < poly.size() ? std::abs(poly[d]) : 0.0;
        } else {
            for (const auto& [pole, res] : v.comp[c].fracs)
                if (std::abs(p.value() - pole) <= 1e-8 * std::max(1.0, std::abs(pole))) newest = std::abs(res);
        }
        rep.missing = std::min(rep.missing, newest / scale);
    }
    return rep;
}

/// Largest modulus below the second subdiagonal of a square matrix.
inline double below_band(const MatrixXc& m)
{
    double worst = 0.0;
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = j + 3; i < m.rows(); ++i) worst = std::max(worst, std::abs(m(i, j)));
    return worst;
}

}  // namespace ratvec::support
