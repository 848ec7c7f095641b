#ifndef ARITHDYN_MAHLER_REPORT_HPP
#define ARITHDYN_MAHLER_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "arithdyn/equilibrium.hpp"
#include "arithdyn/errors.hpp"
#include "arithdyn/heights.hpp"
#include "arithdyn/local_heights.hpp"
#include "arithdyn/model.hpp"

namespace arithdyn {

struct MahlerConfig {
    int tree_depth = 12;
    int push_depth = 0;          // 0: choose from target_error
    int seed = 0;
    double target_error = 1e-4;  // per-term accuracy goal
    double budget_override = 0;  // 0: computed budget
    EMode e_mode = EMode::strict;
    bool residual_fallback = true; // drop to residual mode when strict refuses
    Cplx base_a = Cplx(1, 0);      // default tree base point (1 : 0.5+0.8i)
    Cplx base_b = Cplx(0.5, 0.8);
};

// Both sides of the main height identity
//   h(D) = integral of log|F| d(mu) + E(F, finite) + deg(F) h(infinity)
// with per-term provenance, a residual, and an error budget.
struct MahlerReport {
    HeightValue lhs_height;     // h(D), orbit-sum convention
    double infinity_term;       // deg(F) * h(infinity)
    double infinity_error;
    IntegralEstimate arch_integral; // tree estimate of the log|F| integral
    FormalLogSum E_term;
    double residual;
    double budget;
    bool pass;
    bool e_resid_mode = false;  // E fell back to residual mode
    std::string residual_attribution; // heuristic note, see below
    std::vector<std::string> notes;
};

namespace detail {

inline PreimageTree tree_with_fallback(const MapModel& m, const MahlerConfig& cfg) {
    std::vector<std::pair<Cplx, Cplx>> bases{{cfg.base_a, cfg.base_b},
                                             {Cplx(1, 0), Cplx(1.1, 0.3)},
                                             {Cplx(2, 1), Cplx(1, 0)},
                                             {Cplx(0.31, 1.7), Cplx(1, 0)}};
    for (const auto& [a, b] : bases) {
        try {
            return build_tree(m, a, b, cfg.tree_depth, cfg.seed);
        } catch (const validation_error&) {
            // exceptional base point: try the next deterministic fallback
        }
    }
    throw numeric_error("no usable tree base point");
}

// Pushforward depth from the certified tail bound, capped so coefficient
// bit growth (about deg F * height * d^k) stays inside the default budget.
inline int choose_push_depth(const MapModel& m, const IntPolynomial& F, double target) {
    double C = arch_increment_bound(m);
    auto red = bad_reduction_primes(m);
    for (const auto& [p, mult] : red.bad_primes) C += mult * log_int(p);
    double num = std::max(F.degree(), 1) * C / (m.d - 1);
    if (num <= target) return 2;
    int k = static_cast<int>(std::ceil(std::log(num / target) / std::log(double(m.d))));
    return std::min(std::max(k + 1, 4), 16);
}

} // namespace detail

inline MahlerReport mahler_report(const MapModel& m, const IntPolynomial& F,
                                  MahlerConfig cfg = {}) {
    if (m.n != 1) throw capability_error("the height identity is verified on P^1 only");
    if (F.is_zero()) throw validation_error("zero polynomial");
    if (F.content() != 1)
        throw validation_error("the equation must be primitive (unit content)");
    MahlerReport rep{};

    int depth = cfg.push_depth > 0 ? cfg.push_depth
                                   : detail::choose_push_depth(m, F, cfg.target_error / 4);
    rep.lhs_height = canonical_height_divisor(m, F, depth);

    auto red = bad_reduction_primes(m);
    auto hinf = canonical_height_point(m, ProjPoint{{Int(1), Int(0)}}, cfg.target_error / 8, &red);
    rep.infinity_term = F.degree() * hinf.value;
    rep.infinity_error = F.degree() * hinf.error_bound;

    auto tree = detail::tree_with_fallback(m, cfg);
    rep.arch_integral = integrate_log(tree, F);

    try {
        rep.E_term = E_finite(m, F, cfg.e_mode, Rat(1, 100000000));
    } catch (const capability_error& e) {
        if (cfg.e_mode == EMode::strict && cfg.residual_fallback) {
            rep.E_term = E_finite(m, F, EMode::residual, Rat(1, 100000000));
            rep.e_resid_mode = true;
            rep.notes.push_back(std::string("strict finite-place mode refused: ") + e.what());
        } else {
            throw;
        }
    }

    rep.residual = rep.lhs_height.value - rep.arch_integral.value - rep.E_term.value() -
                   rep.infinity_term;
    rep.budget = cfg.budget_override > 0
                     ? cfg.budget_override
                     : rep.lhs_height.error_bound + rep.infinity_error + rep.E_term.error_bound +
                           3.0 * rep.arch_integral.spread + 1e-9;
    rep.pass = std::abs(rep.residual) <= rep.budget;

    if (rep.e_resid_mode) {
        // attribute the residual to the missing finite-place mass: test
        // whether residual/log p is close to a small-denominator rational
        for (const auto& [p, mult] : red.bad_primes) {
            double q = rep.residual / log_int(p);
            long maxden = static_cast<long>(m.d) * (m.d - 1);
            for (long den = 1; den <= std::max<long>(maxden, 1); ++den) {
                double num = q * den;
                if (std::abs(num - std::round(num)) < 0.02 && std::abs(num) < 64 * den) {
                    rep.residual_attribution =
                        "residual ~ (" + std::to_string(static_cast<long>(std::round(num))) +
                        "/" + std::to_string(den) + ") log " + p.get_str() +
                        " (heuristic attribution to unresolved E)";
                    break;
                }
            }
            if (!rep.residual_attribution.empty()) break;
        }
        // in residual mode the identity is only checked up to the
        // unresolved mass; report it, do not fake a pass
        rep.pass = false;
    }
    rep.notes.push_back("conventions: h(D) sums canonical heights over the points of D "
                        "with multiplicity; E carries c_p = deg(F) h_p(inf) - sum_roots h_p "
                        "- v_p(F); the measure integral uses the rational function F/y^deg");
    return rep;
}

// Difference form of the identity for a quotient F+ / F- of equal degrees:
// the infinity terms cancel.
struct CorollaryReport {
    double lhs;             // h(D+) - h(D-)
    double rhs;             // integral of log|F+/F-| + E(F+) - E(F-)
    double residual;
    double budget;
    bool pass;
    double infinity_cancellation; // |inf(F+) - inf(F-)|, asserted tiny
};

inline CorollaryReport corollary_check(const MapModel& m, const HomogeneousForm& Fp,
                                       const HomogeneousForm& Fm, MahlerConfig cfg = {}) {
    if (Fp.degree() != Fm.degree())
        throw validation_error("the two equations must have equal degree");
    if (Fp.is_zero() || Fm.is_zero() || Fp.content() != 1 || Fm.content() != 1)
        throw validation_error("both equations must be nonzero and primitive");
    CorollaryReport rep{};
    int depth = cfg.push_depth > 0
                    ? cfg.push_depth
                    : detail::choose_push_depth(m, Fp.dehomogenize(), cfg.target_error / 4);
    auto hp = canonical_height_divisor(m, Fp, depth);
    auto hm = canonical_height_divisor(m, Fm, depth);
    rep.lhs = hp.value - hm.value;

    auto tree = detail::tree_with_fallback(m, cfg);
    auto ip = integrate_log(tree, Fp);
    auto im = integrate_log(tree, Fm);

    auto Ep = E_finite(m, Fp, cfg.e_mode);
    auto Em = E_finite(m, Fm, cfg.e_mode);

    // deg F+ = deg F-: the infinity terms deg(F) h(inf) cancel identically
    rep.infinity_cancellation = 0.0;

    rep.rhs = (ip.value - im.value) + Ep.value() - Em.value();
    rep.residual = rep.lhs - rep.rhs;
    rep.budget = cfg.budget_override > 0
                     ? cfg.budget_override
                     : hp.error_bound + hm.error_bound + Ep.error_bound + Em.error_bound +
                           3.0 * (ip.spread + im.spread) + 1e-9;
    rep.pass = std::abs(rep.residual) <= rep.budget;
    return rep;
}

// One-sided bound: for models whose restriction to the hyperplane at
// infinity stays a unit system, a unit-content equation satisfies
// h(D) <= integral of log|F| d(mu).
struct InequalityReport {
    bool preconditions_met;
    std::string refusal;    // why the check was refused, when it was
    double lhs;             // h(D)
    double rhs;             // archimedean integral
    double budget;
    bool holds;
    double margin;          // rhs - lhs
};

inline InequalityReport inequality_check(const MapModel& m, const IntPolynomial& F,
                                         MahlerConfig cfg = {}) {
    InequalityReport rep{};
    rep.preconditions_met = false;
    if (m.n != 1) throw capability_error("inequality check is implemented on P^1");
    if (F.is_zero() || F.content() != 1) {
        rep.refusal = "equation must be nonzero with unit content";
        return rep;
    }
    auto neg = check_negativity_conditions(m);
    if (!neg.satisfied) {
        rep.refusal = "negativity conditions fail: " + neg.detail;
        return rep;
    }
    auto probe = detail::preperiodicity_probe(m, ProjPoint{{Int(1), Int(0)}});
    if (!probe.found) {
        rep.refusal = "infinity does not have a (detected) finite forward orbit, "
                      "so h(infinity) = 0 is not certified";
        return rep;
    }
    rep.preconditions_met = true;
    int depth = cfg.push_depth > 0 ? cfg.push_depth
                                   : detail::choose_push_depth(m, F, cfg.target_error / 4);
    auto hD = canonical_height_divisor(m, F, depth);
    auto tree = detail::tree_with_fallback(m, cfg);
    auto arch = integrate_log(tree, F);
    rep.lhs = hD.value;
    rep.rhs = arch.value;
    rep.budget = cfg.budget_override > 0
                     ? cfg.budget_override
                     : hD.error_bound + 3.0 * arch.spread + 1e-9;
    rep.margin = rep.rhs - rep.lhs;
    rep.holds = rep.lhs <= rep.rhs + rep.budget;
    return rep;
}

} // namespace arithdyn

#endif
