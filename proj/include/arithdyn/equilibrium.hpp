#ifndef ARITHDYN_EQUILIBRIUM_HPP
#define ARITHDYN_EQUILIBRIUM_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "arithdyn/errors.hpp"
#include "arithdyn/green.hpp"
#include "arithdyn/model.hpp"
#include "arithdyn/polynomial.hpp"
#include "arithdyn/roots.hpp"

namespace arithdyn {

// sup-normalized point of P^1(C) with a multiplicity
struct TreeNode {
    Cplx a, b;
    long mult;
};

inline void sup_normalize(Cplx& a, Cplx& b) {
    double n = std::max(std::abs(a), std::abs(b));
    if (n == 0.0) throw validation_error("zero vector is not a projective point");
    a /= n;
    b /= n;
}

// chordal distance on sup-normalized representatives
inline double chordal(const Cplx& a1, const Cplx& b1, const Cplx& a2, const Cplx& b2) {
    return std::abs(a1 * b2 - a2 * b1);
}

namespace detail {

// fiber of the pencil w_b p0 - w_a p1; an x-degree drop of the dehomogenized
// pencil contributes (1:0) with the missing multiplicity
inline std::vector<TreeNode> fiber_raw(const MapModel& m, const Cplx& wa, const Cplx& wb,
                                       double tol) {
    const int d = m.d;
    auto c0 = m.lift[0].binary_coeffs();
    auto c1 = m.lift[1].binary_coeffs();
    std::vector<CNum<double>> pencil(d + 1);
    double scale = 0;
    for (int i = 0; i <= d; ++i) {
        Cplx c = wb * Cplx(c0[i].get_d(), 0) - wa * Cplx(c1[i].get_d(), 0);
        pencil[i] = CNum<double>(c.real(), c.imag());
        scale = std::max(scale, std::abs(c));
    }
    if (scale == 0.0) throw numeric_error("degenerate pencil");
    int deg = d;
    while (deg > 0 && std::sqrt(r_to_double(pencil[deg].norm2())) <= 1e-14 * scale) --deg;
    std::vector<TreeNode> out;
    if (deg < d) out.push_back(TreeNode{Cplx(1, 0), Cplx(0, 0), d - deg});
    if (deg > 0) {
        pencil.resize(deg + 1);
        auto roots = aberth(pencil, tol, 80 + 40 * deg);
        std::sort(roots.begin(), roots.end(), [](const auto& x, const auto& y) {
            return x.re != y.re ? x.re < y.re : x.im < y.im;
        });
        for (const auto& r : roots) {
            Cplx a(r.re, r.im), b(1, 0);
            sup_normalize(a, b);
            out.push_back(TreeNode{a, b, 1});
        }
    }
    return out;
}

} // namespace detail

// fiber with nearby roots clustered into multiplicities, for reporting
inline std::vector<TreeNode> preimage_fiber(const MapModel& m, Cplx wa, Cplx wb,
                                            double tolerance = 1e-10) {
    if (m.n != 1) throw capability_error("preimage fibers are computed on P^1 only");
    sup_normalize(wa, wb);
    auto raw = detail::fiber_raw(m, wa, wb, tolerance);
    std::vector<TreeNode> out;
    for (const auto& node : raw) {
        bool merged = false;
        for (auto& prev : out)
            if (chordal(prev.a, prev.b, node.a, node.b) < 50 * tolerance) {
                prev.mult += node.mult;
                merged = true;
                break;
            }
        if (!merged) out.push_back(node);
    }
    return out;
}

// Full preimage tree of a base point.  Level k carries exactly d^k points
// counted with multiplicity.
struct PreimageTree {
    Cplx base_a, base_b;
    int depth;
    int seed;
    std::vector<std::vector<TreeNode>> levels; // levels[0] = {base}
};

inline PreimageTree build_tree(const MapModel& m, Cplx za, Cplx zb, int depth, int seed = 0,
                               double tolerance = 1e-12) {
    if (m.n != 1) throw capability_error("preimage trees are built on P^1 only");
    if (depth < 1) throw validation_error("tree depth must be >= 1");
    double nodes = std::pow(double(m.d), depth);
    if (nodes > 65536.0) throw capability_error("tree would exceed the 2^16 node cap");
    sup_normalize(za, zb);

    // Exceptional-point heuristic: a backward orbit that collapses to at
    // most two points in two levels signals a totally invariant point.  The
    // dedup threshold is coarse because root-finder error at a d-fold point
    // amplifies like the d-th root.
    {
        std::vector<TreeNode> seen{TreeNode{za, zb, 1}};
        std::vector<TreeNode> frontier = seen;
        for (int lvl = 0; lvl < 2; ++lvl) {
            std::vector<TreeNode> next;
            for (const auto& nd : frontier)
                for (const auto& ch : detail::fiber_raw(m, nd.a, nd.b, tolerance))
                    next.push_back(ch);
            for (const auto& nd : next) {
                bool dup = false;
                for (const auto& s : seen) dup = dup || chordal(s.a, s.b, nd.a, nd.b) < 1e-5;
                if (!dup) seen.push_back(nd);
            }
            frontier = std::move(next);
        }
        if (seen.size() <= 2)
            throw validation_error("base point is (numerically) exceptional: backward orbit has " +
                                   std::to_string(seen.size()) + " point(s)");
    }

    PreimageTree tree{za, zb, depth, seed, {}};
    tree.levels.push_back({TreeNode{za, zb, 1}});
    for (int lvl = 1; lvl <= depth; ++lvl) {
        std::vector<TreeNode> next;
        next.reserve(tree.levels.back().size() * m.d);
        for (const auto& nd : tree.levels.back()) {
            auto children = detail::fiber_raw(m, nd.a, nd.b, tolerance);
            // seed only rotates the deterministic child ordering
            if (seed != 0 && children.size() > 1)
                std::rotate(children.begin(),
                            children.begin() + (seed % static_cast<int>(children.size())),
                            children.end());
            for (auto ch : children) {
                ch.mult *= nd.mult;
                next.push_back(ch);
            }
        }
        long total = 0;
        for (const auto& nd : next) total += nd.mult;
        long expect = 1;
        for (int i = 0; i < lvl; ++i) expect *= m.d;
        if (total != expect) throw numeric_error("preimage fiber lost multiplicity");
        tree.levels.push_back(std::move(next));
    }
    return tree;
}

// Estimate of the integral of log|F| (F a polynomial in the affine chart,
// evaluated as the degree-zero rational function F(x/y)) against the
// preimage-equidistribution measure.
struct IntegralEstimate {
    double value;
    double spread;   // max deviation across the three deepest levels
    bool mitigated;  // near-singular leaves averaged over two levels
};

inline long total_mult(const PreimageTree& tree, int lvl) {
    long t = 0;
    for (const auto& nd : tree.levels[lvl]) t += nd.mult;
    return t;
}

namespace detail {

// log of the rational-function value |F(a/b)| at a projective point,
// computed from the binary form: log|F(a,b)| - deg F * log|b|.  Magnitudes
// are clamped away from zero so leaves that land exactly on a root or on
// the pole stay finite; the singular flag makes this visible.
inline double log_rational_value(const std::vector<Int>& coeffs, int mdeg, const Cplx& a,
                                 const Cplx& b) {
    Cplx acc(0, 0);
    for (int i = mdeg; i >= 0; --i)
        acc = acc * a + Cplx(coeffs[i].get_d(), 0) * std::pow(b, mdeg - i);
    double num = std::max(std::abs(acc), 1e-300);
    double den = std::max(std::abs(b), 1e-150);
    return std::log(num) - mdeg * std::log(den);
}

} // namespace detail

inline IntegralEstimate integrate_log(const PreimageTree& tree, const HomogeneousForm& Fbin,
                                      double singular_eps = 1e-8) {
    if (Fbin.is_zero() || Fbin.num_vars() != 2)
        throw validation_error("integrate_log needs a nonzero binary form");
    auto coeffs = Fbin.binary_coeffs();
    const int mdeg = Fbin.degree();
    IntPolynomial fin{std::vector<Int>(coeffs)};
    // sup-normalized root representatives of F, plus the pole at (1:0)
    std::vector<std::pair<Cplx, Cplx>> singular;
    if (mdeg >= 1) {
        if (fin.degree() >= 1)
            for (const auto& r : complex_roots(fin, 1e-12)) {
                Cplx a(r), b(1, 0);
                sup_normalize(a, b);
                singular.emplace_back(a, b);
            }
        singular.emplace_back(Cplx(1, 0), Cplx(0, 0));
    }
    const int top = tree.depth;
    const int lowest = std::max(0, top - 2);
    bool hit = false;
    std::vector<double> est; // est[0] = deepest level
    for (int lvl = top; lvl >= lowest; --lvl) {
        double acc = 0;
        for (const auto& nd : tree.levels[lvl]) {
            for (const auto& [sa, sb] : singular)
                if (chordal(nd.a, nd.b, sa, sb) < singular_eps) hit = true;
            acc += nd.mult * detail::log_rational_value(coeffs, mdeg, nd.a, nd.b);
        }
        est.push_back(acc / total_mult(tree, lvl));
    }
    double spread = 0;
    for (size_t i = 0; i < est.size(); ++i)
        for (size_t j = i + 1; j < est.size(); ++j)
            spread = std::max(spread, std::abs(est[i] - est[j]));
    double value = est[0];
    if (hit && est.size() >= 2) value = 0.5 * (est[0] + est[1]);
    return IntegralEstimate{value, spread, hit};
}

inline IntegralEstimate integrate_log(const PreimageTree& tree, const IntPolynomial& F,
                                      double singular_eps = 1e-8) {
    if (F.is_zero()) throw validation_error("integrate_log of the zero polynomial");
    if (F.degree() < 1) {
        HomogeneousForm c(2, 0);
        c.add_term({0, 0}, F[0]);
        return integrate_log(tree, c, singular_eps);
    }
    return integrate_log(tree, HomogeneousForm::homogenize(F), singular_eps);
}

// pullback consistency of the measure: the level-k estimate of the integral
// of log|G| against the level-(k-1) estimate computed through the composite
// G o phi (which lands on level k-2)
inline std::pair<IntegralEstimate, IntegralEstimate> invariance_check(const MapModel& m,
                                                                      const PreimageTree& tree,
                                                                      const IntPolynomial& G) {
    if (tree.depth < 2) throw validation_error("invariance check needs depth >= 2");
    IntegralEstimate direct = integrate_log(tree, G);
    std::vector<Int> coeffs = G.coeffs().empty() ? std::vector<Int>{Int(0)} : G.coeffs();
    const int mdeg = std::max(G.degree(), 0);
    const int lvl = tree.depth - 1;
    double acc = 0;
    for (const auto& nd : tree.levels[lvl]) {
        auto img = eval_lift_c(m, {nd.a, nd.b});
        double nrm = sup_norm(img);
        acc += nd.mult * detail::log_rational_value(coeffs, mdeg, img[0] / nrm, img[1] / nrm);
    }
    double value = acc / total_mult(tree, lvl);
    return {direct, IntegralEstimate{value, direct.spread, direct.mitigated}};
}

} // namespace arithdyn

#endif
