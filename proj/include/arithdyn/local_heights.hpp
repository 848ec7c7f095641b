#ifndef ARITHDYN_LOCAL_HEIGHTS_HPP
#define ARITHDYN_LOCAL_HEIGHTS_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "arithdyn/errors.hpp"
#include "arithdyn/hensel.hpp"
#include "arithdyn/integer.hpp"
#include "arithdyn/model.hpp"
#include "arithdyn/polynomial.hpp"

namespace arithdyn {

// S_v at a normalized point: the valuation drop of the lift,
// min_i v_p(p_i(x)).  Well defined on P^n because rescaling x by lambda
// shifts both v(p_i(x)) and v(x^d) by d*v(lambda).
inline long S_v(const MapModel& m, const Int& p, const ProjPoint& x) {
    auto img = m.eval_lift(x.c);
    Valuation v = valuation_min(p, img.begin(), img.end());
    if (v.is_infinite())
        throw numeric_error("lift vanished at a point despite nonzero resultant");
    return v.value();
}

// Certified uniform bound for S_v: the valuation of the stored resultant.
// The resultant sits in the elimination ideal (Res * x_i^N is a combination
// of the lift entries), so the drop at any point of P^n over the completed
// algebraic closure is at most v_p(Res).
inline long R_v_bound(const MapModel& m, const Int& p) {
    return valuation(p, m.resultant).value();
}

// h_k = S_v(P, p_k) / d^k computed along the orbit; never expands iterate
// coefficients.  The recursion is S_{k+1} = d*S_k + s_k with s_k the one-step
// drop at the normalized orbit point.
inline std::vector<Rat> local_height_sequence(const MapModel& m, const Int& p,
                                              const ProjPoint& point, int k_max) {
    require_prime(p);
    std::vector<Rat> out;
    out.reserve(k_max);
    ProjPoint x = point;
    Rat h(0);
    Rat weight(1, m.d);
    for (int k = 1; k <= k_max; ++k) {
        auto img = m.eval_lift(x.c);
        long s = valuation_min(p, img.begin(), img.end()).value_or(-1);
        if (s < 0) throw numeric_error("lift vanished along an orbit");
        h += weight * Rat(s);
        h.canonicalize();
        out.push_back(h);
        weight /= m.d;
        x = normalize_point(std::move(img));
    }
    return out;
}

// A convergent local-height value with certified bounds.  Values are in
// valuation units (multiples of 1); scale by log p for nats.
struct LocalHeightEstimate {
    double value;
    Rat lower_bound, upper_bound;
    int depth;
    bool exact;
    Rat exact_value; // meaningful when exact

    static LocalHeightEstimate exactly(Rat v, int depth) {
        v.canonicalize();
        return LocalHeightEstimate{to_double(v), v, v, depth, true, v};
    }
    Rat width() const { return Rat(upper_bound - lower_bound); }
};

namespace detail {

// canonical projective residue mod p^T used as an orbit cycle key
inline std::string residue_key(const std::vector<Int>& x, const Int& p, const Int& pT) {
    size_t unit = x.size();
    for (size_t i = 0; i < x.size(); ++i)
        if (x[i] % p != 0) {
            unit = i;
            break;
        }
    if (unit == x.size()) return std::string(); // no unit coordinate visible
    Int u = mod_pow_reduce(x[unit], pT);
    Int inv;
    mpz_invert(inv.get_mpz_t(), u.get_mpz_t(), pT.get_mpz_t());
    std::string key;
    for (const auto& c : x) {
        key += mod_pow_reduce(c * inv, pT).get_str();
        key += ',';
    }
    return key;
}

// limit of sum s_k d^-(k+1) when the drop pattern is pre-period + cycle
inline Rat geometric_limit(const std::vector<long>& s, size_t j0, size_t L, int d) {
    Rat h(0), w(1, d); // w = d^-(k+1) at step k
    for (size_t k = 0; k < j0; ++k) {
        h += w * Rat(s[k]);
        w /= d;
    }
    Rat cyc(0), wc = w;
    for (size_t i = 0; i < L; ++i) {
        cyc += wc * Rat(s[j0 + i]);
        wc /= d;
    }
    Rat dl(1);
    for (size_t i = 0; i < L; ++i) dl *= d;
    Rat total = h + cyc * dl / (dl - 1);
    total.canonicalize();
    return total;
}

// Residue-backed orbit engine.  Coordinates are residues mod p^prec with
// min valuation zero; each step divides out the drop, costing `drop` digits
// of precision, so the caller provisions prec for the planned depth.  When
// the canonical state mod p^(R+1) repeats and one further full period
// confirms the drop pattern, the limit is exact.
inline LocalHeightEstimate local_height_residue_orbit(const MapModel& m, const Int& p,
                                                      std::vector<Int> x, long prec,
                                                      const Rat& target_error) {
    const long R = R_v_bound(m, p);
    if (R == 0) return LocalHeightEstimate::exactly(Rat(0), 0);
    const int d = m.d;
    Int pT(1);
    for (long i = 0; i <= R; ++i) pT *= p;
    Int pk(1);
    for (long i = 0; i < prec; ++i) pk *= p;
    for (auto& c : x) c = mod_pow_reduce(c, pk);

    std::vector<long> s;
    std::map<std::string, size_t> seen;
    size_t cand_j0 = 0, cand_L = 0, confirm_left = 0;
    Rat weight(1, d), h(0);
    Rat tail_at = Rat(R) / (d - 1);
    int k = 0;
    const int hard_cap = 2048;
    while (prec > R + 1 && k < hard_cap) {
        if (confirm_left == 0) {
            auto key = residue_key(x, p, pT);
            if (!key.empty()) {
                auto it = seen.find(key);
                if (it != seen.end()) {
                    cand_j0 = it->second;
                    cand_L = s.size() - cand_j0;
                    confirm_left = cand_L;
                } else {
                    seen.emplace(std::move(key), s.size());
                }
            }
        }
        std::vector<Int> img;
        img.reserve(m.lift.size());
        for (const auto& f : m.lift) img.push_back(mod_pow_reduce(f.eval(x), pk));
        Valuation v = Valuation::infinity();
        for (const auto& c : img) v = min(v, valuation(p, c));
        long step = v.value_or(prec);
        if (step >= prec - 1) break; // cannot read the drop at this precision
        s.push_back(step);
        h += weight * Rat(step);
        weight /= d;
        ++k;
        if (confirm_left > 0) {
            size_t i = s.size() - 1;
            if (s[i] != s[i - cand_L]) {
                confirm_left = 0;
                cand_L = 0;
                seen.clear();
            } else if (--confirm_left == 0) {
                return LocalHeightEstimate::exactly(geometric_limit(s, cand_j0, cand_L, d), k);
            }
        }
        tail_at /= d;
        if (tail_at <= target_error && confirm_left == 0) break;
        if (step > 0) {
            Int ps(1);
            for (long i = 0; i < step; ++i) ps *= p;
            prec -= step;
            pk /= ps;
            for (auto& c : img) c = mod_pow_reduce(c / ps, pk);
        }
        x = std::move(img);
    }
    h.canonicalize();
    Rat hi = h + tail_at;
    hi.canonicalize();
    return LocalHeightEstimate{to_double(h), h, hi, k, false, Rat(0)};
}

inline long plan_precision(const MapModel& m, const Int& p, const Rat& target_error) {
    const long R = R_v_bound(m, p);
    if (R == 0) return 8;
    // steps until R/(d^k (d-1)) <= target, plus room to confirm cycles
    double eps = std::max(1e-300, to_double(target_error));
    long k = static_cast<long>(std::ceil(std::log(R / ((m.d - 1) * eps)) / std::log(double(m.d))));
    k = std::max<long>(k, 1) + 96;
    return R * (k + 2) + R + 16;
}

} // namespace detail

// Limit of the local-height sequence with certified bounds; termination is
// guaranteed by the R_v tail bound.
inline LocalHeightEstimate finite_local_height(const MapModel& m, const Int& p,
                                               const ProjPoint& point, Rat target_error) {
    require_prime(p);
    if (target_error <= 0) throw validation_error("target_error must be positive");
    long prec = detail::plan_precision(m, p, target_error);
    return detail::local_height_residue_orbit(m, p, point.c, prec, target_error);
}

// Same limit for a Hensel-lifted p-adic point.
inline LocalHeightEstimate finite_local_height(const MapModel& m, const Int& p,
                                               const PadicRoot& root, Rat target_error) {
    if (target_error <= 0) throw validation_error("target_error must be positive");
    std::vector<Int> x = root.reciprocal ? std::vector<Int>{Int(1), root.value}
                                         : std::vector<Int>{root.value, Int(1)};
    return detail::local_height_residue_orbit(m, p, std::move(x), root.precision, target_error);
}

// ---- the finite-place term ---------------------------------------------------

// Exact rational combination of log p over primes; the shape of the global
// finite-place correction.
struct FormalLogSum {
    struct Term {
        Rat c;
        bool exact;
        double error_bound; // valuation units
    };
    std::map<Int, Term> terms; // no zero coefficients stored
    double error_bound = 0;    // total, nats
    bool unresolved = false;   // residual mode: some root geometry unsupported
    std::vector<std::string> notes;

    double value() const {
        double v = 0;
        for (const auto& [p, t] : terms) v += to_double(t.c) * log_int(p);
        return v;
    }
    void set_term(const Int& p, Rat c, bool exact, double err) {
        c.canonicalize();
        error_bound += err * log_int(p);
        if (c == 0 && exact) return;
        terms.emplace(p, Term{c, exact, err});
    }
};

enum class EMode { strict, residual };

namespace detail {

// exact rational roots of a primitive squarefree polynomial, by divisor
// enumeration of the outer coefficients
inline std::vector<Rat> rational_roots_squarefree(const IntPolynomial& f, bool& complete) {
    complete = true;
    std::vector<Rat> out;
    if (f.degree() < 1) return out;
    auto [core, zeros] = f.strip_zero_roots();
    if (zeros > 0) out.emplace_back(0);
    if (core.degree() < 1) return out;
    Int a0 = abs_int(core[0]), lead = abs_int(core.lead());
    auto divisors = [&complete](const Int& n) {
        std::vector<Int> ds;
        Int i(1);
        long iter = 0;
        for (; i * i <= n; ++i) {
            if (n % i == 0) {
                ds.push_back(i);
                if (i * i != n) ds.push_back(n / i);
            }
            if (ds.size() > 4096 || ++iter > 2000000) {
                complete = false;
                break;
            }
        }
        return ds;
    };
    for (const Int& num : divisors(a0)) {
        for (const Int& den : divisors(lead)) {
            if (gcd(num, den) != 1) continue;
            for (int sign = -1; sign <= 1; sign += 2) {
                Rat cand(sign * num, den);
                cand.canonicalize();
                if (core.eval(cand) == 0) out.push_back(cand);
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline IntPolynomial deflate_root(const IntPolynomial& f, const Rat& r) {
    // exact division by (den*x - num)
    IntPolynomial div(std::vector<Int>{Int(-r.get_num()), Int(r.get_den())});
    auto [q, rem] = rp_divmod(rp_from(f), rp_from(div));
    if (!rem.empty()) throw numeric_error("deflation by a non-root");
    return rp_to_primitive_int(q);
}

} // namespace detail

// Sum of local heights over the Qp-bar roots of F (with multiplicity) that
// the implementation can reach: exact rational roots plus simply-reducing
// Hensel lifts.  `missing` counts root multiplicity left uncovered.
struct RootMass {
    Rat mass;
    double err = 0; // valuation units
    bool exact = true;
    long missing = 0;
    std::string note;
};

inline RootMass divisor_root_mass(const MapModel& m, const IntPolynomial& F0, const Int& p,
                                  const Rat& tol) {
    RootMass out{Rat(0)};
    if (F0.degree() < 1) return out;
    for (const auto& [factor, mult] : squarefree_decomposition(F0)) {
        bool complete = true;
        auto roots = detail::rational_roots_squarefree(factor, complete);
        IntPolynomial w = factor;
        for (const auto& r : roots) {
            ProjPoint pt = normalize_point({Int(r.get_num()), Int(r.get_den())});
            auto h = finite_local_height(m, p, pt, tol);
            out.mass += Rat(mult) * (h.exact ? h.exact_value : h.lower_bound);
            out.exact = out.exact && h.exact;
            out.err += mult * to_double(h.width());
            w = detail::deflate_root(w, r);
        }
        if (!complete)
            throw capability_error("rational-root search exceeded the divisor budget");
        if (w.degree() >= 1) {
            long prec = detail::plan_precision(m, p, tol);
            auto lifted = hensel_rational_roots(w, p, prec);
            for (const auto& root : lifted.roots) {
                auto h = finite_local_height(m, p, root, tol);
                out.mass += Rat(mult) * (h.exact ? h.exact_value : h.lower_bound);
                out.exact = out.exact && h.exact;
                out.err += mult * to_double(h.width());
            }
            long covered = static_cast<long>(lifted.roots.size());
            if (lifted.unsupported || covered < w.degree()) {
                out.missing += mult * (w.degree() - covered);
                out.note = "prime " + p.get_str() + ": " +
                           std::to_string(w.degree() - covered) +
                           " root(s) of an irreducible factor not reachable in Qp" +
                           (lifted.note.empty() ? "" : " (" + lifted.note + ")");
            }
        }
    }
    out.mass.canonicalize();
    return out;
}

// Binary-form variant: a Y1^e factor contributes e copies of the point at
// infinity, the rest is the dehomogenized polynomial.
inline RootMass divisor_root_mass(const MapModel& m, const HomogeneousForm& F0, const Int& p,
                                  const Rat& tol) {
    if (F0.num_vars() != 2) throw validation_error("divisor root mass expects a binary form");
    auto coeffs = F0.binary_coeffs(); // index = Y0 exponent
    int e = 0;
    {
        int top = F0.degree();
        while (top >= 0 && coeffs[top] == 0) {
            ++e;
            --top;
        }
    }
    RootMass out{Rat(0)};
    if (e > 0) {
        auto h = finite_local_height(m, p, ProjPoint{{Int(1), Int(0)}}, tol);
        out.mass += Rat(e) * (h.exact ? h.exact_value : h.lower_bound);
        out.exact = h.exact;
        out.err += e * to_double(h.width());
    }
    RootMass fin = divisor_root_mass(m, F0.dehomogenize(), p, tol);
    out.mass += fin.mass;
    out.mass.canonicalize();
    out.err += fin.err;
    out.exact = out.exact && fin.exact;
    out.missing += fin.missing;
    out.note = fin.note;
    return out;
}

// The global finite-place correction for a one-dimensional model:
//   E = sum_p c_p log p over bad primes and primes dividing content(F),
//   c_p = deg(F) * h_p(infinity) - sum_{roots of F in Qp-bar} h_p(root) - v_p(F)
// with deg and roots taken from the binary form (a Y1 factor is a root at
// infinity).  Signs are fixed so the assembled main identity holds (see
// README).  Roots are taken exactly when rational, through Hensel lifting
// otherwise; strict mode refuses unsupported root geometry, residual mode
// records it.
inline FormalLogSum E_finite(const MapModel& m, const HomogeneousForm& F, EMode mode,
                             Rat target_error = Rat(1, 1000000000)) {
    if (m.n != 1) throw capability_error("the finite-place term is computed for n = 1 only");
    if (F.is_zero() || F.num_vars() != 2)
        throw validation_error("E_finite needs a nonzero binary form");
    FormalLogSum out;

    auto reduction = bad_reduction_primes(m);
    if (reduction.unfactored_cofactor != 1)
        throw capability_error("cannot enumerate bad primes: resultant has an unfactored part");
    Int contentF = F.content();
    std::map<Int, int> relevant;
    for (const auto& [p, k] : reduction.bad_primes) relevant[p] = k;
    {
        std::map<Int, int> cf;
        Int dummy_cof(1);
        if (contentF > 1) detail::factor_into(contentF, cf, dummy_cof, 1000000);
        if (dummy_cof != 1) throw capability_error("content(F) has an unfactored part");
        for (const auto& [p, k] : cf) relevant.emplace(p, 0);
    }

    const int degF = F.degree();
    HomogeneousForm F0 = F.primitive_part();
    ProjPoint infinity{{Int(1), Int(0)}};

    for (const auto& [p, mult_in_res] : relevant) {
        long vF = valuation(p, contentF).value();
        long R = R_v_bound(m, p);
        if (R == 0) {
            // good reduction: every local height vanishes identically
            out.set_term(p, Rat(-vF), true, 0.0);
            continue;
        }
        // per-height tolerance, in valuation units
        Rat tol = target_error / Rat(static_cast<long>(relevant.size())) /
                  Rat(2 * degF + 2) / Rat(8);
        LocalHeightEstimate hinf = finite_local_height(m, p, infinity, tol);
        Rat c = Rat(degF) * (hinf.exact ? hinf.exact_value : hinf.lower_bound);
        double err = degF * to_double(hinf.width());
        bool exact = hinf.exact;

        // root contributions: rational roots exactly, the rest via Hensel
        RootMass mass = divisor_root_mass(m, F0, p, tol);
        c -= mass.mass;
        err += mass.err;
        exact = exact && mass.exact;
        if (mass.missing > 0) {
            if (mode == EMode::strict)
                throw capability_error("unsupported p-adic root geometry: " + mass.note);
            out.unresolved = true;
            exact = false;
            out.notes.push_back(mass.note);
        }
        c -= vF;
        out.set_term(p, c, exact, err);
    }
    return out;
}

inline FormalLogSum E_finite(const MapModel& m, const IntPolynomial& F, EMode mode,
                             Rat target_error = Rat(1, 1000000000)) {
    if (F.is_zero()) throw validation_error("E_finite: zero polynomial");
    if (F.degree() < 1) {
        // constants carry the empty divisor; only the content term remains
        HomogeneousForm c(2, 0);
        c.add_term({0, 0}, F[0]);
        return E_finite(m, c, mode, target_error);
    }
    return E_finite(m, HomogeneousForm::homogenize(F), mode, target_error);
}

} // namespace arithdyn

#endif
