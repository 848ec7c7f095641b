#ifndef ARITHDYN_MODEL_HPP
#define ARITHDYN_MODEL_HPP

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "arithdyn/errors.hpp"
#include "arithdyn/form.hpp"
#include "arithdyn/integer.hpp"
#include "arithdyn/resultant.hpp"

namespace arithdyn {

// A degree-d self-map of P^n given by an integer lift with nonzero resultant.
// The lift is stored jointly primitive; validate_model divides out any common
// integer content before certifying.
struct MapModel {
    int n;                           // ambient projective dimension
    int d;                           // algebraic degree
    std::vector<HomogeneousForm> lift;
    std::vector<std::string> vars;
    Int resultant;                   // nonzero regular-sequence certificate

    std::vector<Int> eval_lift(const std::vector<Int>& x) const {
        std::vector<Int> out;
        out.reserve(lift.size());
        for (const auto& p : lift) out.push_back(p.eval(x));
        return out;
    }
};

inline std::vector<std::string> default_vars(int count) {
    static const char* names[] = {"x", "y", "z", "w"};
    if (count <= 4) return std::vector<std::string>(names, names + count);
    std::vector<std::string> v;
    for (int i = 0; i < count; ++i) v.push_back("t" + std::to_string(i));
    return v;
}

inline MapModel validate_model(std::vector<HomogeneousForm> lift,
                               std::vector<std::string> vars = {}) {
    if (lift.size() < 2) throw validation_error("a model needs n+1 >= 2 forms");
    const int nv = lift[0].num_vars();
    if (static_cast<int>(lift.size()) != nv)
        throw validation_error("a model of P^n needs n+1 forms in n+1 variables");
    const int d = lift[0].degree();
    for (const auto& p : lift) {
        if (p.num_vars() != nv) throw validation_error("lift arity mismatch");
        if (p.degree() != d) throw validation_error("lift degree mismatch");
    }
    if (d < 2) throw validation_error("algebraic degree must be >= 2");
    Int g = joint_content(lift);
    if (g != 1)
        for (auto& p : lift) {
            HomogeneousForm q(p.num_vars(), p.degree());
            for (const auto& [e, c] : p.terms()) q.add_term(e, Int(c / g));
            p = q;
        }
    if (nv > 3)
        throw capability_error("resultant certification is supported for n <= 2 only");
    Int res = system_resultant(lift);
    if (res == 0)
        throw validation_error("zero resultant: the lift is not a regular sequence "
                               "(the map is not a morphism over the algebraic closure)");
    if (vars.empty()) vars = default_vars(nv);
    if (static_cast<int>(vars.size()) != nv) throw validation_error("variable list arity mismatch");
    return MapModel{nv - 1, d, std::move(lift), std::move(vars), res};
}

// k-fold iterate of the lift by repeated substitution; degree d^k.
inline std::vector<HomogeneousForm> iterate_lift(const MapModel& m, int k,
                                                 long degree_budget = 256) {
    if (k < 1) throw validation_error("iterate_lift: k must be >= 1");
    long deg = 1;
    for (int i = 0; i < k; ++i) {
        deg *= m.d;
        if (deg > degree_budget)
            throw capability_error("iterate degree " + std::to_string(deg) +
                                   " exceeds the configured budget");
    }
    std::vector<HomogeneousForm> out = m.lift;
    for (int i = 1; i < k; ++i) {
        std::vector<HomogeneousForm> next;
        next.reserve(out.size());
        for (const auto& p : out) next.push_back(p.compose(m.lift));
        out = std::move(next);
    }
    return out;
}

inline ProjPoint apply_map(const MapModel& m, const ProjPoint& p) {
    std::vector<Int> img = m.eval_lift(p.c);
    bool all_zero = true;
    for (const auto& v : img) all_zero = all_zero && v == 0;
    if (all_zero)
        throw numeric_error("lift vanished at a rational point despite nonzero resultant");
    return normalize_point(std::move(img));
}

// ---- reduction analysis ----------------------------------------------------

struct ReductionReport {
    Int resultant;
    std::vector<std::pair<Int, int>> bad_primes; // (prime, multiplicity in resultant)
    Int unfactored_cofactor;                     // 1 when factorization is complete
    std::map<Int, std::vector<ProjPoint>> indeterminacy; // mod-p points, when enumerated
};

namespace detail {

inline Int pollard_brent(const Int& n) {
    // deterministic parameter sweep; n must be composite and odd
    for (long c = 1; c < 40; ++c) {
        Int y(2), r(1), q(1), g(1), x, ys;
        long m = 128;
        while (g == 1) {
            x = y;
            for (Int i(0); i < r; ++i) y = (y * y + c) % n;
            Int k(0);
            while (k < r && g == 1) {
                ys = y;
                long lim = static_cast<long>(std::min(Int(m), Int(r - k)).get_si());
                for (long i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = q * (x > y ? x - y : y - x) % n;
                }
                g = gcd(q, n);
                k += lim;
            }
            r *= 2;
            if (r > 1000000) break;
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                ys = (ys * ys + c) % n;
                g = gcd(x > ys ? x - ys : ys - x, n);
            }
        }
        if (g != 1 && g != n) return g;
    }
    return Int(0);
}

inline void factor_into(Int n, std::map<Int, int>& out, Int& cofactor, long trial_bound) {
    for (Int p(2); p * p <= n && p <= trial_bound; p += (p == 2 ? 1 : 2)) {
        while (n % p == 0) {
            ++out[p];
            n /= p;
        }
    }
    std::vector<Int> stack{n};
    while (!stack.empty()) {
        Int v = stack.back();
        stack.pop_back();
        if (v == 1) continue;
        if (is_prime(v)) {
            Int r = v;
            ++out[r];
            continue;
        }
        Int f = pollard_brent(v);
        if (f == 0) {
            cofactor *= v;
            continue;
        }
        stack.push_back(f);
        stack.push_back(v / f);
    }
}

} // namespace detail

inline std::vector<ProjPoint> indeterminacy_points_mod_p(const MapModel& m, const Int& p,
                                                         long enum_bound = 97) {
    require_prime(p);
    if (p > enum_bound)
        throw capability_error("prime exceeds the enumeration bound " + std::to_string(enum_bound));
    if (m.n > 2) throw capability_error("mod-p enumeration supports n <= 2");
    std::vector<HomogeneousForm> red;
    red.reserve(m.lift.size());
    for (const auto& f : m.lift) red.push_back(f.reduce_mod(p));
    auto vanishes = [&](const std::vector<Int>& x) {
        for (const auto& f : red)
            if (f.eval(x) % p != 0) return false;
        return true;
    };
    std::vector<ProjPoint> out;
    long q = p.get_si();
    if (m.n == 1) {
        for (long a = 0; a < q; ++a)
            if (vanishes({Int(1), Int(a)})) out.push_back(ProjPoint{{Int(1), Int(a)}});
        if (vanishes({Int(0), Int(1)})) out.push_back(ProjPoint{{Int(0), Int(1)}});
    } else {
        for (long a = 0; a < q; ++a)
            for (long b = 0; b < q; ++b)
                if (vanishes({Int(1), Int(a), Int(b)}))
                    out.push_back(ProjPoint{{Int(1), Int(a), Int(b)}});
        for (long a = 0; a < q; ++a)
            if (vanishes({Int(0), Int(1), Int(a)})) out.push_back(ProjPoint{{Int(0), Int(1), Int(a)}});
        if (vanishes({Int(0), Int(0), Int(1)})) out.push_back(ProjPoint{{Int(0), Int(0), Int(1)}});
    }
    return out;
}

// Primes dividing the stored resultant are exactly the primes of bad
// reduction.  Trial division first, then a Pollard-Brent sweep; anything
// still unsplit is reported as an explicit cofactor, never silently dropped.
inline ReductionReport bad_reduction_primes(const MapModel& m, long trial_bound = 1000000,
                                            long enum_bound = 97) {
    ReductionReport rep;
    rep.resultant = m.resultant;
    rep.unfactored_cofactor = 1;
    Int n = abs_int(m.resultant);
    std::map<Int, int> fac;
    if (n > 1) detail::factor_into(n, fac, rep.unfactored_cofactor, trial_bound);
    for (const auto& [p, k] : fac) rep.bad_primes.emplace_back(p, k);
    for (const auto& [p, k] : fac)
        if (p <= enum_bound && m.n <= 2)
            rep.indeterminacy.emplace(p, indeterminacy_points_mod_p(m, p, enum_bound));
    return rep;
}

// ---- negativity conditions --------------------------------------------------

struct NegativityReport {
    bool satisfied;
    bool proven_all_k;   // symbolic certificate (monic polynomial map)
    int verified_up_to;  // largest k checked when not proven symbolically
    int failing_k;       // 0 when none
    std::string detail;
};

namespace detail {

// is the form a monomial c * last_var^d ?
inline bool is_last_var_monomial(const HomogeneousForm& f) {
    if (f.terms().size() != 1) return false;
    const auto& e = f.terms().begin()->first;
    for (size_t i = 0; i + 1 < e.size(); ++i)
        if (e[i] != 0) return false;
    return true;
}

inline Int coeff_of_pure_power(const HomogeneousForm& f, int var) {
    HomogeneousForm::Expo e(f.num_vars(), 0);
    e[var] = static_cast<unsigned>(f.degree());
    auto it = f.terms().find(e);
    return it == f.terms().end() ? Int(0) : it->second;
}

} // namespace detail

// The model restricted to the hyperplane at infinity must stay a unit system
// for every iterate.  For n = 1 this is an exact gcd condition on the
// restricted leading values, which follow the unnormalized orbit of (1:0);
// the monic polynomial-map case is certified for all k at once.
inline NegativityReport check_negativity_conditions(const MapModel& m, int k_max = 4) {
    NegativityReport rep{true, false, k_max, 0, ""};
    if (m.n == 1) {
        if (detail::is_last_var_monomial(m.lift[1]) &&
            abs_int(detail::coeff_of_pure_power(m.lift[0], 0)) == 1) {
            rep.proven_all_k = true;
            rep.detail = "monic polynomial map: infinity is fixed with unit leading value";
            return rep;
        }
        // restricted leading values at step k are the components of the
        // unnormalized orbit of (1, 0)
        std::vector<Int> v{Int(1), Int(0)};
        for (int k = 1; k <= k_max; ++k) {
            v = m.eval_lift(v);
            Int g = gcd(v[0], v[1]);
            if (abs_int(g) != 1) {
                rep.satisfied = false;
                rep.failing_k = k;
                rep.detail = "restricted system has content " + abs_int(g).get_str() +
                             " at k = " + std::to_string(k);
                return rep;
            }
        }
        rep.detail = "verified up to k_max";
        return rep;
    }
    if (m.n != 2) throw capability_error("negativity check supports n <= 2");
    for (int k = 1; k <= k_max; ++k) {
        auto pk = iterate_lift(m, k, 4096);
        std::vector<HomogeneousForm> restricted;
        for (const auto& f : pk) {
            HomogeneousForm r = f.restrict_var_to_zero(m.n); // set T_n = 0
            if (!r.is_zero()) restricted.push_back(r.drop_var(m.n));
        }
        bool ok;
        if (restricted.size() < 2) {
            ok = false; // a single binary form cannot cut out the origin
        } else if (restricted.size() == 2) {
            ok = abs_int(sylvester_resultant(restricted[0], restricted[1])) == 1;
        } else {
            ok = true;
            for (size_t i = 0; i < restricted.size() && ok; ++i)
                for (size_t j = i + 1; j < restricted.size() && ok; ++j)
                    ok = abs_int(sylvester_resultant(restricted[i], restricted[j])) == 1;
        }
        if (!ok) {
            rep.satisfied = false;
            rep.failing_k = k;
            rep.detail = "restricted system is not a unit system at k = " + std::to_string(k);
            return rep;
        }
    }
    rep.detail = "verified up to k_max";
    return rep;
}

} // namespace arithdyn

#endif
