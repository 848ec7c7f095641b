#ifndef ARITHDYN_HENSEL_HPP
#define ARITHDYN_HENSEL_HPP

#include <string>
#include <vector>

#include "arithdyn/errors.hpp"
#include "arithdyn/integer.hpp"
#include "arithdyn/polynomial.hpp"

namespace arithdyn {

// A p-adic root approximation.  `value` is a residue mod p^precision; when
// `reciprocal` is set the stored residue approximates 1/root (the root itself
// has negative valuation).
struct PadicRoot {
    Int value;
    long precision;
    bool reciprocal;
};

struct HenselResult {
    std::vector<PadicRoot> roots;
    bool unsupported = false; // some reduced root was not simple
    std::string note;
};

namespace detail {

inline Int mod_pow_reduce(const Int& a, const Int& pk) {
    Int r = a % pk;
    if (r < 0) r += pk;
    return r;
}

inline Int eval_mod(const IntPolynomial& f, const Int& x, const Int& pk) {
    Int r(0);
    for (int i = f.degree(); i >= 0; --i) r = (r * x + f[i]) % pk;
    return mod_pow_reduce(r, pk);
}

// Newton lift of a simple root r of f mod p to precision p^N
inline Int newton_lift(const IntPolynomial& f, const IntPolynomial& df, const Int& p, Int r,
                       long N) {
    long k = 1;
    Int pk = p;
    while (k < N) {
        long next = std::min(2 * k, N);
        Int pn = pk;
        for (long i = k; i < next; ++i) pn *= p;
        Int fr = eval_mod(f, r, pn);
        Int dfr = eval_mod(df, r, pn);
        Int inv;
        if (mpz_invert(inv.get_mpz_t(), dfr.get_mpz_t(), pn.get_mpz_t()) == 0)
            throw numeric_error("derivative not invertible during Newton lift");
        r = mod_pow_reduce(r - fr * inv, pn);
        pk = pn;
        k = next;
    }
    return r;
}

} // namespace detail

// Lifts each simple root of F mod p to the requested precision.  Roots of
// negative valuation come from the reversed polynomial and are flagged
// `reciprocal`.  Non-simple reduction is reported, never silently dropped.
inline HenselResult hensel_rational_roots(const IntPolynomial& F, const Int& p, long precision) {
    if (F.is_zero()) throw validation_error("hensel_rational_roots: zero polynomial");
    require_prime(p);
    if (precision < 1) throw validation_error("precision must be >= 1");
    if (p > 1000000) throw capability_error("mod-p root enumeration bound exceeded");
    HenselResult out;
    IntPolynomial f = F.primitive_part();
    if (f.degree() < 1) return out;
    IntPolynomial df = f.derivative();
    long q = p.get_si();
    for (long r0 = 0; r0 < q; ++r0) {
        Int r(r0);
        if (detail::eval_mod(f, r, p) != 0) continue;
        if (detail::eval_mod(df, r, p) == 0) {
            out.unsupported = true;
            out.note += (out.note.empty() ? "" : "; ");
            out.note += "non-simple reduced root " + r.get_str() + " mod " + p.get_str();
            continue;
        }
        out.roots.push_back(PadicRoot{detail::newton_lift(f, df, p, r, precision), precision, false});
    }
    // negative-valuation roots: zero root of the reversed polynomial
    if (f.lead() % p == 0) {
        IntPolynomial rev = f.reversed();
        IntPolynomial drev = rev.derivative();
        if (detail::eval_mod(rev, Int(0), p) == 0) {
            if (detail::eval_mod(drev, Int(0), p) == 0) {
                out.unsupported = true;
                out.note += (out.note.empty() ? "" : "; ");
                out.note += "non-simple reciprocal root mod " + p.get_str();
            } else {
                out.roots.push_back(
                    PadicRoot{detail::newton_lift(rev, drev, p, Int(0), precision), precision, true});
            }
        }
    }
    return out;
}

} // namespace arithdyn

#endif
