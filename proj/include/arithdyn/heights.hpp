#ifndef ARITHDYN_HEIGHTS_HPP
#define ARITHDYN_HEIGHTS_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "arithdyn/errors.hpp"
#include "arithdyn/green.hpp"
#include "arithdyn/integer.hpp"
#include "arithdyn/local_heights.hpp"
#include "arithdyn/model.hpp"
#include "arithdyn/resultant.hpp"
#include "arithdyn/roots.hpp"

namespace arithdyn {

// log of the sup norm of the normalized coprime-integer representative
inline double naive_height(const ProjPoint& p) {
    Int m(0);
    for (const auto& c : p.c) m = std::max(m, abs_int(c));
    return m == 1 ? 0.0 : log_int(m);
}

// A global height with its adelic decomposition.  The invariant
// value = arch + sum c_p log p holds within error_bound.
struct HeightValue {
    double value;
    double error_bound;
    double arch;
    FormalLogSum finite;
};

namespace detail {

// |increment of log sup-norm| is bounded on the unit sphere by C_arch;
// exact in dimension one via Bezout cofactors, a padded sample estimate
// otherwise (heights above dimension one carry estimated bounds).
inline double arch_increment_bound(const MapModel& m) {
    double bplus = 0;
    for (const auto& f : m.lift) {
        double rowsum = 0;
        for (const auto& [e, c] : f.terms()) rowsum += std::abs(c.get_d());
        bplus = std::max(bplus, rowsum);
    }
    double logbp = std::log(std::max(bplus, 1.0));
    if (m.n == 1) {
        Rat M = bezout_cofactor_bound(m.lift[0], m.lift[1]);
        double logm = M > 1 ? log_rat(M) : 0.0;
        return std::max(logbp, logm);
    }
    // sample the unit sphere; padded by a margin since this is not certified
    double worst = 1e-9;
    for (int i = 0; i < 200; ++i) {
        std::vector<Cplx> x(m.n + 1);
        double t = 0.37 + 0.613 * i;
        for (int j = 0; j <= m.n; ++j)
            x[j] = Cplx(std::cos(t * (j + 1) + 0.3 * j), std::sin(t * (j + 2) - 0.17 * j));
        double nrm = sup_norm(x);
        for (auto& z : x) z /= nrm;
        double v = sup_norm(eval_lift_c(m, x));
        if (v > 0) worst = std::max(worst, std::abs(std::log(v)));
    }
    return 4.0 * std::max(logbp, worst);
}

struct Preperiod {
    bool found = false;
    int preperiod = 0, period = 0;
    std::vector<ProjPoint> orbit; // pre-cycle points then the cycle
};

// exact forward-orbit probe: preperiodic points have bounded height, so a
// small size cap suffices
inline Preperiod preperiodicity_probe(const MapModel& m, const ProjPoint& p, int max_steps = 64,
                                      size_t bit_cap = 768) {
    Preperiod out;
    std::map<ProjPoint, int> seen;
    ProjPoint x = p;
    for (int k = 0; k <= max_steps; ++k) {
        auto it = seen.find(x);
        if (it != seen.end()) {
            out.found = true;
            out.preperiod = it->second;
            out.period = k - it->second;
            return out;
        }
        seen.emplace(x, k);
        out.orbit.push_back(x);
        size_t bits = 0;
        for (const auto& c : x.c) bits = std::max(bits, mpz_sizeinbase(c.get_mpz_t(), 2));
        if (bits > bit_cap) return out; // height grows: not preperiodic
        x = apply_map(m, x);
    }
    return out;
}

} // namespace detail

// Canonical height of a rational point by exact adelic orbit iteration: the
// archimedean escape sum runs at 256-bit precision, the finite places run
// per bad prime on the residue engine, and exactly recognized preperiodic
// points return zero.
inline HeightValue canonical_height_point(const MapModel& m, const ProjPoint& point,
                                          double target_error = 1e-9,
                                          const ReductionReport* cached_reduction = nullptr) {
    if (target_error <= 0) throw validation_error("target_error must be positive");
    HeightValue out{0, 0, 0, {}};
    const int d = m.d;
    const double u0 = naive_height(point);

    ReductionReport local_red;
    if (!cached_reduction) {
        local_red = bad_reduction_primes(m);
        cached_reduction = &local_red;
    }

    // preperiodic points: canonical height is exactly zero; the adelic
    // decomposition comes from the cycle pattern
    auto probe = detail::preperiodicity_probe(m, point);
    if (probe.found) {
        out.value = 0.0;
        out.error_bound = 1e-12;
        // arch part: pre-cycle increments plus the geometric cycle sum
        const int j0 = probe.preperiod, L = probe.period;
        std::vector<double> arch_inc;
        std::map<Int, std::vector<long>> drops;
        for (int k = 0; k < j0 + L; ++k) {
            const ProjPoint& x = probe.orbit[k];
            auto img = m.eval_lift(x.c);
            Int g(0), mx(0);
            for (const auto& c : img) g = gcd(g, c);
            for (const auto& c : img) mx = std::max(mx, abs_int(c));
            Int xmax(0);
            for (const auto& c : x.c) xmax = std::max(xmax, abs_int(c));
            Int xpow(1);
            for (int i = 0; i < d; ++i) xpow *= xmax;
            arch_inc.push_back(log_rat(Rat(mx, xpow)));
            for (const auto& [p, mult] : cached_reduction->bad_primes)
                drops[p].push_back(valuation(p, g).value());
        }
        double arch = u0, w = 1.0;
        for (int k = 0; k < j0; ++k) {
            w /= d;
            arch += w * arch_inc[k];
        }
        double cyc = 0, wc = w;
        for (int i = 0; i < L; ++i) {
            wc /= d;
            cyc += wc * arch_inc[j0 + i];
        }
        double dl = std::pow(double(d), L);
        arch += cyc * dl / (dl - 1);
        out.arch = arch;
        for (const auto& [p, s] : drops) {
            Rat hp = detail::geometric_limit(s, j0, L, d);
            if (hp != 0) out.finite.set_term(p, Rat(-hp), true, 0.0);
        }
        return out;
    }

    // finite places: one residue orbit per bad prime
    double finite_val = 0, finite_err = 0;
    for (const auto& [p, mult] : cached_reduction->bad_primes) {
        double lp = log_int(p);
        Rat tol(1, 1);
        {
            // target/2 split across primes, converted to valuation units
            double t = target_error / (2.0 * cached_reduction->bad_primes.size() * lp);
            tol = Rat(1, 1 + static_cast<long>(1.0 / std::max(t, 1e-14)));
        }
        auto h = finite_local_height(m, p, point, tol);
        Rat c = h.exact ? h.exact_value : Rat((h.lower_bound + h.upper_bound) / 2);
        c.canonicalize();
        out.finite.set_term(p, Rat(-c), h.exact, to_double(h.width()) / 2);
        finite_val -= to_double(c) * lp;
        finite_err += to_double(h.width()) / 2 * lp;
    }
    if (cached_reduction->unfactored_cofactor != 1)
        throw capability_error("cannot certify finite places: resultant has an unfactored part");

    // archimedean escape sum at extended precision
    const double C = detail::arch_increment_bound(m);
    int depth = 4;
    if (C > 0) {
        double need = std::log(std::max(2 * C / ((d - 1) * (target_error / 2)), 1.0)) /
                      std::log(double(d));
        depth = std::max(4, static_cast<int>(std::ceil(need)) + 1);
    }
    const int bits = 256;
    std::vector<detail::CNum<mpf_class>> x;
    {
        Int mx(0);
        for (const auto& c : point.c) mx = std::max(mx, abs_int(c));
        for (const auto& c : point.c)
            x.emplace_back(mpf_class(mpf_class(c, bits) / mpf_class(mx, bits), bits),
                           mpf_class(0, bits));
    }
    double arch = u0, weight = 1.0;
    for (int k = 0; k < depth; ++k) {
        std::vector<detail::CNum<mpf_class>> img(m.lift.size());
        for (size_t i = 0; i < m.lift.size(); ++i)
            img[i] = m.lift[i].eval_with<detail::CNum<mpf_class>>(
                x, [&](const Int& c) {
                    return detail::CNum<mpf_class>(mpf_class(c, bits), mpf_class(0, bits));
                });
        mpf_class n2(0, bits);
        for (const auto& z : img)
            if (z.norm2() > n2) n2 = z.norm2();
        weight /= d;
        if (n2 != 1) arch += weight * 0.5 * detail::r_log(n2);
        mpf_class n(sqrt(n2));
        for (auto& z : img) {
            z.re /= n;
            z.im /= n;
        }
        x = std::move(img);
    }
    double arch_tail = C * std::pow(double(d), -depth) / (d - 1);

    out.arch = arch;
    out.value = arch + finite_val;
    out.error_bound = arch_tail + finite_err + 1e-14;
    return out;
}

// ---- divisors ---------------------------------------------------------------

// G(Y0,Y1) = Res_x(F, Y1 p0 - Y0 p1): the binary form whose roots are the
// images of the roots of F, with multiplicity.  Computed by exact
// interpolation of the parameterized Sylvester determinant.
inline HomogeneousForm pushforward_divisor(const MapModel& m, const HomogeneousForm& F) {
    if (m.n != 1) throw capability_error("divisor pushforward is implemented on P^1");
    if (F.is_zero() || F.num_vars() != 2) throw validation_error("need a nonzero binary form");
    const int md = F.degree();
    const int d = m.d;
    auto fc = F.binary_coeffs();
    auto c0 = m.lift[0].binary_coeffs();
    auto c1 = m.lift[1].binary_coeffs();
    // g(t) = Res(F, p0 - t p1), degree <= deg F; sample at t = 0..deg F
    std::vector<Rat> samples(md + 1);
    for (int t = 0; t <= md; ++t) {
        std::vector<Int> pencil(d + 1);
        for (int i = 0; i <= d; ++i) pencil[i] = c0[i] - t * c1[i];
        samples[t] = Rat(sylvester_resultant_coeffs(fc, md, pencil, d));
    }
    // Newton divided differences, then monomial coefficients
    std::vector<Rat> dd = samples;
    for (int j = 1; j <= md; ++j)
        for (int i = md; i >= j; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / Rat(j);
            dd[i].canonicalize();
        }
    std::vector<Rat> coeff(md + 1, Rat(0));
    std::vector<Rat> basis{Rat(1)}; // prod (t - i)
    for (int j = 0; j <= md; ++j) {
        for (size_t i = 0; i < basis.size(); ++i) coeff[i] += dd[j] * basis[i];
        if (j < md) {
            basis.push_back(Rat(0));
            for (size_t i = basis.size() - 1; i > 0; --i)
                basis[i] = basis[i - 1] - Rat(j) * basis[i];
            basis[0] = Rat(-j) * basis[0];
        }
    }
    std::vector<Int> out(md + 1);
    bool all_zero = true;
    for (int i = 0; i <= md; ++i) {
        coeff[i].canonicalize();
        if (coeff[i].get_den() != 1) throw numeric_error("pushforward interpolation not integral");
        out[i] = coeff[i].get_num();
        all_zero = all_zero && out[i] == 0;
    }
    if (all_zero) throw numeric_error("pushforward collapsed to zero");
    HomogeneousForm G = HomogeneousForm::from_binary_coeffs(out).primitive_part();
    // sign normalization: highest first-variable coefficient positive
    auto bc = G.binary_coeffs();
    for (int i = md; i >= 0; --i)
        if (bc[i] != 0) {
            if (bc[i] < 0) G = Int(-1) * G;
            break;
        }
    return G;
}

// Canonical height of the zero divisor of F (orbit-sum convention: the sum
// of canonical heights over the points of D with multiplicity, no 1/deg F).
// Iterates the pushforward and evaluates static heights by Mahler measure;
// the tail is certified by the uniform height-increment bound.  A Y1 factor
// of the form puts the point at infinity into D.
inline HeightValue canonical_height_divisor(const MapModel& m, const HomogeneousForm& Fbin,
                                            int depth = 10, long coeff_bit_budget = 6000000) {
    if (m.n != 1) throw capability_error("divisor heights are implemented on P^1");
    if (Fbin.is_zero() || Fbin.num_vars() != 2)
        throw validation_error("need a nonzero binary form");
    if (Fbin.content() != 1) throw validation_error("divisor heights expect a primitive form");
    const int d = m.d;
    const int md = Fbin.degree();
    HeightValue out{0, 0, 0, {}};
    if (md == 0) {
        out.error_bound = 0;
        return out; // constant units carry the empty divisor
    }

    auto reduction = bad_reduction_primes(m);
    double C = detail::arch_increment_bound(m);
    for (const auto& [p, mult] : reduction.bad_primes) C += mult * log_int(p);

    HomogeneousForm G = Fbin;
    int k = 0;
    for (; k < depth; ++k) {
        if (C * md * std::pow(double(d), -k) / (d - 1) < 1e-12) break; // converged exactly
        size_t bits = 0;
        for (const auto& [e, c] : G.terms())
            bits += mpz_sizeinbase(c.get_mpz_t(), 2);
        if (static_cast<long>(bits) > coeff_bit_budget)
            throw capability_error("pushforward coefficients exceed the bit budget");
        G = pushforward_divisor(m, G);
    }
    double mg = mahler_measure_big(G.dehomogenize());
    out.value = mg / std::pow(double(d), k);
    out.error_bound = md * C * std::pow(double(d), -k) / (d - 1) + 1e-10;

    // adelic decomposition, best effort: escape-rate sums for the
    // archimedean part, reachable root masses for the finite places
    IntPolynomial fin = Fbin.dehomogenize();
    int inf_mult = md - fin.degree();
    double arch = log_int(abs_int(fin.lead()));
    if (fin.degree() >= 1)
        for (const auto& r : complex_roots(fin, 1e-10))
            arch += green_value(m, {Cplx(r), Cplx(1, 0)}, 40).value;
    if (inf_mult > 0)
        arch += inf_mult * green_value(m, {Cplx(1, 0), Cplx(0, 0)}, 40).value;
    out.arch = arch;
    double finite = 0;
    for (const auto& [p, mult] : reduction.bad_primes) {
        auto mass = divisor_root_mass(m, Fbin, p, Rat(1, 100000000));
        Rat c = -mass.mass;
        out.finite.set_term(p, c, mass.exact && mass.missing == 0, mass.err);
        finite += to_double(c) * log_int(p);
    }
    // the decomposition is informational; widen the bound if it disagrees
    double gap = std::abs(out.value - (arch + finite));
    if (gap > out.error_bound) out.error_bound = gap + 1e-9;
    return out;
}

inline HeightValue canonical_height_divisor(const MapModel& m, const IntPolynomial& F,
                                            int depth = 10, long coeff_bit_budget = 6000000) {
    if (F.is_zero()) throw validation_error("zero polynomial has no zero divisor");
    if (F.degree() < 1) {
        if (abs_int(F[0]) != 1) throw validation_error("divisor heights expect a primitive form");
        return HeightValue{0, 0, 0, {}};
    }
    return canonical_height_divisor(m, HomogeneousForm::homogenize(F), depth, coeff_bit_budget);
}

// Independent oracle for split divisors: the multiplicity-weighted sum of
// point heights.
inline HeightValue canonical_height_divisor_split(
    const MapModel& m, const std::vector<std::pair<ProjPoint, int>>& roots,
    double target_error = 1e-9) {
    HeightValue out{0, 0, 0, {}};
    ReductionReport red = bad_reduction_primes(m);
    std::map<Int, std::pair<Rat, bool>> acc;
    std::map<Int, double> accerr;
    for (const auto& [pt, mult] : roots) {
        auto h = canonical_height_point(m, pt, target_error / std::max<size_t>(roots.size(), 1),
                                        &red);
        out.value += mult * h.value;
        out.arch += mult * h.arch;
        out.error_bound += mult * h.error_bound;
        for (const auto& [p, t] : h.finite.terms) {
            auto& slot = acc.emplace(p, std::make_pair(Rat(0), true)).first->second;
            slot.first += mult * t.c;
            slot.second = slot.second && t.exact;
            accerr[p] += mult * t.error_bound;
        }
    }
    for (auto& [p, slot] : acc) out.finite.set_term(p, slot.first, slot.second, accerr[p]);
    return out;
}

} // namespace arithdyn

#endif
