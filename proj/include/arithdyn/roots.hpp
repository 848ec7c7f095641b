#ifndef ARITHDYN_ROOTS_HPP
#define ARITHDYN_ROOTS_HPP

#include <algorithm>
#include <climits>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "arithdyn/errors.hpp"
#include "arithdyn/integer.hpp"
#include "arithdyn/polynomial.hpp"

namespace arithdyn {

namespace detail {

// minimal complex type over a configurable real scalar (double for the fast
// path, mpf_class when coefficients outgrow IEEE range)
template <class R>
struct CNum {
    R re, im;
    CNum() : re(0), im(0) {}
    CNum(R r, R i) : re(std::move(r)), im(std::move(i)) {}
    friend CNum operator+(const CNum& a, const CNum& b) { return {R(a.re + b.re), R(a.im + b.im)}; }
    friend CNum operator-(const CNum& a, const CNum& b) { return {R(a.re - b.re), R(a.im - b.im)}; }
    friend CNum operator*(const CNum& a, const CNum& b) {
        return {R(a.re * b.re - a.im * b.im), R(a.re * b.im + a.im * b.re)};
    }
    friend CNum operator/(const CNum& a, const CNum& b) {
        R d = b.re * b.re + b.im * b.im;
        return {R((a.re * b.re + a.im * b.im) / d), R((a.im * b.re - a.re * b.im) / d)};
    }
    R norm2() const { return R(re * re + im * im); }
};

inline double r_sqrt(double x) { return std::sqrt(x); }
inline mpf_class r_sqrt(const mpf_class& x) { return sqrt(x); }

inline double r_log(double x) { return std::log(x); }
inline double r_log(const mpf_class& x) {
    signed long e;
    double m = mpf_get_d_2exp(&e, x.get_mpf_t());
    return std::log(m) + static_cast<double>(e) * std::log(2.0);
}

inline double r_to_double(double x) { return x; }
inline double r_to_double(const mpf_class& x) { return x.get_d(); }

template <class R>
R cnum_abs(const CNum<R>& z) {
    return r_sqrt(R(z.re * z.re + z.im * z.im));
}

template <class R>
CNum<R> horner(const std::vector<CNum<R>>& c, const CNum<R>& z) {
    CNum<R> r = c.back();
    for (size_t i = c.size() - 1; i-- > 0;) r = r * z + c[i];
    return r;
}

// Aberth-Ehrlich simultaneous iteration with a fixed deterministic start:
// points on a circle of Cauchy-bound radius, angles staggered off the real
// axis.  Returns roots unsorted; throws numeric_error on non-convergence.
template <class R>
std::vector<CNum<R>> aberth(const std::vector<CNum<R>>& coeffs, double rel_tol, int max_iter,
                            double* achieved = nullptr) {
    const int n = static_cast<int>(coeffs.size()) - 1;
    if (n < 1) throw validation_error("aberth: degree must be >= 1");
    std::vector<CNum<R>> dc(n);
    for (int i = 1; i <= n; ++i) dc[i - 1] = CNum<R>(R(coeffs[i].re * i), R(coeffs[i].im * i));

    // Cauchy bound: 1 + max |c_i| / |c_n|
    R lead = cnum_abs(coeffs[n]);
    if (r_to_double(lead) == 0.0) throw validation_error("aberth: zero leading coefficient");
    R rho(1);
    for (int i = 0; i < n; ++i) {
        R q = cnum_abs(coeffs[i]) / lead;
        if (q > rho) rho = q;
    }
    rho = rho + R(1);

    std::vector<CNum<R>> z(n);
    constexpr double two_pi = 6.283185307179586476925286766559;
    for (int j = 0; j < n; ++j) {
        double th = two_pi * (j + 0.25) / n + 0.42 * (j + 1) / (n * n + 1.0);
        z[j] = CNum<R>(R(rho * R(std::cos(th))), R(rho * R(std::sin(th))));
    }

    double worst = 0;
    for (int it = 0; it < max_iter; ++it) {
        worst = 0;
        for (int j = 0; j < n; ++j) {
            CNum<R> p = horner(coeffs, z[j]);
            if (r_to_double(p.norm2()) == 0.0) continue;
            CNum<R> dp = n > 0 ? horner(dc, z[j]) : CNum<R>();
            if (r_to_double(dp.norm2()) == 0.0) {
                z[j] = z[j] + CNum<R>(R(1e-7 * (j + 1)), R(2.3e-7 * (j + 1)));
                worst = 1;
                continue;
            }
            CNum<R> nr = p / dp;
            CNum<R> s;
            bool collision = false;
            for (int k = 0; k < n; ++k) {
                if (k == j) continue;
                CNum<R> diff = z[j] - z[k];
                if (r_to_double(diff.norm2()) == 0.0) {
                    collision = true;
                    break;
                }
                s = s + CNum<R>(R(1), R(0)) / diff;
            }
            if (collision) {
                z[j] = z[j] + CNum<R>(R(1e-7 * (j + 1)), R(-1.7e-7 * (j + 3)));
                worst = 1;
                continue;
            }
            CNum<R> denom = CNum<R>(R(1), R(0)) - nr * s;
            CNum<R> w = r_to_double(denom.norm2()) == 0.0 ? nr : nr / denom;
            z[j] = z[j] - w;
            double scale = std::max(1.0, r_to_double(cnum_abs(z[j])));
            worst = std::max(worst, r_to_double(cnum_abs(w)) / scale);
        }
        if (worst <= rel_tol) {
            if (achieved) *achieved = worst;
            return z;
        }
    }
    if (achieved) {
        *achieved = worst;
        return z;
    }
    throw numeric_error("root finder did not converge; last correction " + dec_str(worst, 3));
}

// integer coefficients -> doubles with a common power-of-two recentering (the
// scaling does not move roots)
inline std::vector<CNum<double>> to_double_coeffs(const IntPolynomial& f) {
    long max_exp = LONG_MIN;
    for (const auto& c : f.coeffs()) {
        if (c == 0) continue;
        signed long e;
        mpz_get_d_2exp(&e, c.get_mpz_t());
        max_exp = std::max(max_exp, static_cast<long>(e));
    }
    std::vector<CNum<double>> out(f.coeffs().size());
    for (size_t i = 0; i < f.coeffs().size(); ++i) {
        const Int& c = f.coeffs()[i];
        if (c == 0) continue;
        signed long e;
        double m = mpz_get_d_2exp(&e, c.get_mpz_t());
        out[i] = CNum<double>(std::ldexp(m, static_cast<int>(e - max_exp)), 0.0);
    }
    return out;
}

} // namespace detail

// All complex roots with multiplicity, sorted lexicographically by
// (real, imaginary).  Deterministic: fixed initial configuration, no RNG.
inline std::vector<std::complex<double>> complex_roots(const IntPolynomial& f, double tolerance) {
    if (f.degree() < 1) throw validation_error("complex_roots: degree must be >= 1");
    auto [core, zeros] = f.strip_zero_roots();
    std::vector<std::complex<double>> roots(zeros, std::complex<double>(0.0, 0.0));
    if (core.degree() >= 1) {
        double tol = tolerance / (2.0 * (f.degree() + 1));
        for (const auto& [factor, mult] : squarefree_decomposition(core)) {
            auto cs = detail::to_double_coeffs(factor);
            auto zs = detail::aberth(cs, tol, 80 + 40 * factor.degree());
            for (const auto& z : zs)
                for (int m = 0; m < mult; ++m) roots.emplace_back(z.re, z.im);
        }
    }
    std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    if (static_cast<int>(roots.size()) != f.degree())
        throw numeric_error("complex_roots: root count mismatch");
    return roots;
}

// log Mahler measure (nats): log|lead| plus log+ of every complex root.
// The reported error bound is the requested tolerance.
struct MahlerValue {
    double value;
    double error_bound;
};

inline MahlerValue mahler_measure(const IntPolynomial& f, double tolerance) {
    if (f.is_zero()) throw validation_error("mahler_measure of zero polynomial");
    double m = log_int(abs_int(f.lead()));
    if (f.degree() >= 1) {
        for (const auto& z : complex_roots(f, tolerance / 2)) {
            double a = std::hypot(z.real(), z.imag());
            if (a > 1.0) m += std::log(a);
        }
    }
    return {m, tolerance};
}

// High-precision Mahler measure for polynomials whose coefficients exceed
// IEEE range (pushforward chains).  Multiplicities are not separated; the
// simultaneous iteration still lands each copy on its root.
inline double mahler_measure_big(const IntPolynomial& f, int prec_bits = 192) {
    if (f.is_zero()) throw validation_error("mahler_measure of zero polynomial");
    double m = log_int(abs_int(f.lead()));
    auto [core, zeros] = f.strip_zero_roots();
    (void)zeros; // roots at the origin contribute log+ = 0
    if (core.degree() < 1) return m;
    std::vector<detail::CNum<mpf_class>> cs(core.coeffs().size());
    for (size_t i = 0; i < cs.size(); ++i)
        cs[i] = detail::CNum<mpf_class>(mpf_class(core.coeffs()[i], prec_bits),
                                        mpf_class(0, prec_bits));
    double achieved = 0;
    auto zs = detail::aberth(cs, 1e-30, 600, &achieved);
    if (achieved > 1e-12)
        throw numeric_error("high-precision root finder stalled at correction " +
                            dec_str(achieved, 3));
    for (const auto& z : zs) {
        mpf_class a2 = z.norm2();
        if (a2 > 1) m += 0.5 * detail::r_log(a2);
    }
    return m;
}

} // namespace arithdyn

#endif
