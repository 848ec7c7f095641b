#ifndef ARITHDYN_POLYNOMIAL_HPP
#define ARITHDYN_POLYNOMIAL_HPP

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "arithdyn/errors.hpp"
#include "arithdyn/integer.hpp"

namespace arithdyn {

// Univariate polynomial over Z, dense, index = exponent.  The zero
// polynomial has an empty coefficient vector; otherwise the leading
// coefficient is nonzero.
class IntPolynomial {
  public:
    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<Int> coeffs) : c_(std::move(coeffs)) { trim(); }
    static IntPolynomial constant(const Int& a) {
        return a == 0 ? IntPolynomial() : IntPolynomial(std::vector<Int>{a});
    }
    static IntPolynomial monomial(const Int& a, int k) {
        if (a == 0) return IntPolynomial();
        std::vector<Int> v(k + 1, Int(0));
        v[k] = a;
        return IntPolynomial(std::move(v));
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero
    const std::vector<Int>& coeffs() const { return c_; }
    const Int& operator[](size_t i) const {
        static const Int zero(0);
        return i < c_.size() ? c_[i] : zero;
    }
    const Int& lead() const {
        if (is_zero()) throw validation_error("leading coefficient of zero polynomial");
        return c_.back();
    }

    friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
        std::vector<Int> r(std::max(a.c_.size(), b.c_.size()), Int(0));
        for (size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
        return IntPolynomial(std::move(r));
    }
    friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) {
        std::vector<Int> r(std::max(a.c_.size(), b.c_.size()), Int(0));
        for (size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
        return IntPolynomial(std::move(r));
    }
    friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
        if (a.is_zero() || b.is_zero()) return IntPolynomial();
        std::vector<Int> r(a.c_.size() + b.c_.size() - 1, Int(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return IntPolynomial(std::move(r));
    }
    friend IntPolynomial operator*(const Int& s, const IntPolynomial& a) {
        if (s == 0) return IntPolynomial();
        std::vector<Int> r = a.c_;
        for (auto& x : r) x *= s;
        return IntPolynomial(std::move(r));
    }
    friend bool operator==(const IntPolynomial& a, const IntPolynomial& b) {
        return a.c_ == b.c_;
    }

    IntPolynomial derivative() const {
        if (degree() < 1) return IntPolynomial();
        std::vector<Int> r(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = Int(static_cast<long>(i)) * c_[i];
        return IntPolynomial(std::move(r));
    }

    Int eval(const Int& x) const {
        Int r(0);
        for (size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
        return r;
    }
    Rat eval(const Rat& x) const {
        Rat r(0);
        for (size_t i = c_.size(); i-- > 0;) r = r * x + Rat(c_[i]);
        return r;
    }
    // Homogeneous evaluation F(a, b) with F treated as a binary form of the
    // given degree (>= deg F); extra weight goes to the second slot.
    Int eval_homogeneous(const Int& a, const Int& b, int form_degree) const {
        if (form_degree < degree())
            throw validation_error("homogenization degree below polynomial degree");
        Int r(0), bp(1);
        std::vector<Int> apow(form_degree + 1);
        apow[0] = 1;
        for (int i = 1; i <= form_degree; ++i) apow[i] = apow[i - 1] * a;
        for (int i = form_degree; i >= 0; --i) {
            if (i <= degree() && (*this)[i] != 0) r += (*this)[i] * apow[i] * bp;
            bp *= b;
        }
        return r;
    }

    // content/primitive part; content of the zero polynomial is rejected
    Int content() const {
        if (is_zero()) throw validation_error("content of zero polynomial");
        Int g(0);
        for (const auto& x : c_) g = gcd(g, x);
        return g;
    }
    IntPolynomial primitive_part() const {
        Int g = content();
        std::vector<Int> r = c_;
        for (auto& x : r) x /= g;
        return IntPolynomial(std::move(r));
    }

    IntPolynomial reversed() const {
        std::vector<Int> r(c_.rbegin(), c_.rend());
        return IntPolynomial(std::move(r));
    }

    // count and strip roots at zero
    std::pair<IntPolynomial, int> strip_zero_roots() const {
        if (is_zero()) return {*this, 0};
        size_t k = 0;
        while (k < c_.size() && c_[k] == 0) ++k;
        std::vector<Int> r(c_.begin() + k, c_.end());
        return {IntPolynomial(std::move(r)), static_cast<int>(k)};
    }

    std::string str(const std::string& var = "x") const {
        if (is_zero()) return "0";
        std::string s;
        for (int i = degree(); i >= 0; --i) {
            const Int& a = (*this)[i];
            if (a == 0) continue;
            if (!s.empty()) s += a > 0 ? " + " : " - ";
            else if (a < 0) s += "-";
            Int m = abs_int(a);
            if (m != 1 || i == 0) s += m.get_str();
            if (i > 0) {
                if (m != 1) s += "*";
                s += var;
                if (i > 1) s += "^" + std::to_string(i);
            }
        }
        return s;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Int> c_;
};

namespace detail {

// Rational polynomials, internal only: gcd chains and exact division for
// squarefree decomposition.
using RatPoly = std::vector<Rat>;

inline void rp_trim(RatPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}
inline RatPoly rp_from(const IntPolynomial& f) {
    RatPoly r(f.coeffs().size());
    for (size_t i = 0; i < r.size(); ++i) r[i] = Rat(f.coeffs()[i]);
    return r;
}
inline RatPoly rp_sub_scaled(const RatPoly& a, const RatPoly& b, const Rat& s, int shift) {
    RatPoly r = a;
    if (r.size() < b.size() + shift) r.resize(b.size() + shift, Rat(0));
    for (size_t i = 0; i < b.size(); ++i) r[i + shift] -= s * b[i];
    rp_trim(r);
    return r;
}
// division with remainder over Q
inline std::pair<RatPoly, RatPoly> rp_divmod(const RatPoly& a, const RatPoly& b) {
    if (b.empty()) throw validation_error("polynomial division by zero");
    RatPoly q, r = a;
    rp_trim(r);
    if (r.size() >= b.size()) q.assign(r.size() - b.size() + 1, Rat(0));
    while (r.size() >= b.size() && !r.empty()) {
        Rat s = r.back() / b.back();
        int shift = static_cast<int>(r.size() - b.size());
        q[shift] = s;
        r = rp_sub_scaled(r, b, s, shift);
        if (!r.empty() && r.size() >= b.size() && r.back() == 0) rp_trim(r);
    }
    rp_trim(q);
    return {q, r};
}
inline RatPoly rp_gcd(RatPoly a, RatPoly b) {
    rp_trim(a);
    rp_trim(b);
    while (!b.empty()) {
        auto [q, r] = rp_divmod(a, b);
        (void)q;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) { // monic normalization
        Rat l = a.back();
        for (auto& x : a) x /= l;
    }
    return a;
}
inline RatPoly rp_derivative(const RatPoly& a) {
    if (a.size() < 2) return {};
    RatPoly r(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i) r[i - 1] = Rat(static_cast<long>(i)) * a[i];
    return r;
}
inline IntPolynomial rp_to_primitive_int(const RatPoly& a) {
    if (a.empty()) return IntPolynomial();
    Int den(1);
    for (const auto& x : a) den = lcm(den, Int(x.get_den()));
    std::vector<Int> c(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        Rat t = a[i] * Rat(den);
        t.canonicalize();
        c[i] = Int(t.get_num());
    }
    return IntPolynomial(std::move(c)).primitive_part();
}

} // namespace detail

// exact gcd over Z (primitive): zero iff both zero
inline IntPolynomial poly_gcd(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.is_zero()) return b.is_zero() ? a : b.primitive_part();
    if (b.is_zero()) return a.primitive_part();
    auto g = detail::rp_gcd(detail::rp_from(a), detail::rp_from(b));
    return detail::rp_to_primitive_int(g);
}

// Yun squarefree decomposition of a nonzero polynomial: f = content * prod
// f_i^i with each returned (f_i, i); f_i primitive squarefree, pairwise
// coprime, deg f_i possibly zero entries omitted.
inline std::vector<std::pair<IntPolynomial, int>> squarefree_decomposition(const IntPolynomial& f) {
    if (f.is_zero()) throw validation_error("squarefree decomposition of zero");
    std::vector<std::pair<IntPolynomial, int>> out;
    if (f.degree() == 0) return out;
    using namespace detail;
    RatPoly a = rp_from(f.primitive_part());
    RatPoly da = rp_derivative(a);
    RatPoly g = rp_gcd(a, da);
    RatPoly w = rp_divmod(a, g).first;
    RatPoly y = rp_divmod(da, g).first;
    int i = 1;
    while (w.size() > 1) {
        if (i > f.degree() + 1) throw numeric_error("squarefree decomposition did not terminate");
        // z = y - w'
        RatPoly dw = rp_derivative(w);
        RatPoly z = y;
        if (z.size() < dw.size()) z.resize(dw.size(), Rat(0));
        for (size_t k = 0; k < dw.size(); ++k) z[k] -= dw[k];
        rp_trim(z);
        RatPoly fi = rp_gcd(w, z);
        if (fi.size() > 1) out.emplace_back(rp_to_primitive_int(fi), i);
        w = rp_divmod(w, fi).first;
        y = rp_divmod(z, fi).first;
        ++i;
    }
    return out;
}

} // namespace arithdyn

#endif
