#ifndef ARITHDYN_FORM_HPP
#define ARITHDYN_FORM_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "arithdyn/errors.hpp"
#include "arithdyn/integer.hpp"
#include "arithdyn/polynomial.hpp"

namespace arithdyn {

// Homogeneous form over Z: sparse exponent-vector -> coefficient map.
// Every stored exponent vector has length num_vars and entries summing to
// degree; zero coefficients are never stored.
class HomogeneousForm {
  public:
    using Expo = std::vector<unsigned>;
    using Terms = std::map<Expo, Int>;

    HomogeneousForm(int num_vars, int degree) : n_(num_vars), d_(degree) {
        if (num_vars < 1 || degree < 0) throw validation_error("bad form dimensions");
    }

    static HomogeneousForm monomial(int num_vars, const Expo& e, const Int& c) {
        unsigned d = 0;
        for (unsigned x : e) d += x;
        HomogeneousForm f(num_vars, static_cast<int>(d));
        f.add_term(e, c);
        return f;
    }

    int num_vars() const { return n_; }
    int degree() const { return d_; }
    bool is_zero() const { return t_.empty(); }
    const Terms& terms() const { return t_; }

    void add_term(const Expo& e, const Int& c) {
        if (c == 0) return;
        check_expo(e);
        auto it = t_.find(e);
        if (it == t_.end()) {
            t_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second == 0) t_.erase(it);
        }
    }

    friend HomogeneousForm operator+(const HomogeneousForm& a, const HomogeneousForm& b) {
        a.check_compatible(b);
        HomogeneousForm r = a;
        for (const auto& [e, c] : b.t_) r.add_term(e, c);
        return r;
    }
    friend HomogeneousForm operator-(const HomogeneousForm& a, const HomogeneousForm& b) {
        a.check_compatible(b);
        HomogeneousForm r = a;
        for (const auto& [e, c] : b.t_) r.add_term(e, Int(-c));
        return r;
    }
    friend HomogeneousForm operator*(const HomogeneousForm& a, const HomogeneousForm& b) {
        if (a.n_ != b.n_) throw validation_error("form variable count mismatch");
        HomogeneousForm r(a.n_, a.d_ + b.d_);
        for (const auto& [ea, ca] : a.t_)
            for (const auto& [eb, cb] : b.t_) {
                Expo e(ea);
                for (int i = 0; i < a.n_; ++i) e[i] += eb[i];
                r.add_term(e, ca * cb);
            }
        return r;
    }
    friend HomogeneousForm operator*(const Int& s, const HomogeneousForm& a) {
        HomogeneousForm r(a.n_, a.d_);
        if (s != 0)
            for (const auto& [e, c] : a.t_) r.t_.emplace(e, s * c);
        return r;
    }
    friend bool operator==(const HomogeneousForm& a, const HomogeneousForm& b) {
        return a.n_ == b.n_ && a.d_ == b.d_ && a.t_ == b.t_;
    }

    HomogeneousForm pow(int k) const {
        HomogeneousForm r(n_, 0);
        r.add_term(Expo(n_, 0), Int(1));
        HomogeneousForm base = *this;
        while (k > 0) {
            if (k & 1) r = r * base;
            base = base * base;
            k >>= 1;
        }
        return r;
    }

    // substitution: evaluate this form at a vector of forms of equal degree
    HomogeneousForm compose(const std::vector<HomogeneousForm>& args) const {
        if (static_cast<int>(args.size()) != n_)
            throw validation_error("composition arity mismatch");
        int ad = args[0].degree();
        for (const auto& g : args)
            if (g.degree() != ad || g.num_vars() != args[0].num_vars())
                throw validation_error("composition arguments must share degree and arity");
        HomogeneousForm r(args[0].num_vars(), d_ * ad);
        for (const auto& [e, c] : t_) {
            HomogeneousForm term(args[0].num_vars(), 0);
            term.add_term(Expo(args[0].num_vars(), 0), c);
            for (int i = 0; i < n_; ++i)
                if (e[i] > 0) term = term * args[i].pow(static_cast<int>(e[i]));
            r = r + term;
        }
        return r;
    }

    template <class Ring, class Conv>
    Ring eval_with(const std::vector<Ring>& x, Conv conv) const {
        if (static_cast<int>(x.size()) != n_) throw validation_error("evaluation arity mismatch");
        Ring r = conv(Int(0));
        for (const auto& [e, c] : t_) {
            Ring term = conv(c);
            for (int i = 0; i < n_; ++i)
                for (unsigned k = 0; k < e[i]; ++k) term = term * x[i];
            r = r + term;
        }
        return r;
    }
    Int eval(const std::vector<Int>& x) const {
        return eval_with<Int>(x, [](const Int& c) { return c; });
    }

    Int content() const {
        if (is_zero()) throw validation_error("content of zero form");
        Int g(0);
        for (const auto& [e, c] : t_) g = gcd(g, c);
        return g;
    }
    HomogeneousForm primitive_part() const {
        Int g = content();
        HomogeneousForm r(n_, d_);
        for (const auto& [e, c] : t_) r.t_.emplace(e, Int(c / g));
        return r;
    }

    // set variable `var` to zero, keeping arity
    HomogeneousForm restrict_var_to_zero(int var) const {
        HomogeneousForm r(n_, d_);
        for (const auto& [e, c] : t_)
            if (e[var] == 0) r.t_.emplace(e, c);
        return r;
    }

    // drop a variable that no longer occurs
    HomogeneousForm drop_var(int var) const {
        HomogeneousForm r(n_ - 1, d_);
        for (const auto& [e, c] : t_) {
            if (e[var] != 0) throw validation_error("drop_var: variable still occurs");
            Expo f;
            f.reserve(n_ - 1);
            for (int i = 0; i < n_; ++i)
                if (i != var) f.push_back(e[i]);
            r.t_.emplace(std::move(f), c);
        }
        return r;
    }

    HomogeneousForm reduce_mod(const Int& p) const {
        HomogeneousForm r(n_, d_);
        for (const auto& [e, c] : t_) {
            Int m = c % p;
            if (m < 0) m += p;
            if (m != 0) r.t_.emplace(e, m);
        }
        return r;
    }

    // coefficient vector by first-variable exponent, binary forms only
    std::vector<Int> binary_coeffs() const {
        if (n_ != 2) throw validation_error("binary_coeffs on non-binary form");
        std::vector<Int> v(d_ + 1, Int(0));
        for (const auto& [e, c] : t_) v[e[0]] = c;
        return v;
    }
    static HomogeneousForm from_binary_coeffs(const std::vector<Int>& v) {
        int d = static_cast<int>(v.size()) - 1;
        HomogeneousForm r(2, d);
        for (int i = 0; i <= d; ++i)
            r.add_term({static_cast<unsigned>(i), static_cast<unsigned>(d - i)}, v[i]);
        return r;
    }

    // univariate polynomial in the first variable, second set to 1
    IntPolynomial dehomogenize() const {
        auto v = binary_coeffs();
        return IntPolynomial(std::move(v));
    }
    static HomogeneousForm homogenize(const IntPolynomial& f, int degree = -1) {
        if (f.is_zero()) throw validation_error("cannot homogenize zero polynomial");
        if (degree < 0) degree = f.degree();
        if (degree < f.degree()) throw validation_error("homogenization degree too small");
        HomogeneousForm r(2, degree);
        for (int i = 0; i <= f.degree(); ++i)
            r.add_term({static_cast<unsigned>(i), static_cast<unsigned>(degree - i)}, f[i]);
        return r;
    }

    std::string str(const std::vector<std::string>& vars) const {
        if (static_cast<int>(vars.size()) != n_) throw validation_error("variable list arity mismatch");
        if (t_.empty()) return "0";
        std::string s;
        // largest first-variable power first, matching the usual reading order
        for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
            const auto& [e, c] = *it;
            if (!s.empty()) s += c > 0 ? " + " : " - ";
            else if (c < 0) s += "-";
            Int m = abs_int(c);
            bool printed = false;
            bool all_zero = true;
            for (int i = 0; i < n_; ++i) all_zero = all_zero && e[i] == 0;
            if (m != 1 || all_zero) {
                s += m.get_str();
                printed = true;
            }
            for (int i = 0; i < n_; ++i) {
                if (e[i] == 0) continue;
                if (printed) s += "*";
                s += vars[i];
                if (e[i] > 1) s += "^" + std::to_string(e[i]);
                printed = true;
            }
        }
        return s;
    }

  private:
    void check_expo(const Expo& e) const {
        if (static_cast<int>(e.size()) != n_) throw validation_error("exponent arity mismatch");
        unsigned d = 0;
        for (unsigned x : e) d += x;
        if (static_cast<int>(d) != d_) throw validation_error("term degree mismatch");
    }
    void check_compatible(const HomogeneousForm& o) const {
        if (n_ != o.n_ || d_ != o.d_)
            throw validation_error("form degree or variable count mismatch");
    }

    int n_;
    int d_;
    Terms t_;
};

// joint content of a system of forms
inline Int joint_content(const std::vector<HomogeneousForm>& fs) {
    Int g(0);
    for (const auto& f : fs)
        for (const auto& [e, c] : f.terms()) g = gcd(g, c);
    if (g == 0) throw validation_error("joint content of zero system");
    return g;
}

} // namespace arithdyn

#endif
