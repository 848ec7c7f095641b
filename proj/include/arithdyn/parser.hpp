#ifndef ARITHDYN_PARSER_HPP
#define ARITHDYN_PARSER_HPP

#include <cctype>
#include <map>
#include <string>
#include <vector>

#include "arithdyn/errors.hpp"
#include "arithdyn/form.hpp"
#include "arithdyn/integer.hpp"
#include "arithdyn/polynomial.hpp"

namespace arithdyn {

// Grammar: integer literals (optionally signed), variable identifiers,
// `+ - * ^` with nonnegative integer exponents, parentheses.  Whitespace is
// insignificant; implicit multiplication is a parse error (write 3*x^2*y).

namespace detail {

// general (not necessarily homogeneous) sparse multivariate polynomial,
// parser-internal
struct MultiPoly {
    int nvars;
    std::map<std::vector<unsigned>, Int> terms;

    explicit MultiPoly(int n) : nvars(n) {}
    static MultiPoly constant(int n, const Int& c) {
        MultiPoly p(n);
        if (c != 0) p.terms.emplace(std::vector<unsigned>(n, 0), c);
        return p;
    }
    static MultiPoly variable(int n, int i) {
        MultiPoly p(n);
        std::vector<unsigned> e(n, 0);
        e[i] = 1;
        p.terms.emplace(e, Int(1));
        return p;
    }
    void add(const std::vector<unsigned>& e, const Int& c) {
        if (c == 0) return;
        auto it = terms.find(e);
        if (it == terms.end())
            terms.emplace(e, c);
        else {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }
    MultiPoly operator+(const MultiPoly& o) const {
        MultiPoly r = *this;
        for (const auto& [e, c] : o.terms) r.add(e, c);
        return r;
    }
    MultiPoly operator-(const MultiPoly& o) const {
        MultiPoly r = *this;
        for (const auto& [e, c] : o.terms) r.add(e, Int(-c));
        return r;
    }
    MultiPoly operator*(const MultiPoly& o) const {
        MultiPoly r(nvars);
        for (const auto& [ea, ca] : terms)
            for (const auto& [eb, cb] : o.terms) {
                std::vector<unsigned> e(ea);
                for (int i = 0; i < nvars; ++i) e[i] += eb[i];
                r.add(e, ca * cb);
            }
        return r;
    }
    MultiPoly pow(unsigned k) const {
        MultiPoly r = constant(nvars, Int(1));
        MultiPoly b = *this;
        while (k) {
            if (k & 1) r = r * b;
            b = b * b;
            k >>= 1;
        }
        return r;
    }
};

class ExprParser {
  public:
    ExprParser(const std::string& text, const std::vector<std::string>& vars)
        : s_(text), vars_(vars) {}

    MultiPoly parse() {
        MultiPoly p = expression();
        skip_ws();
        if (pos_ < s_.size()) fail("unexpected trailing input");
        return p;
    }

  private:
    MultiPoly expression() {
        skip_ws();
        bool neg = false;
        if (peek() == '+' || peek() == '-') neg = (get() == '-');
        MultiPoly p = term();
        if (neg) p = MultiPoly::constant(n(), Int(0)) - p;
        for (;;) {
            skip_ws();
            char c = peek();
            if (c == '+' || c == '-') {
                get();
                MultiPoly q = term();
                p = (c == '+') ? p + q : p - q;
            } else {
                return p;
            }
        }
    }

    MultiPoly term() {
        MultiPoly p = factor();
        for (;;) {
            skip_ws();
            if (peek() == '*') {
                get();
                p = p * factor();
            } else {
                char c = peek();
                if (std::isalnum(static_cast<unsigned char>(c)) || c == '(')
                    fail("implicit multiplication is not allowed; use '*'");
                return p;
            }
        }
    }

    MultiPoly factor() {
        MultiPoly b = base();
        skip_ws();
        if (peek() == '^') {
            get();
            skip_ws();
            unsigned long e = uint_literal();
            if (e > 64) fail("exponent too large");
            return b.pow(static_cast<unsigned>(e));
        }
        return b;
    }

    MultiPoly base() {
        skip_ws();
        char c = peek();
        if (c == '(') {
            get();
            MultiPoly p = expression();
            skip_ws();
            if (peek() != ')') fail("expected ')'");
            get();
            return p;
        }
        if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
            // signed integer literal
            bool neg = false;
            if (c == '-' || c == '+') {
                neg = (get() == '-');
                skip_ws();
                if (!std::isdigit(static_cast<unsigned char>(peek())))
                    fail("expected digits after sign");
            }
            std::string digits;
            while (std::isdigit(static_cast<unsigned char>(peek()))) digits += get();
            Int v(digits);
            if (neg) v = -v;
            return MultiPoly::constant(n(), v);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name;
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
                name += get();
            for (size_t i = 0; i < vars_.size(); ++i)
                if (vars_[i] == name) return MultiPoly::variable(n(), static_cast<int>(i));
            fail("unknown variable '" + name + "'");
        }
        fail(c == '\0' ? "unexpected end of input" : std::string("unexpected character '") + c + "'");
        return MultiPoly(n()); // unreachable
    }

    unsigned long uint_literal() {
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a nonnegative integer");
        std::string digits;
        while (std::isdigit(static_cast<unsigned char>(peek()))) digits += get();
        return std::stoul(digits);
    }

    int n() const { return static_cast<int>(vars_.size()); }
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    char get() {
        char c = s_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) get();
    }
    [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, line_, col_); }

    std::string s_;
    std::vector<std::string> vars_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

} // namespace detail

// Parse a homogeneous form in the given variables; rejects inhomogeneous input.
inline HomogeneousForm parse_form(const std::string& text, const std::vector<std::string>& vars) {
    detail::MultiPoly p = detail::ExprParser(text, vars).parse();
    int deg = -1;
    for (const auto& [e, c] : p.terms) {
        int d = 0;
        for (unsigned x : e) d += static_cast<int>(x);
        if (deg < 0) deg = d;
        if (d != deg) throw validation_error("polynomial is not homogeneous: " + text);
    }
    if (deg < 0) deg = 0; // zero polynomial: treat as a degree-0 form
    HomogeneousForm f(static_cast<int>(vars.size()), deg);
    for (const auto& [e, c] : p.terms) f.add_term(e, c);
    return f;
}

// Parse a univariate polynomial; y (when present in vars) acts as the
// homogenizing variable and is substituted by 1.
inline IntPolynomial parse_univariate(const std::string& text,
                                      const std::vector<std::string>& vars) {
    detail::MultiPoly p = detail::ExprParser(text, vars).parse();
    // exponents of variables beyond the first are substituted by 1, so the
    // homogenized spelling "x - y" parses to the same polynomial as "x - 1"
    std::vector<Int> coeffs;
    for (const auto& [e, c] : p.terms) {
        unsigned k = e.empty() ? 0 : e[0];
        if (coeffs.size() <= k) coeffs.resize(k + 1, Int(0));
        coeffs[k] += c;
    }
    return IntPolynomial(std::move(coeffs));
}

} // namespace arithdyn

#endif
