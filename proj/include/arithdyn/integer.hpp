#ifndef ARITHDYN_INTEGER_HPP
#define ARITHDYN_INTEGER_HPP

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "arithdyn/errors.hpp"

namespace arithdyn {

using Int = mpz_class;
using Rat = mpq_class;

inline Int abs_int(const Int& a) { return a >= 0 ? a : Int(-a); }

inline bool is_prime(const Int& p) {
    if (p < 2) return false;
    return mpz_probab_prime_p(p.get_mpz_t(), 40) != 0;
}

inline void require_prime(const Int& p) {
    if (!is_prime(p)) throw validation_error("not a prime: " + p.get_str());
}

// log of a positive integer, exact exponent handling (no overflow for huge inputs)
inline double log_int(const Int& a) {
    if (a <= 0) throw validation_error("log_int: nonpositive argument");
    signed long exp2;
    double m = mpz_get_d_2exp(&exp2, a.get_mpz_t());
    return std::log(m) + static_cast<double>(exp2) * std::log(2.0);
}

// log of a positive rational.  Returns exactly 0.0 when q == 1, which keeps
// height sums of monomial maps bit-stable.
inline double log_rat(const Rat& q) {
    if (q <= 0) throw validation_error("log_rat: nonpositive argument");
    if (q == 1) return 0.0;
    return log_int(q.get_num()) - log_int(q.get_den());
}

// p-adic valuation on Z, with the convention v(0) = +infinity carried by a
// dedicated value so min-folds over vectors stay total.
class Valuation {
  public:
    Valuation() : inf_(true), v_(0) {}
    explicit Valuation(long v) : inf_(false), v_(v) {}
    static Valuation infinity() { return Valuation(); }

    bool is_infinite() const { return inf_; }
    long value() const {
        if (inf_) throw validation_error("valuation of zero has no finite value");
        return v_;
    }
    long value_or(long cap) const { return inf_ ? cap : v_; }

    friend Valuation min(const Valuation& a, const Valuation& b) {
        if (a.inf_) return b;
        if (b.inf_) return a;
        return Valuation(a.v_ < b.v_ ? a.v_ : b.v_);
    }
    Valuation operator+(const Valuation& o) const {
        if (inf_ || o.inf_) return infinity();
        return Valuation(v_ + o.v_);
    }
    bool operator==(const Valuation& o) const {
        return inf_ == o.inf_ && (inf_ || v_ == o.v_);
    }
    bool operator<=(const Valuation& o) const {
        if (o.inf_) return true;
        if (inf_) return false;
        return v_ <= o.v_;
    }

  private:
    bool inf_;
    long v_;
};

inline Valuation valuation(const Int& p, const Int& x) {
    if (x == 0) return Valuation::infinity();
    Int rest;
    unsigned long k = mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
    return Valuation(static_cast<long>(k));
}

inline Valuation valuation(const Int& p, const Rat& x) {
    if (x == 0) return Valuation::infinity();
    return Valuation(valuation(p, Int(x.get_num())).value() -
                     valuation(p, Int(x.get_den())).value());
}

template <class It>
inline Valuation valuation_min(const Int& p, It first, It last) {
    Valuation v = Valuation::infinity();
    for (; first != last; ++first) v = min(v, valuation(p, *first));
    return v;
}

// A place of Q: the archimedean one or a verified finite prime.
struct Place {
    bool archimedean;
    Int prime; // meaningful only for finite places

    static Place infinite() { return Place{true, Int(0)}; }
    static Place finite(const Int& p) {
        require_prime(p);
        return Place{false, p};
    }
};

// Projective point over Q in normalized coordinates: coprime integers with
// the first nonzero coordinate positive.
struct ProjPoint {
    std::vector<Int> c;

    bool operator==(const ProjPoint& o) const { return c == o.c; }
    bool operator<(const ProjPoint& o) const { return c < o.c; }
    std::string str() const {
        std::string s;
        for (size_t i = 0; i < c.size(); ++i) {
            if (i) s += ":";
            s += c[i].get_str();
        }
        return s;
    }
};

inline ProjPoint normalize_point(std::vector<Int> v) {
    Int g = 0;
    bool all_zero = true;
    for (const auto& x : v) {
        if (x != 0) all_zero = false;
        g = gcd(g, x);
    }
    if (all_zero) throw validation_error("zero vector is not a projective point");
    for (auto& x : v) x /= g;
    for (const auto& x : v) {
        if (x != 0) {
            if (x < 0)
                for (auto& y : v) y = -y;
            break;
        }
    }
    return ProjPoint{std::move(v)};
}

inline double to_double(const Rat& q) { return q.get_d(); }

// Decimal rendering used by every JSON surface (language-neutral, no binary
// floats).  17 significant digits round-trips IEEE doubles.
inline std::string dec_str(double x, int digits = 17) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return std::string(buf);
}

inline std::string rat_str(const Rat& q) {
    Rat c = q;
    c.canonicalize();
    return c.get_str();
}

} // namespace arithdyn

#endif
