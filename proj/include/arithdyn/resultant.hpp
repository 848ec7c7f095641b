#ifndef ARITHDYN_RESULTANT_HPP
#define ARITHDYN_RESULTANT_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "arithdyn/errors.hpp"
#include "arithdyn/form.hpp"
#include "arithdyn/integer.hpp"
#include "arithdyn/polynomial.hpp"

namespace arithdyn {

// Fraction-free Gaussian elimination (Bareiss).  Exact for integer matrices.
inline Int det_bareiss(std::vector<std::vector<Int>> m) {
    const size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw validation_error("determinant of non-square matrix");
    if (n == 0) return Int(1);
    Int prev(1);
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            size_t piv = k + 1;
            while (piv < n && m[piv][k] == 0) ++piv;
            if (piv == n) return Int(0);
            std::swap(m[k], m[piv]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j) {
                m[i][j] = m[k][k] * m[i][j] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : Int(-m[n - 1][n - 1]);
}

// Sylvester matrix of two coefficient vectors read as degree-a and degree-b
// binary forms (index = first-variable exponent).
inline std::vector<std::vector<Int>> sylvester_matrix(const std::vector<Int>& f, int a,
                                                      const std::vector<Int>& g, int b) {
    const int n = a + b;
    std::vector<std::vector<Int>> m(n, std::vector<Int>(n, Int(0)));
    // row layout: columns indexed by x^{n-1-j} y^{j}
    for (int r = 0; r < b; ++r)
        for (int i = 0; i <= a; ++i) m[r][r + (a - i)] = i < static_cast<int>(f.size()) ? f[i] : Int(0);
    for (int r = 0; r < a; ++r)
        for (int i = 0; i <= b; ++i) m[b + r][r + (b - i)] = i < static_cast<int>(g.size()) ? g[i] : Int(0);
    return m;
}

inline Int sylvester_resultant_coeffs(const std::vector<Int>& f, int a,
                                      const std::vector<Int>& g, int b) {
    if (a == 0 && b == 0) return Int(1);
    return det_bareiss(sylvester_matrix(f, a, g, b));
}

// Classical homogeneous resultant of two binary forms; zero iff they share a
// projective root over the algebraic closure.
inline Int sylvester_resultant(const HomogeneousForm& f, const HomogeneousForm& g) {
    if (f.num_vars() != 2 || g.num_vars() != 2)
        throw validation_error("sylvester_resultant expects binary forms");
    return sylvester_resultant_coeffs(f.binary_coeffs(), f.degree(), g.binary_coeffs(), g.degree());
}

namespace detail {

inline std::vector<std::vector<unsigned>> monomials_of_degree(int nvars, int deg) {
    std::vector<std::vector<unsigned>> out;
    std::vector<unsigned> cur(nvars, 0);
    // lexicographic enumeration, first variable weight descending
    auto rec = [&](auto&& self, int var, int rest) -> void {
        if (var == nvars - 1) {
            cur[var] = static_cast<unsigned>(rest);
            out.push_back(cur);
            return;
        }
        for (int k = rest; k >= 0; --k) {
            cur[var] = static_cast<unsigned>(k);
            self(self, var + 1, rest - k);
        }
    };
    rec(rec, 0, deg);
    return out;
}

struct MacaulayLayout {
    std::vector<std::vector<unsigned>> cols; // monomials of the critical degree
    std::vector<int> row_form;               // which form fills each row
    std::vector<std::vector<unsigned>> row_shift;
    std::vector<bool> non_reduced;           // divisible by x_i^d for 2+ indices
};

inline MacaulayLayout macaulay_layout(int nvars, int d, const std::vector<int>& order) {
    const int t = nvars * (d - 1) + 1; // critical degree for equal degrees d
    MacaulayLayout L;
    L.cols = monomials_of_degree(nvars, t);
    for (const auto& mu : L.cols) {
        int count = 0, chosen = -1;
        for (int oi = 0; oi < nvars; ++oi) {
            int i = order[oi];
            if (static_cast<int>(mu[i]) >= d) {
                ++count;
                if (chosen < 0) chosen = i;
            }
        }
        // t exceeds nvars*(d-1), so some exponent always reaches d
        L.row_form.push_back(chosen);
        std::vector<unsigned> shift = mu;
        shift[chosen] -= static_cast<unsigned>(d);
        L.row_shift.push_back(std::move(shift));
        L.non_reduced.push_back(count >= 2);
    }
    return L;
}

inline std::vector<std::vector<Int>> macaulay_matrix(const std::vector<HomogeneousForm>& forms,
                                                     const MacaulayLayout& L) {
    const size_t n = L.cols.size();
    std::map<std::vector<unsigned>, size_t> col_index;
    for (size_t j = 0; j < n; ++j) col_index.emplace(L.cols[j], j);
    std::vector<std::vector<Int>> m(n, std::vector<Int>(n, Int(0)));
    const int nv = forms[0].num_vars();
    for (size_t r = 0; r < n; ++r) {
        const auto& p = forms[L.row_form[r]];
        for (const auto& [e, c] : p.terms()) {
            std::vector<unsigned> mu(e);
            for (int i = 0; i < nv; ++i) mu[i] += L.row_shift[r][i];
            m[r][col_index.at(mu)] = c;
        }
    }
    return m;
}

} // namespace detail

// Macaulay resultant of n+1 forms of equal degree d in n+1 variables via the
// classical matrix quotient det(M)/det(M').  When the distinguished minor is
// singular we retry with every variable order before giving up.
inline Int macaulay_resultant(const std::vector<HomogeneousForm>& forms) {
    if (forms.empty()) throw validation_error("empty system");
    const int nvars = forms[0].num_vars();
    if (static_cast<int>(forms.size()) != nvars)
        throw validation_error("macaulay_resultant expects n+1 forms in n+1 variables");
    const int d = forms[0].degree();
    if (d < 1) throw validation_error("macaulay_resultant needs degree >= 1");
    for (const auto& f : forms)
        if (f.num_vars() != nvars || f.degree() != d)
            throw validation_error("macaulay_resultant: mixed arities or degrees");
    if (nvars == 1) {
        const auto& f = forms[0];
        if (f.is_zero()) return Int(0);
        return f.terms().begin()->second;
    }
    if (nvars == 2)
        return sylvester_resultant(forms[0], forms[1]);

    const int t = nvars * (d - 1) + 1;
    // supported-size cap: dim = C(t + nvars - 1, nvars - 1)
    long dim = 1;
    for (int i = 1; i < nvars; ++i) dim = dim * (t + i) / i;
    if (dim > 160)
        throw capability_error("macaulay matrix of dimension " + std::to_string(dim) +
                               " exceeds the supported size (n<=2, d<=4 guaranteed)");

    std::vector<int> order(nvars);
    std::iota(order.begin(), order.end(), 0);
    bool first = true;
    do {
        auto L = detail::macaulay_layout(nvars, d, order);
        Int big = det_bareiss(detail::macaulay_matrix(forms, L));
        // minor on the non-reduced rows/columns
        std::vector<size_t> keep;
        for (size_t j = 0; j < L.cols.size(); ++j)
            if (L.non_reduced[j]) keep.push_back(j);
        auto M = detail::macaulay_matrix(forms, L);
        std::vector<std::vector<Int>> minor(keep.size(), std::vector<Int>(keep.size()));
        for (size_t i = 0; i < keep.size(); ++i)
            for (size_t j = 0; j < keep.size(); ++j) minor[i][j] = M[keep[i]][keep[j]];
        Int small = det_bareiss(std::move(minor));
        if (small != 0) {
            Int q;
            if (!mpz_divisible_p(big.get_mpz_t(), small.get_mpz_t()))
                throw numeric_error("macaulay quotient is not exact");
            mpz_divexact(q.get_mpz_t(), big.get_mpz_t(), small.get_mpz_t());
            return q;
        }
        first = false;
    } while (std::next_permutation(order.begin(), order.end()));
    (void)first;
    throw numeric_error("macaulay resultant indeterminate: every variable order gives a singular minor");
}

// Resultant of a full system (dispatches on arity).
inline Int system_resultant(const std::vector<HomogeneousForm>& forms) {
    if (forms.size() == 2) return sylvester_resultant(forms[0], forms[1]);
    return macaulay_resultant(forms);
}

// Cofactor bound for dimension one: returns M such that every unit-sup
// complex vector satisfies ||(p0,p1)(x)||_sup >= 1 / M.  Derived from the
// Bezout identities A*p0 + B*p1 = Res * x^(a+b-1) (and the y-analogue); the
// returned M is the larger 1-norm of the two exact cofactor solutions scaled
// by 1/Res.
inline Rat bezout_cofactor_bound(const HomogeneousForm& p0, const HomogeneousForm& p1) {
    const int a = p0.degree(), b = p1.degree();
    const int n = a + b;
    auto S = sylvester_matrix(p0.binary_coeffs(), a, p1.binary_coeffs(), b);
    // solve u^T S = e_col for col in {0, n-1}; |u| sums bound the cofactors
    auto solve_row = [&](int col) -> Rat {
        // transpose system: S^T u = e_col, Gaussian elimination over Q
        std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n + 1, Rat(0)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m[i][j] = Rat(S[j][i]);
        m[col][n] = 1;
        for (int k = 0; k < n; ++k) {
            int piv = k;
            while (piv < n && m[piv][k] == 0) ++piv;
            if (piv == n) throw numeric_error("singular sylvester system");
            std::swap(m[k], m[piv]);
            for (int i = 0; i < n; ++i) {
                if (i == k || m[i][k] == 0) continue;
                Rat s = m[i][k] / m[k][k];
                for (int j = k; j <= n; ++j) m[i][j] -= s * m[k][j];
            }
        }
        Rat sum(0);
        for (int k = 0; k < n; ++k) {
            Rat u = m[k][n] / m[k][k];
            sum += u < 0 ? Rat(-u) : u;
        }
        return sum;
    };
    Rat mx = solve_row(0);
    Rat my = solve_row(n - 1);
    return mx > my ? mx : my;
}

} // namespace arithdyn

#endif
