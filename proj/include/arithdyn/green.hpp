#ifndef ARITHDYN_GREEN_HPP
#define ARITHDYN_GREEN_HPP

#include <cmath>
#include <complex>
#include <vector>

#include "arithdyn/errors.hpp"
#include "arithdyn/integer.hpp"
#include "arithdyn/model.hpp"

namespace arithdyn {

using Cplx = std::complex<double>;

inline std::vector<Cplx> eval_lift_c(const MapModel& m, const std::vector<Cplx>& x) {
    std::vector<Cplx> out;
    out.reserve(m.lift.size());
    for (const auto& f : m.lift)
        out.push_back(f.eval_with<Cplx>(x, [](const Int& c) { return Cplx(c.get_d(), 0.0); }));
    return out;
}

inline double sup_norm(const std::vector<Cplx>& x) {
    double n = 0;
    for (const auto& z : x) n = std::max(n, std::abs(z));
    return n;
}

// Escape-rate value of a representative: iterate on sup-normalized vectors,
// accumulating d^-(j+1) log ||Phi(x_j)||.  Applied to the raw input this
// converges to the homogeneous escape rate G(x); on unit-sup representatives
// it is the archimedean local height.
struct GreenValue {
    double value;
    int depth;
    double rate_bound; // estimated sup-norm of the one-step increment
};

inline GreenValue green_value(const MapModel& m, std::vector<Cplx> x, int depth = 30) {
    if (sup_norm(x) == 0.0) throw validation_error("green_value at the zero vector");
    if (static_cast<int>(x.size()) != m.n + 1) throw validation_error("green_value arity mismatch");
    double total = 0.0, weight = 1.0, rate = 0.0;
    for (int j = 0; j < depth; ++j) {
        auto img = eval_lift_c(m, x);
        double nrm = sup_norm(img);
        if (nrm == 0.0) throw numeric_error("lift vanished at a complex point");
        weight /= m.d;
        double inc = std::log(nrm);
        total += weight * inc;
        if (j >= 1) rate = std::max(rate, std::abs(inc));
        for (auto& z : img) z /= nrm;
        x = std::move(img);
    }
    return GreenValue{total, depth, rate};
}

// Norm of the section (lambda . T) at a point in the limit metric:
// |sum lambda_i a_i| / exp(G(a)).  For monomial maps this is the sup metric.
inline double canonical_metric_norm(const MapModel& m, const std::vector<Cplx>& lambda,
                                    const std::vector<Cplx>& a, int depth = 30) {
    if (lambda.size() != a.size()) throw validation_error("section/point arity mismatch");
    Cplx s(0, 0);
    bool nz = false;
    for (size_t i = 0; i < a.size(); ++i) {
        s += lambda[i] * a[i];
        nz = nz || lambda[i] != Cplx(0, 0);
    }
    if (!nz) throw validation_error("zero section");
    return std::abs(s) / std::exp(green_value(m, a, depth).value);
}

// Empirical per-step increments and a fitted geometric ratio.
struct ConvergenceReport {
    std::vector<std::vector<double>> increments; // per point, |g_{k+1} - g_k|
    double fitted_ratio;                         // 0 when increments vanish
    bool within_rate;                            // fitted_ratio <= 1/d + slack
};

inline ConvergenceReport convergence_report(const MapModel& m,
                                            const std::vector<std::vector<Cplx>>& points,
                                            int depth = 20, double slack = 0.1) {
    ConvergenceReport rep;
    double sk = 0, sy = 0, skk = 0, sky = 0;
    long npts = 0;
    for (auto x : points) {
        std::vector<double> inc;
        double weight = 1.0;
        for (int j = 0; j < depth; ++j) {
            auto img = eval_lift_c(m, x);
            double nrm = sup_norm(img);
            weight /= m.d;
            inc.push_back(std::abs(weight * std::log(nrm)));
            for (auto& z : img) z /= nrm;
            x = std::move(img);
        }
        // least-squares slope of log increments vs step: the envelope decays
        // geometrically even when individual log factors fluctuate
        for (size_t k = 1; k < inc.size(); ++k)
            if (inc[k] > 1e-280) {
                double y = std::log(inc[k]);
                sk += k;
                sy += y;
                skk += double(k) * k;
                sky += k * y;
                ++npts;
            }
        rep.increments.push_back(std::move(inc));
    }
    double denom = npts * skk - sk * sk;
    rep.fitted_ratio = (npts >= 3 && denom > 0) ? std::exp((npts * sky - sk * sy) / denom) : 0.0;
    rep.within_rate = rep.fitted_ratio <= 1.0 / m.d + slack;
    return rep;
}

// CSV grid of escape-rate values over a rectangle (dimension one).
struct GridRow {
    double re, im, green;
};

inline std::vector<GridRow> green_grid(const MapModel& m, double x0, double x1, double y0,
                                       double y1, int res, int depth = 30) {
    if (m.n != 1) throw capability_error("green grids are emitted for n = 1 only");
    if (res < 2) throw validation_error("grid resolution must be >= 2");
    std::vector<GridRow> rows;
    rows.reserve(static_cast<size_t>(res) * res);
    for (int i = 0; i < res; ++i) {
        double im = y0 + (y1 - y0) * i / (res - 1);
        for (int j = 0; j < res; ++j) {
            double re = x0 + (x1 - x0) * j / (res - 1);
            double g = green_value(m, {Cplx(re, im), Cplx(1, 0)}, depth).value;
            rows.push_back(GridRow{re, im, g});
        }
    }
    return rows;
}

} // namespace arithdyn

#endif
