// Command-line surface for canonical heights, local heights, equilibrium
// integrals and reduction analysis of polynomial self-maps of P^n over Q.
//
// Exit codes: 0 pass, 1 residual exceeds budget, 2 invalid input,
// 3 capability limit, 4 numeric failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "arithdyn/equilibrium.hpp"
#include "arithdyn/green.hpp"
#include "arithdyn/heights.hpp"
#include "arithdyn/local_heights.hpp"
#include "arithdyn/mahler_report.hpp"
#include "arithdyn/model.hpp"
#include "arithdyn/model_io.hpp"
#include "arithdyn/parallel.hpp"
#include "arithdyn/parser.hpp"

using namespace arithdyn;
using nlohmann::ordered_json;

namespace {

ProjPoint parse_point(const std::string& s) {
    std::vector<Int> coords;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, ':')) {
        if (cur.empty()) throw validation_error("empty coordinate in point '" + s + "'");
        coords.emplace_back(cur);
    }
    if (coords.size() < 2) throw validation_error("point needs at least two coordinates a:b");
    return normalize_point(std::move(coords));
}

// parse an equation in the model's variables: a homogeneous binary form, or
// a univariate polynomial in the first variable (homogenized at its degree)
HomogeneousForm parse_equation(const MapModel& m, const std::string& text) {
    if (m.n != 1) throw capability_error("divisor equations are supported on P^1 only");
    try {
        HomogeneousForm f = parse_form(text, m.vars);
        if (!f.is_zero()) return f;
        throw validation_error("zero equation");
    } catch (const validation_error&) {
        IntPolynomial u = parse_univariate(text, m.vars);
        if (u.is_zero()) throw;
        if (u.degree() < 1) {
            HomogeneousForm c(2, 0);
            c.add_term({0, 0}, u[0]);
            return c;
        }
        return HomogeneousForm::homogenize(u);
    }
}

ordered_json logsum_json(const FormalLogSum& E) {
    ordered_json j;
    j["value"] = dec_str(E.value());
    j["error_bound"] = dec_str(E.error_bound);
    j["unresolved"] = E.unresolved;
    ordered_json terms = ordered_json::array();
    for (const auto& [p, t] : E.terms) {
        ordered_json tj;
        tj["prime"] = p.get_str();
        tj["c"] = rat_str(t.c);
        tj["exact"] = t.exact;
        tj["error_bound"] = dec_str(t.error_bound);
        terms.push_back(tj);
    }
    j["terms"] = terms;
    if (!E.notes.empty()) j["notes"] = E.notes;
    return j;
}

ordered_json height_json(const HeightValue& h) {
    ordered_json j;
    j["value"] = dec_str(h.value);
    j["error_bound"] = dec_str(h.error_bound);
    j["arch"] = dec_str(h.arch);
    ordered_json fin = ordered_json::array();
    for (const auto& [p, t] : h.finite.terms) {
        ordered_json tj;
        tj["prime"] = p.get_str();
        tj["c"] = rat_str(t.c);
        tj["exact"] = t.exact;
        tj["error_bound"] = dec_str(t.error_bound);
        fin.push_back(tj);
    }
    j["finite"] = fin;
    return j;
}

int run_check(const std::string& model_path, int kmax, long enum_bound, bool as_json) {
    MapModel m = model_from_file(model_path);
    auto red = bad_reduction_primes(m, 1000000, enum_bound);
    NegativityReport neg{false, false, 0, 0, "skipped (n > 2)"};
    bool neg_known = m.n <= 2;
    if (neg_known) neg = check_negativity_conditions(m, kmax);
    if (as_json) {
        ordered_json j;
        j["valid"] = true;
        j["n"] = m.n;
        j["degree"] = m.d;
        j["resultant"] = m.resultant.get_str();
        ordered_json primes = ordered_json::array();
        for (const auto& [p, mult] : red.bad_primes) {
            ordered_json pj;
            pj["prime"] = p.get_str();
            pj["multiplicity"] = mult;
            auto it = red.indeterminacy.find(p);
            if (it != red.indeterminacy.end()) {
                ordered_json pts = ordered_json::array();
                for (const auto& q : it->second) pts.push_back(q.str());
                pj["indeterminacy_mod_p"] = pts;
            }
            primes.push_back(pj);
        }
        j["bad_primes"] = primes;
        if (red.unfactored_cofactor != 1)
            j["unfactored_cofactor"] = red.unfactored_cofactor.get_str();
        j["negativity"] = {{"satisfied", neg.satisfied},
                           {"proven_all_k", neg.proven_all_k},
                           {"verified_up_to", neg.verified_up_to},
                           {"detail", neg.detail}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "valid model of P^" << m.n << ", degree " << m.d << "\n";
    std::cout << "resultant: " << m.resultant.get_str() << "\n";
    if (red.bad_primes.empty()) {
        std::cout << "good reduction everywhere\n";
    } else {
        std::cout << "bad primes:";
        for (const auto& [p, mult] : red.bad_primes)
            std::cout << " " << p.get_str() << "^" << mult;
        std::cout << "\n";
        for (const auto& [p, pts] : red.indeterminacy) {
            std::cout << "  indeterminacy mod " << p.get_str() << ":";
            for (const auto& q : pts) std::cout << " (" << q.str() << ")";
            std::cout << "\n";
        }
        if (red.unfactored_cofactor != 1)
            std::cout << "  unfactored cofactor: " << red.unfactored_cofactor.get_str() << "\n";
    }
    if (neg_known)
        std::cout << "negativity conditions: "
                  << (neg.satisfied ? (neg.proven_all_k ? "hold for all k" : "verified up to k_max")
                                    : "fail")
                  << " (" << neg.detail << ")\n";
    return 0;
}

int run_localheight(const std::string& model_path, const std::string& prime,
                    const std::string& point, double tol, bool as_json) {
    MapModel m = model_from_file(model_path);
    Int p(prime);
    ProjPoint P = parse_point(point);
    if (static_cast<int>(P.c.size()) != m.n + 1)
        throw validation_error("point arity does not match the model");
    Rat rtol(1, static_cast<long>(std::max(1.0 / std::max(tol, 1e-14), 2.0)));
    auto est = finite_local_height(m, p, P, rtol);
    double logp = log_int(p);
    if (as_json) {
        ordered_json j;
        j["prime"] = p.get_str();
        j["point"] = P.str();
        j["value"] = dec_str(est.value);
        j["lower_bound"] = rat_str(est.lower_bound);
        j["upper_bound"] = rat_str(est.upper_bound);
        j["depth"] = est.depth;
        j["exact"] = est.exact;
        if (est.exact) j["exact_value"] = rat_str(est.exact_value);
        j["nats"] = dec_str(est.value * logp);
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "local height at p = " << p.get_str() << " of (" << P.str() << ")\n";
    if (est.exact)
        std::cout << "  exact value: " << rat_str(est.exact_value) << " (valuation units)\n";
    else
        std::cout << "  value in [" << rat_str(est.lower_bound) << ", "
                  << rat_str(est.upper_bound) << "] (valuation units, depth " << est.depth
                  << ")\n";
    std::cout << "  contribution: " << dec_str(est.value * logp) << " nats\n";
    return 0;
}

int run_height(const std::string& model_path, const std::string& point, const std::string& poly,
               double tol, int depth, bool as_json) {
    MapModel m = model_from_file(model_path);
    HeightValue h;
    std::string what;
    if (!point.empty()) {
        ProjPoint P = parse_point(point);
        if (static_cast<int>(P.c.size()) != m.n + 1)
            throw validation_error("point arity does not match the model");
        h = canonical_height_point(m, P, tol);
        what = "canonical height of (" + P.str() + ")";
    } else if (!poly.empty()) {
        auto F = parse_equation(m, poly);
        int d = depth > 0 ? depth : 12;
        h = canonical_height_divisor(m, F, d);
        what = "canonical height of div(" + poly + ") (orbit-sum convention)";
    } else {
        throw validation_error("one of --point or --poly is required");
    }
    if (as_json) {
        std::cout << height_json(h).dump(2) << "\n";
        return 0;
    }
    std::cout << what << "\n";
    std::cout << "  value: " << dec_str(h.value) << "  (error bound " << dec_str(h.error_bound)
              << ")\n";
    std::cout << "  archimedean part: " << dec_str(h.arch) << "\n";
    for (const auto& [p, t] : h.finite.terms)
        std::cout << "  finite part at " << p.get_str() << ": " << rat_str(t.c) << " * log "
                  << p.get_str() << (t.exact ? " (exact)" : "") << "\n";
    return 0;
}

int run_measure(const std::string& model_path, const std::string& poly, int depth, int seed,
                const std::string& base, const std::string& dump, bool as_json) {
    MapModel m = model_from_file(model_path);
    auto F = parse_equation(m, poly);
    MahlerConfig cfg;
    cfg.tree_depth = depth;
    cfg.seed = seed;
    if (!base.empty()) {
        double re = 0, im = 0;
        if (std::sscanf(base.c_str(), "%lf,%lf", &re, &im) != 2)
            throw validation_error("--base expects re,im");
        cfg.base_a = Cplx(re, im);
        cfg.base_b = Cplx(1, 0);
    }
    auto tree = detail::tree_with_fallback(m, cfg);
    auto est = integrate_log(tree, F);
    if (!dump.empty()) {
        std::ofstream out(dump);
        if (!out) throw validation_error("cannot open dump file " + dump);
        out << "level,re,im,mult\n";
        for (int lvl = 0; lvl <= tree.depth; ++lvl)
            for (const auto& nd : tree.levels[lvl]) {
                Cplx z = nd.a / nd.b;
                out << lvl << "," << dec_str(z.real(), 12) << "," << dec_str(z.imag(), 12) << ","
                    << nd.mult << "\n";
            }
    }
    if (as_json) {
        ordered_json j;
        j["integral"] = dec_str(est.value);
        j["spread"] = dec_str(est.spread);
        j["depth"] = tree.depth;
        j["seed"] = seed;
        j["mitigated"] = est.mitigated;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "integral of log|" << poly << "| d(mu): " << dec_str(est.value) << " +- "
              << dec_str(est.spread) << " (tree depth " << tree.depth << ")\n";
    if (est.mitigated) std::cout << "  note: near-singular leaves were averaged\n";
    return 0;
}

int run_grid(const std::string& model_path, const std::string& window, int res, int depth) {
    MapModel m = model_from_file(model_path);
    double x0, x1, y0, y1;
    if (std::sscanf(window.c_str(), "%lf,%lf,%lf,%lf", &x0, &x1, &y0, &y1) != 4)
        throw validation_error("--window expects x0,x1,y0,y1");
    if (m.n != 1) throw capability_error("grids are emitted for n = 1 only");
    if (res < 2 || res > 4096) throw validation_error("--res out of range");
    // rows are independent; ARITHDYN_THREADS caps the parallelism and the
    // output order is fixed by the preallocated buffer
    std::vector<std::string> lines(res);
    parallel_for(res, [&](long i) {
        std::string buf;
        double im = y0 + (y1 - y0) * i / (res - 1);
        for (int j = 0; j < res; ++j) {
            double re = x0 + (x1 - x0) * j / (res - 1);
            double g = green_value(m, {Cplx(re, im), Cplx(1, 0)}, depth).value;
            buf += dec_str(re, 12);
            buf += ",";
            buf += dec_str(im, 12);
            buf += ",";
            buf += dec_str(g, 12);
            buf += "\n";
        }
        lines[i] = std::move(buf);
    });
    std::cout << "re,im,green\n";
    for (const auto& l : lines) std::cout << l;
    return 0;
}

int run_mahler(const std::string& model_path, const std::string& poly, const std::string& minus,
               int tree_depth, int push_depth, int seed, double budget, bool residual_mode,
               bool as_json) {
    MapModel m = model_from_file(model_path);
    MahlerConfig cfg;
    cfg.tree_depth = tree_depth;
    cfg.push_depth = push_depth;
    cfg.seed = seed;
    cfg.budget_override = budget;
    if (residual_mode) cfg.e_mode = EMode::residual;

    if (!minus.empty()) {
        auto Fp = parse_equation(m, poly);
        auto Fm = parse_equation(m, minus);
        auto rep = corollary_check(m, Fp, Fm, cfg);
        if (as_json) {
            ordered_json j;
            j["lhs"] = dec_str(rep.lhs);
            j["rhs"] = dec_str(rep.rhs);
            j["residual"] = dec_str(rep.residual);
            j["budget"] = dec_str(rep.budget);
            j["pass"] = rep.pass;
            j["infinity_cancellation"] = dec_str(rep.infinity_cancellation);
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "difference identity for (" << poly << ") / (" << minus << ")\n";
            std::cout << "  lhs h(D+) - h(D-): " << dec_str(rep.lhs) << "\n";
            std::cout << "  rhs integral + E:  " << dec_str(rep.rhs) << "\n";
            std::cout << "  residual: " << dec_str(rep.residual) << "  budget "
                      << dec_str(rep.budget) << "  -> " << (rep.pass ? "PASS" : "FAIL") << "\n";
        }
        return rep.pass ? 0 : 1;
    }

    IntPolynomial F = parse_univariate(poly, m.vars);
    auto rep = mahler_report(m, F, cfg);
    if (as_json) {
        ordered_json j;
        j["model"] = model_path;
        j["poly"] = poly;
        j["lhs_height"] = height_json(rep.lhs_height);
        j["arch_integral"] = dec_str(rep.arch_integral.value);
        j["arch_spread"] = dec_str(rep.arch_integral.spread);
        j["E"] = logsum_json(rep.E_term);
        j["infinity_term"] = dec_str(rep.infinity_term);
        j["residual"] = dec_str(rep.residual);
        j["budget"] = dec_str(rep.budget);
        j["pass"] = rep.pass;
        if (!rep.residual_attribution.empty())
            j["residual_attribution"] = rep.residual_attribution;
        j["notes"] = rep.notes;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "height identity for F = " << poly << "\n";
        std::cout << "  h(D)             = " << dec_str(rep.lhs_height.value) << " (+- "
                  << dec_str(rep.lhs_height.error_bound) << ")\n";
        std::cout << "  integral term    = " << dec_str(rep.arch_integral.value) << " (spread "
                  << dec_str(rep.arch_integral.spread) << ")\n";
        std::cout << "  E (finite)       = " << dec_str(rep.E_term.value());
        for (const auto& [p, t] : rep.E_term.terms)
            std::cout << "  [c_" << p.get_str() << " = " << rat_str(t.c)
                      << (t.exact ? "" : " ~") << "]";
        std::cout << "\n";
        std::cout << "  deg(F) h(inf)    = " << dec_str(rep.infinity_term) << "\n";
        std::cout << "  residual         = " << dec_str(rep.residual) << "  budget "
                  << dec_str(rep.budget) << "  -> " << (rep.pass ? "PASS" : "FAIL") << "\n";
        if (!rep.residual_attribution.empty())
            std::cout << "  " << rep.residual_attribution << "\n";
        for (const auto& n : rep.notes) std::cout << "  note: " << n << "\n";
    }
    return rep.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"canonical heights, local heights and equilibrium integrals for "
                 "polynomial self-maps of projective space over Q"};
    app.require_subcommand(1);

    std::string model_path, point, poly, minus, prime, window, base, dump;
    double tol = 1e-9, budget = 0;
    int kmax = 4, depth = 0, tree_depth = 12, seed = 0, res = 32;
    long enum_bound = 97;
    bool as_json = false, residual_mode = false;

    auto* check = app.add_subcommand("check", "validate a model and analyze its reduction");
    check->add_option("model", model_path)->required();
    check->add_option("--kmax", kmax, "negativity-condition iterations");
    check->add_option("--enum-bound", enum_bound, "mod-p enumeration bound");
    check->add_flag("--json", as_json);

    auto* lh = app.add_subcommand("localheight", "finite local height of a rational point");
    lh->add_option("model", model_path)->required();
    lh->add_option("--prime", prime)->required();
    lh->add_option("--point", point)->required();
    lh->add_option("--tol", tol);
    lh->add_flag("--json", as_json);

    auto* ht = app.add_subcommand("height", "canonical height of a point or divisor");
    ht->add_option("model", model_path)->required();
    ht->add_option("--point", point);
    ht->add_option("--poly", poly);
    ht->add_option("--tol", tol);
    ht->add_option("--depth", depth, "pushforward depth for divisors");
    ht->add_flag("--json", as_json);

    auto* ms = app.add_subcommand("measure", "equilibrium integral of log|F|");
    ms->add_option("model", model_path)->required();
    ms->add_option("--poly", poly)->required();
    ms->add_option("--depth", tree_depth, "preimage tree depth");
    ms->add_option("--seed", seed);
    ms->add_option("--base", base, "tree base point re,im");
    ms->add_option("--dump-tree", dump, "write the tree as CSV level,re,im,mult");
    ms->add_flag("--json", as_json);

    auto* gr = app.add_subcommand("grid", "escape-rate values on a rectangle, CSV");
    gr->add_option("model", model_path)->required();
    gr->add_option("--window", window, "x0,x1,y0,y1")->required();
    gr->add_option("--res", res)->required();
    gr->add_option("--depth", depth);

    auto* mh = app.add_subcommand("mahler", "verify the height identity for an equation");
    mh->add_option("model", model_path)->required();
    mh->add_option("--poly", poly)->required();
    mh->add_option("--minus", minus, "denominator equation (difference form)");
    mh->add_option("--depth", depth, "pushforward depth (0 = auto)");
    mh->add_option("--tree-depth", tree_depth);
    mh->add_option("--seed", seed);
    mh->add_option("--budget", budget, "override the pass/fail budget");
    mh->add_flag("--residual", residual_mode, "residual finite-place mode");
    mh->add_flag("--json", as_json);

    try {
        app.parse(argc, argv);
        if (check->parsed()) return run_check(model_path, kmax, enum_bound, as_json);
        if (lh->parsed()) return run_localheight(model_path, prime, point, tol, as_json);
        if (ht->parsed()) return run_height(model_path, point, poly, tol, depth, as_json);
        if (ms->parsed()) return run_measure(model_path, poly, tree_depth, seed, base, dump, as_json);
        if (gr->parsed()) return run_grid(model_path, window, res, depth == 0 ? 30 : depth);
        if (mh->parsed())
            return run_mahler(model_path, poly, minus, tree_depth, depth, seed, budget,
                              residual_mode, as_json);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const parse_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const validation_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const capability_error& e) {
        std::cerr << "capability limit: " << e.what() << "\n";
        return 3;
    } catch (const numeric_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 4;
    }
    return 2;
}
