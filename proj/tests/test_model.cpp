#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "arithdyn/model.hpp"
#include "arithdyn/model_io.hpp"
#include "arithdyn/parser.hpp"

using namespace arithdyn;

static const std::vector<std::string> XY{"x", "y"};
static const std::vector<std::string> XYZ{"x", "y", "z"};

static MapModel make_model(const std::vector<std::string>& lifts,
                           const std::vector<std::string>& vars) {
    std::vector<HomogeneousForm> fs;
    for (const auto& s : lifts) fs.push_back(parse_form(s, vars));
    return validate_model(std::move(fs), vars);
}

TEST_CASE("validate_model accepts and rejects") {
    auto power = make_model({"x^2", "y^2"}, XY);
    CHECK(power.resultant == 1);
    CHECK(power.d == 2);
    CHECK_THROWS_AS(make_model({"x^2", "x*y"}, XY), validation_error); // common zero (0:1)
    CHECK_THROWS_AS(make_model({"x^2", "y^3"}, XY), validation_error); // degree mismatch
    CHECK_THROWS_AS(make_model({"x", "y"}, XY), validation_error);     // degree 1
    auto gr = make_model({"x^2 + x*y", "y^2 + z*x + z*y", "z^2"}, XYZ);
    CHECK(abs_int(gr.resultant) == 1);
    // joint content is divided out to keep the stored lift primitive
    auto scaled = make_model({"2*x^2", "2*y^2"}, XY);
    CHECK(scaled.resultant == 1);
}

TEST_CASE("iterate_lift") {
    auto power = make_model({"x^2", "y^2"}, XY);
    auto p3 = iterate_lift(power, 3);
    CHECK(p3[0] == parse_form("x^8", XY));
    CHECK(p3[1] == parse_form("y^8", XY));

    auto phi2 = make_model({"2*x^2 + y^2", "2*y^2"}, XY);
    auto p2 = iterate_lift(phi2, 2);
    CHECK(p2[0] == parse_form("8*x^4 + 8*x^2*y^2 + 6*y^4", XY));
    CHECK(p2[1] == parse_form("8*y^4", XY));
    CHECK(p2[0].degree() == 4);
    CHECK_THROWS_AS(iterate_lift(power, 30), capability_error);

    // composition law p_{j+k} = p_j o p_k, checked symbolically
    auto basilica = make_model({"x^2 - y^2", "y^2"}, XY);
    for (int j = 1; j <= 2; ++j)
        for (int k = 1; j + k <= 3; ++k) {
            auto pj = iterate_lift(basilica, j);
            auto pk = iterate_lift(basilica, k);
            auto pjk = iterate_lift(basilica, j + k);
            for (size_t i = 0; i < pj.size(); ++i) CHECK(pj[i].compose(pk) == pjk[i]);
        }

    // iterates stay regular sequences (spot check k <= 2)
    for (int k = 1; k <= 2; ++k) {
        auto it = iterate_lift(phi2, k);
        CHECK(sylvester_resultant(it[0], it[1]) != 0);
    }
}

TEST_CASE("apply_map normalization") {
    auto power = make_model({"x^2", "y^2"}, XY);
    CHECK(apply_map(power, ProjPoint{{Int(2), Int(3)}}) == ProjPoint{{Int(4), Int(9)}});
    auto phi2 = make_model({"2*x^2 + y^2", "2*y^2"}, XY);
    CHECK(apply_map(phi2, ProjPoint{{Int(1), Int(0)}}) == ProjPoint{{Int(1), Int(0)}});
    auto basilica = make_model({"x^2 - y^2", "y^2"}, XY);
    CHECK(apply_map(basilica, ProjPoint{{Int(0), Int(1)}}) == ProjPoint{{Int(1), Int(-1)}});
}

TEST_CASE("apply_map iterated matches iterate_lift") {
    auto basilica = make_model({"x^2 - y^2", "y^2"}, XY);
    std::mt19937 rng(11);
    std::uniform_int_distribution<long> coord(-9, 9);
    for (int trial = 0; trial < 10; ++trial) {
        long a = coord(rng), b = coord(rng);
        if (a == 0 && b == 0) continue;
        ProjPoint p = normalize_point({Int(a), Int(b)});
        ProjPoint q = p;
        for (int k = 1; k <= 6; ++k) {
            q = apply_map(basilica, q);
            if (k <= 3) {
                auto pk = iterate_lift(basilica, k);
                std::vector<Int> img{pk[0].eval(p.c), pk[1].eval(p.c)};
                CHECK(normalize_point(img) == q);
            }
        }
    }
}

TEST_CASE("bad reduction primes") {
    auto phi2 = make_model({"2*x^2 + y^2", "2*y^2"}, XY);
    auto rep = bad_reduction_primes(phi2);
    REQUIRE(rep.bad_primes.size() == 1);
    CHECK(rep.bad_primes[0].first == 2);
    CHECK(rep.bad_primes[0].second == 4);
    CHECK(rep.unfactored_cofactor == 1);

    auto bad3 = make_model({"y^2 - 3*z^2", "x^2 - 3*y^2", "z*y"}, XYZ);
    auto rep3 = bad_reduction_primes(bad3);
    bool has3 = false;
    for (const auto& [p, k] : rep3.bad_primes) has3 = has3 || p == 3;
    CHECK(has3);

    auto bad35 = make_model({"3*y^2 - 5*z^2", "3*x^2 - 5*y^2", "z*y"}, XYZ);
    auto rep35 = bad_reduction_primes(bad35);
    bool has3b = false, has5 = false;
    for (const auto& [p, k] : rep35.bad_primes) {
        has3b = has3b || p == 3;
        has5 = has5 || p == 5;
    }
    CHECK(has3b);
    CHECK(has5);

    // power maps have good reduction everywhere, any degree up to 5
    for (int d = 2; d <= 5; ++d) {
        auto m = make_model({"x^" + std::to_string(d), "y^" + std::to_string(d)}, XY);
        CHECK(bad_reduction_primes(m).bad_primes.empty());
    }
}

TEST_CASE("indeterminacy points mod p") {
    auto bad3 = make_model({"y^2 - 3*z^2", "x^2 - 3*y^2", "z*y"}, XYZ);
    auto pts = indeterminacy_points_mod_p(bad3, Int(3));
    REQUIRE(pts.size() == 1);
    CHECK(pts[0] == ProjPoint{{Int(0), Int(0), Int(1)}});

    auto bad35 = make_model({"3*y^2 - 5*z^2", "3*x^2 - 5*y^2", "z*y"}, XYZ);
    auto pts3 = indeterminacy_points_mod_p(bad35, Int(3));
    REQUIRE(pts3.size() == 1);
    CHECK(pts3[0] == ProjPoint{{Int(1), Int(0), Int(0)}});
    auto pts5 = indeterminacy_points_mod_p(bad35, Int(5));
    REQUIRE(pts5.size() == 1);
    CHECK(pts5[0] == ProjPoint{{Int(0), Int(0), Int(1)}});

    auto power = make_model({"x^2", "y^2"}, XY);
    CHECK(indeterminacy_points_mod_p(power, Int(5)).empty());
    CHECK_THROWS_AS(indeterminacy_points_mod_p(power, Int(101)), capability_error);

    // bad primes show indeterminacy, sampled good primes do not
    auto phi2 = make_model({"2*x^2 + y^2", "2*y^2"}, XY);
    CHECK(!indeterminacy_points_mod_p(phi2, Int(2)).empty());
    for (long p : {3, 5, 7, 11}) CHECK(indeterminacy_points_mod_p(phi2, Int(p)).empty());
}

TEST_CASE("negativity conditions") {
    auto monic = make_model({"x^2 + y^2", "y^2"}, XY);
    auto r1 = check_negativity_conditions(monic);
    CHECK(r1.satisfied);
    CHECK(r1.proven_all_k);

    auto phi2 = make_model({"2*x^2 + y^2", "2*y^2"}, XY);
    auto r2 = check_negativity_conditions(phi2);
    CHECK(!r2.satisfied);
    CHECK(r2.failing_k == 1);

    auto power = make_model({"x^2", "y^2"}, XY);
    CHECK(check_negativity_conditions(power).proven_all_k);

    // non-polynomial map, verified up to k_max only
    auto swap = make_model({"y^2 + x^2", "x*y"}, XY);
    auto r3 = check_negativity_conditions(swap, 4);
    CHECK(r3.satisfied);
    CHECK(!r3.proven_all_k);
    CHECK(r3.verified_up_to == 4);
}

TEST_CASE("model JSON round trip") {
    auto phi2 = make_model({"2*x^2 + y^2", "2*y^2"}, XY);
    std::string text = model_to_json(phi2);
    auto back = model_from_json(text);
    CHECK(back.d == 2);
    CHECK(back.n == 1);
    CHECK(back.lift[0] == phi2.lift[0]);
    CHECK(back.lift[1] == phi2.lift[1]);
    CHECK_THROWS_AS(model_from_json("{\"n\": 1}"), validation_error);
    CHECK_THROWS_AS(model_from_json("not json"), validation_error);
}
