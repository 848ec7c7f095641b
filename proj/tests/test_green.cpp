#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "arithdyn/equilibrium.hpp"
#include "arithdyn/green.hpp"
#include "arithdyn/model.hpp"
#include "arithdyn/parser.hpp"

#include "oracles.hpp"

using namespace arithdyn;

static const std::vector<std::string> XY{"x", "y"};

static MapModel make_model(const std::vector<std::string>& lifts) {
    std::vector<HomogeneousForm> fs;
    for (const auto& s : lifts) fs.push_back(parse_form(s, XY));
    return validate_model(std::move(fs), XY);
}

TEST_CASE("green value pinned examples") {
    auto power = make_model({"x^2", "y^2"});
    for (int depth : {1, 5, 30})
        CHECK(green_value(power, {Cplx(2, 0), Cplx(1, 0)}, depth).value ==
              Catch::Approx(std::log(2.0)).margin(1e-15));

    auto basilica = make_model({"x^2 - y^2", "y^2"});
    double ref = oracles::green_reference(basilica, Cplx(3, 0), Cplx(1, 0));
    CHECK(ref == Catch::Approx(1.0357623).margin(2e-6));
    CHECK(green_value(basilica, {Cplx(3, 0), Cplx(1, 0)}, 45).value ==
          Catch::Approx(ref).margin(1e-10));

    // bounded orbit 0 -> -1 -> 0: increments vanish in the limit
    CHECK(green_value(basilica, {Cplx(0, 0), Cplx(1, 0)}, 45).value ==
          Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("green value is the sup-norm log for monomial maps") {
    auto power = make_model({"x^2", "y^2"});
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> c(-3, 3);
    for (int i = 0; i < 20; ++i) {
        std::vector<Cplx> x{Cplx(c(rng), c(rng)), Cplx(c(rng), c(rng))};
        if (sup_norm(x) < 0.1) continue;
        CHECK(green_value(power, x, 40).value ==
              Catch::Approx(std::log(sup_norm(x))).margin(1e-13));
    }
}

TEST_CASE("green homogeneity and pullback identity") {
    auto basilica = make_model({"x^2 - y^2", "y^2"});
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> c(-2, 2);
    for (int i = 0; i < 12; ++i) {
        std::vector<Cplx> x{Cplx(c(rng), c(rng)), Cplx(c(rng), c(rng))};
        if (sup_norm(x) < 0.1) continue;
        double g = green_value(basilica, x, 45).value;
        // scaling adds log|c|
        Cplx s(1.7, -0.4);
        double gs = green_value(basilica, {x[0] * s, x[1] * s}, 45).value;
        CHECK(gs == Catch::Approx(g + std::log(std::abs(s))).margin(1e-10));
        // the escape rate of the image is d times the escape rate
        double gphi = green_value(basilica, eval_lift_c(basilica, x), 45).value;
        CHECK(gphi == Catch::Approx(2 * g).margin(1e-9));
    }
}

TEST_CASE("canonical metric norm") {
    auto power = make_model({"x^2", "y^2"});
    CHECK(canonical_metric_norm(power, {Cplx(1, 0), Cplx(0, 0)}, {Cplx(2, 0), Cplx(1, 0)}) ==
          Catch::Approx(1.0).margin(1e-12));
    CHECK(canonical_metric_norm(power, {Cplx(0, 0), Cplx(1, 0)}, {Cplx(2, 0), Cplx(1, 0)}) ==
          Catch::Approx(0.5).margin(1e-12));

    auto basilica = make_model({"x^2 - y^2", "y^2"});
    double ref = oracles::green_reference(basilica, Cplx(3, 0), Cplx(1, 0));
    CHECK(canonical_metric_norm(basilica, {Cplx(1, 0), Cplx(0, 0)}, {Cplx(3, 0), Cplx(1, 0)},
                                45) == Catch::Approx(3.0 / std::exp(ref)).margin(1e-9));
    CHECK_THROWS_AS(canonical_metric_norm(power, {Cplx(0, 0), Cplx(0, 0)},
                                          {Cplx(1, 0), Cplx(1, 0)}),
                    validation_error);
}

TEST_CASE("convergence report fits the geometric rate") {
    auto power = make_model({"x^2", "y^2"});
    std::vector<std::vector<Cplx>> pts;
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> c(-2, 2);
    for (int i = 0; i < 10; ++i) pts.push_back({Cplx(c(rng), c(rng)), Cplx(1, 0)});
    auto rp = convergence_report(power, pts, 25);
    CHECK(rp.fitted_ratio <= 0.5 + 0.05); // increments vanish beyond step one

    // on points of the chaotic locus the increment envelope decays at
    // exactly 1/d; backward iteration supplies such points
    // a point 2^-12 close to the chaotic locus tracks it for about twelve
    // forward steps, so the fit window must not outrun the backward depth
    auto basilica = make_model({"x^2 - y^2", "y^2"});
    auto tree = build_tree(basilica, Cplx(2, 1), Cplx(1, 0), 12);
    std::vector<std::vector<Cplx>> jpts;
    for (size_t i = 0; i < tree.levels[12].size() && jpts.size() < 20; i += 151)
        jpts.push_back({tree.levels[12][i].a, tree.levels[12][i].b});
    auto rb = convergence_report(basilica, jpts, 10);
    CHECK(rb.fitted_ratio == Catch::Approx(0.5).margin(0.12));
    CHECK(rb.within_rate);

    auto cubic = make_model({"x^3 - y^3", "y^3"});
    auto rc = convergence_report(cubic, pts, 18);
    CHECK(rc.fitted_ratio <= 1.0 / 3 + 0.1);
    CHECK(rc.within_rate);
}

TEST_CASE("green grid matches pointwise values") {
    auto power = make_model({"x^2", "y^2"});
    auto rows = green_grid(power, -1.5, 1.5, -1.0, 1.0, 5, 40);
    REQUIRE(rows.size() == 25);
    for (const auto& r : rows) {
        double expect = std::log(std::max(std::hypot(r.re, r.im), 1.0));
        CHECK(r.green == Catch::Approx(expect).margin(1e-10));
    }
}
