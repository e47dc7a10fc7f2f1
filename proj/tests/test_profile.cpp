#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "corners/profile.hpp"

using namespace corners;

TEST_CASE("rational arithmetic stays normalized") {
    CHECK(rational(2, 4) == rational(1, 2));
    CHECK(rational(1, -2) == rational(-1, 2));
    CHECK(rational(1, 2) + rational(1, 3) == rational(5, 6));
    CHECK(rational(1, 2) * rational(2, 3) == rational(1, 3));
    CHECK(rational(1, 2) - rational(1, 2) == rational(0));
    CHECK(rational(3, 2) / rational(3) == rational(1, 2));
    CHECK(rational(-1, 2) < rational(1, 3));
    CHECK_THROWS(rational(1, 0));
}

TEST_CASE("monomial evaluation and algebra") {
    CHECK(monomial::dyadic(rational(-3)).eval() == doctest::Approx(0.125).epsilon(1e-15));
    auto d2 = monomial::var("d", rational(2));
    CHECK(d2.eval({{"d", 0.5}}) == doctest::Approx(0.25).epsilon(1e-15));

    // (2^-2 d) squared = 2^-4 d^2
    auto m = monomial::dyadic(rational(-2)).times(monomial::var("d")).powed(rational(2));
    CHECK(m.log2c == rational(-4));
    CHECK(m.pow.at("d") == rational(2));
    CHECK(m.eval({{"d", 0.5}}) == doctest::Approx(std::ldexp(0.25, -4)).epsilon(1e-15));

    // square root of a fourth power returns the square
    auto r = monomial::var("b", rational(4)).powed(rational(1, 2));
    CHECK(r.pow.at("b") == rational(2));

    // cancelling exponents drop out entirely
    auto c = monomial::var("x").times(monomial::var("x", rational(-1)));
    CHECK(c.pow.empty());
    CHECK(!m.str().empty());
}

TEST_CASE("dominance on the unit cube follows the exponent rule") {
    auto dy = [](std::int64_t e) { return monomial::dyadic(rational(e)); };
    auto d = [](const rational& e) { return monomial::var("d", e); };

    // smaller coefficient and larger exponent dominate
    CHECK(dominated_on_unit(dy(-4).times(d(2)), dy(-2).times(d(1))));
    // coefficient alone can break it
    CHECK(!dominated_on_unit(dy(-1).times(d(1)), dy(-2).times(d(1))));
    // smaller exponent on the left breaks it near zero
    CHECK(!dominated_on_unit(dy(-4).times(d(1)), dy(-2).times(d(2))));
    // an extra variable on the left only helps
    CHECK(dominated_on_unit(dy(-4).times(d(1)).times(monomial::var("b")), dy(-4).times(d(1))));
    // an extra variable on the right breaks it
    CHECK(!dominated_on_unit(dy(-4), dy(-4).times(monomial::var("b"))));
    // equal coefficients pass only the non-strict form
    CHECK(dominated_on_unit(dy(-4), dy(-4)));
    CHECK(!dominated_on_unit(dy(-4), dy(-4), true));
    CHECK(dominated_on_unit(dy(-5), dy(-4), true));
}

TEST_CASE("dominance verdicts agree with dense sampling") {
    auto dy = [](std::int64_t e) { return monomial::dyadic(rational(e)); };
    std::vector<std::pair<monomial, monomial>> accepted = {
        {dy(-4).times(monomial::var("d", rational(2))), dy(-2).times(monomial::var("d"))},
        {dy(-3).times(monomial::var("d", rational(3, 2))), dy(-3).times(monomial::var("d"))},
        {dy(-6).times(monomial::var("d")).times(monomial::var("b", rational(2))),
         dy(-5).times(monomial::var("b"))},
    };
    const double grid[] = {0.01, 0.1, 0.5, 1.0};
    for (const auto& [lhs, rhs] : accepted) {
        REQUIRE(dominated_on_unit(lhs, rhs));
        for (double dv : grid)
            for (double bv : grid) {
                std::map<std::string, double> vars{{"d", dv}, {"b", bv}};
                CHECK(lhs.eval(vars) <= rhs.eval(vars) + 1e-12);
            }
    }

    // each rejected pair is rejected for a reason visible at some sample
    std::vector<std::pair<monomial, monomial>> rejected = {
        {dy(-1).times(monomial::var("d")), dy(-2).times(monomial::var("d"))},
        {dy(-4).times(monomial::var("d")), dy(-2).times(monomial::var("d", rational(2)))},
    };
    for (const auto& [lhs, rhs] : rejected) {
        REQUIRE(!dominated_on_unit(lhs, rhs));
        bool violated = false;
        for (double dv : grid) {
            std::map<std::string, double> vars{{"d", dv}};
            if (lhs.eval(vars) > rhs.eval(vars) + 1e-15) violated = true;
        }
        CHECK(violated);
    }
}

TEST_CASE("relaxed preset carries the dyadic knob values") {
    auto p = constants_profile::relaxed();
    CHECK(p.preset == profile_preset::relaxed);
    CHECK(p.feasible);
    CHECK(p.alpha == doctest::Approx(std::ldexp(1.0, -4)).epsilon(1e-15));
    CHECK(p.alpha0 == doctest::Approx(std::ldexp(1.0, -3)).epsilon(1e-15));
    CHECK(p.alpha1 == doctest::Approx(std::exp2(-0.5)).epsilon(1e-15));
    CHECK(p.sigma == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(p.tau == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.eta == doctest::Approx(std::ldexp(1.0, -5)).epsilon(1e-15));
    CHECK(p.kappa == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(p.shrink == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.gain == doctest::Approx(std::ldexp(1.0, -10)).epsilon(1e-15));
    CHECK(p.size_frac == doctest::Approx(std::ldexp(1.0, -5)).epsilon(1e-15));
    CHECK(p.unif_beta_frac == doctest::Approx(std::ldexp(1.0, -4)).epsilon(1e-15));
    CHECK(p.density_floor == doctest::Approx(std::ldexp(1.0, -6)).epsilon(1e-15));
    CHECK(p.step_budget == 12);
    CHECK(p.search_budget == doctest::Approx(2e7));
    // every float knob is the shadow of its symbol
    for (const char* k : {"alpha", "alpha0", "alpha1", "sigma", "tau", "eta", "kappa",
                          "shrink", "gain", "size_frac", "unif_beta_frac", "density_floor"})
        CHECK(p.symbols.at(k).pow.empty());
}

TEST_CASE("faithful preset keeps symbolic dependence and stays infeasible") {
    auto p = constants_profile::paper_faithful();
    CHECK(p.preset == profile_preset::paper_faithful);
    CHECK(!p.feasible);
    REQUIRE(p.symbols.count("alpha") == 1);
    const auto& alpha = p.symbols.at("alpha");
    CHECK(alpha.pow.at("delta") == rational(12));
    CHECK(alpha.log2c == rational(-100));
    CHECK(alpha.eval({{"delta", 0.5}}) ==
          doctest::Approx(std::ldexp(1.0, -112)).epsilon(1e-12));
    // eta is pinned to 2^-100 alpha^3 exactly
    const auto& eta = p.symbols.at("eta");
    CHECK(eta.log2c == rational(-400));
    CHECK(eta.pow.at("delta") == rational(36));
    // the deep constants underflow any double shadow at the unit point
    CHECK(p.symbols.at("alpha0").eval({{"delta", 0.5}, {"beta1", 0.5}, {"beta2", 0.5}}) ==
          0.0);
}

TEST_CASE("profile relation checks all hold") {
    auto faithful = profile_relation_checks(constants_profile::paper_faithful());
    CHECK(faithful.size() == 16);
    for (const auto& r : faithful) {
        INFO(r.name, ": ", r.lhs, " vs ", r.rhs);
        CHECK(r.ok);
    }
    int strict = 0, boundary = 0;
    for (const auto& r : faithful) {
        strict += r.strict ? 1 : 0;
        boundary += r.method == "boundary" ? 1 : 0;
    }
    CHECK(strict == 2);
    CHECK(boundary == 1);

    auto relaxed = profile_relation_checks(constants_profile::relaxed());
    CHECK(relaxed.size() == 12);
    for (const auto& r : relaxed) {
        INFO(r.name, ": ", r.lhs, " vs ", r.rhs);
        CHECK(r.ok);
    }
}
