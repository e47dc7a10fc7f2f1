#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "corners/bohr.hpp"
#include "corners/constructions.hpp"
#include "corners/errors.hpp"

using namespace corners;

namespace {

const double golden = 0.6180339887498949;

double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1p-53;
}

} // namespace

TEST_CASE("membership on rational frequencies is exact") {
    bohr_spec spec;
    spec.theta = {0.5};
    spec.eps = 0.3;
    spec.radius = 10;
    auto lam = build_bohr(spec);
    CHECK(lam.size() == 11);
    for (auto x : lam.set().elems()) CHECK(x % 2 == 0);
    CHECK(lam.flagged().empty());

    spec.theta = {1.0 / 3.0};
    spec.eps = 0.4;
    spec.radius = 9;
    auto lam3 = build_bohr(spec);
    CHECK(lam3.size() == 19);
}

TEST_CASE("zero-dimensional specs are plain intervals") {
    bohr_spec spec;
    spec.eps = 0.7;
    spec.radius = 5;
    auto lam = build_bohr(spec);
    CHECK(lam.size() == 11);
    CHECK(lam.set().min() == -5);
    CHECK(lam.set().max() == 5);
}

TEST_CASE("offset translates the whole set") {
    bohr_spec spec;
    spec.theta = {0.5};
    spec.eps = 0.3;
    spec.radius = 10;
    spec.offset = 3;
    auto lam = build_bohr(spec);
    CHECK(lam.size() == 11);
    for (auto x : lam.set().elems()) CHECK((x - 3) % 2 == 0);
}

TEST_CASE("frequency analysis recognizes small rationals") {
    auto f = analyze_frequency(0.5);
    CHECK(f.rational);
    CHECK(f.p == 1);
    CHECK(f.q == 2);
    auto g = analyze_frequency(2.0 / 7.0);
    CHECK(g.rational);
    CHECK(g.q == 7);
    auto h = analyze_frequency(golden);
    CHECK_FALSE(h.rational);
    CHECK(freq_dist(h, 0) == 0.0);
    CHECK(freq_dist(g, 7) == 0.0);
    CHECK(freq_dist(g, 3) == doctest::Approx(1.0 / 7.0));
}

TEST_CASE("size lower bound holds across random specs") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 50; ++trial) {
        bohr_spec spec;
        int d = static_cast<int>(rng() % 4);
        for (int j = 0; j < d; ++j) spec.theta.push_back(unit_uniform(rng));
        spec.eps = 0.05 + 0.95 * unit_uniform(rng);
        spec.radius = 10 + static_cast<double>(rng() % 1991);
        auto lam = build_bohr(spec);
        auto rep = size_lower_bound(lam);
        CHECK(rep.ok);
    }
}

TEST_CASE("interval probe passes well inside the radius") {
    auto rep = probe_regular({}, 1.0, 750, 0.1);
    CHECK(rep.regular);
    CHECK(rep.base_size == 1501);
    for (const auto& p : rep.probes) {
        CHECK(std::fabs(p.radius1 - 750.0) < 0.1 * 750.0);
        CHECK(p.ok);
    }
}

TEST_CASE("probe windows stay strictly inside the stated fractions") {
    auto rep = probe_regular({golden}, 0.3, 400, 0.2);
    double we = window_factor(1, 0.2) * 0.3;
    double wr = window_factor(1, 0.2) * 400;
    for (const auto& p : rep.probes) {
        CHECK(std::fabs(p.eps1 - 0.3) < we);
        CHECK(std::fabs(p.radius1 - 400) < wr);
    }
}

TEST_CASE("regular pair search lands inside the half-open windows") {
    auto found = find_regular({golden}, 0.3, 500, 0.2);
    CHECK(found.report.regular);
    CHECK(found.set.spec().eps > 0.15);
    CHECK(found.set.spec().eps < 0.3);
    CHECK(found.set.spec().radius > 250);
    CHECK(found.set.spec().radius < 500);
    for (const auto& p : found.report.probes) CHECK(p.ok);
    // the stored set is exactly what its spec builds
    auto rebuilt = build_bohr(found.set.spec());
    CHECK(rebuilt.set() == found.set.set());
}

TEST_CASE("regular pair search failure modes") {
    CHECK_THROWS_AS(find_regular({golden}, 0.3, 1.5, 0.1), not_found);
    CHECK_THROWS_AS(find_regular({golden}, 0.3, 500, 0.2, 33, 0), not_found);
}

TEST_CASE("attendant of an interval host lands in the scaled window") {
    bohr_spec spec;
    spec.radius = 1000;
    auto host = build_bohr(spec);
    auto att = attendant(host, 0.1, {}, 0.1);
    CHECK(att.spec().radius >= 50);
    CHECK(att.spec().radius <= 100);
    CHECK(is_attendant_of(att.spec(), host.spec(), 0.1));
    CHECK(att.spec().offset == 0);
}

TEST_CASE("attendant can extend the frequency list") {
    bohr_spec spec;
    spec.radius = 800;
    auto host = build_bohr(spec);
    auto att = attendant(host, 0.2, {1.0 / 3.0}, 0.2);
    CHECK(att.spec().theta.size() == 1);
    CHECK(is_attendant_of(att.spec(), host.spec(), 0.2));
    for (auto x : att.set().elems())
        CHECK(freq_dist(analyze_frequency(1.0 / 3.0), x) < att.spec().eps);
}

TEST_CASE("conjugate convolution of unit blocks") {
    supp_fn f = supp_fn::indicator(int_set{0, 1});
    auto c = convolve(f, f);
    CHECK(c.at(0) == cplx(1.0, 0.0));
    CHECK(c.at(1) == cplx(2.0, 0.0));
    CHECK(c.at(2) == cplx(1.0, 0.0));
    CHECK(c.support_size() == 3);
}

TEST_CASE("convolution definition at spot values and under translation") {
    std::mt19937_64 rng(777);
    supp_fn f, g;
    for (int i = -4; i <= 4; ++i) {
        if (unit_uniform(rng) < 0.7)
            f.set(i, cplx(unit_uniform(rng) - 0.5, unit_uniform(rng) - 0.5));
        if (unit_uniform(rng) < 0.7)
            g.set(i, cplx(unit_uniform(rng) - 0.5, unit_uniform(rng) - 0.5));
    }
    auto c = convolve(f, g);
    for (std::int64_t n = -9; n <= 9; ++n) {
        cplx direct(0.0, 0.0);
        for (std::int64_t s = -6; s <= 6; ++s) direct += f.at(s) * std::conj(g.at(n - s));
        CHECK(std::abs(c.at(n) - direct) < 1e-12);
    }
    // translating the left factor translates the result
    auto ct = convolve(f.translated(5), g);
    for (std::int64_t n = -6; n <= 12; ++n) CHECK(std::abs(ct.at(n) - c.at(n - 5)) < 1e-12);
}

TEST_CASE("cover profile of a short block over a long interval") {
    bohr_spec hs;
    hs.radius = 100;
    auto host = build_bohr(hs);
    bohr_spec as;
    as.radius = 1;
    auto att = build_bohr(as);
    auto prof = cover_profile(host, att, 0.1);
    CHECK(prof.count_pos == 203);
    CHECK(prof.count_full == 199);
    CHECK(prof.l1_residual == doctest::Approx(4.0 / 3.0));
    CHECK(prof.pos_ok);
    CHECK(prof.full_ok);
    CHECK(prof.l1_ok);
    CHECK(prof.sandwich_ok);
    CHECK(prof.plus_ok);
    CHECK(prof.minus_ok);
    CHECK(prof.sumset_size == 203);
    CHECK(prof.sumset_ok);
    CHECK(prof.translate_cover_ok);
}

TEST_CASE("cover profile rejects oversized attendants") {
    bohr_spec hs;
    hs.radius = 100;
    auto host = build_bohr(hs);
    bohr_spec as;
    as.radius = 20;
    auto att = build_bohr(as);
    CHECK_THROWS_AS(cover_profile(host, att, 0.1), precondition_violated);
}

TEST_CASE("cover profile on a one-frequency regular host") {
    auto host = find_regular({golden}, 0.4, 4000, 0.25).set;
    auto att = attendant(host, window_factor(1, 0.25), {}, 0.25);
    auto prof = cover_profile(host, att, 0.25);
    CHECK(prof.pos_ok);
    CHECK(prof.full_ok);
    CHECK(prof.l1_ok);
    CHECK(prof.sandwich_ok);
    CHECK(prof.sumset_ok);
    CHECK(prof.translate_cover_ok);
}

TEST_CASE("local density residual in one dimension") {
    bohr_spec hs;
    hs.radius = 60;
    auto host = build_bohr(hs);
    bohr_spec as;
    as.radius = 4;
    auto att = build_bohr(as);
    std::mt19937_64 rng(4242);
    std::vector<std::int64_t> xs;
    for (std::int64_t v = -80; v <= 80; ++v)
        if (unit_uniform(rng) < 0.4) xs.push_back(v);
    int_set e(std::move(xs));
    auto res = local_density_residual_1d(e, host, att, 0, 0.1);
    CHECK(res.ok);
    CHECK(res.residual <= res.bound);
    auto res_shift = local_density_residual_1d(e, host, att, 7, 0.1);
    CHECK(res_shift.ok);
}

TEST_CASE("local density residual in two dimensions") {
    bohr_spec hs;
    hs.radius = 40;
    auto host = build_bohr(hs);
    bohr_spec as;
    as.radius = 2;
    auto att = build_bohr(as);
    grid_set e = random_grid_set(100, 0.35, 515);
    auto res = local_density_residual(e.translated(-50, -50), host, att, {0, 0}, 0.1);
    CHECK(res.ok);
    CHECK(res.global_density > 0.2);
    CHECK(res.global_density < 0.5);
}
