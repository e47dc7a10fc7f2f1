#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "corners/errors.hpp"
#include "corners/grid.hpp"
#include "corners/recurrence.hpp"

using namespace corners;

namespace {

// apply a map k times starting fresh from x
std::size_t pow_map(const std::vector<std::size_t>& f, std::size_t x, int k) {
    for (int i = 0; i < k; ++i) x = f[x];
    return x;
}

// literal reading of the return-set definition, independent powers per step
std::vector<std::size_t> oracle_yt(const finite_system& sys,
                                   const std::vector<std::size_t>& y, int t) {
    std::vector<char> in_y(sys.n, 0);
    for (std::size_t x : y) in_y[x] = 1;
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < sys.n; ++x) {
        if (!in_y[x]) continue;
        bool keep = true;
        for (int i = 1; i <= t && keep; ++i)
            if (in_y[pow_map(sys.s_map, x, i)] && in_y[pow_map(sys.r_map, x, i)]) keep = false;
        if (keep) out.push_back(x);
    }
    return out;
}

std::vector<std::size_t> random_subset(std::size_t n, double p, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::bernoulli_distribution coin(p);
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < n; ++x)
        if (coin(rng)) out.push_back(x);
    return out;
}

// n isolated points at pairwise distance one, both maps the cyclic shift
finite_system unit_cycle(std::size_t n) {
    finite_system sys;
    sys.n = n;
    sys.dist.assign(n, std::vector<double>(n, 1.0));
    for (std::size_t i = 0; i < n; ++i) sys.dist[i][i] = 0.0;
    sys.s_map.resize(n);
    sys.r_map.resize(n);
    for (std::size_t i = 0; i < n; ++i) sys.s_map[i] = sys.r_map[i] = (i + 1) % n;
    sys.mu.assign(n, 1.0 / static_cast<double>(n));
    return sys;
}

// planar points with the Euclidean metric and identity dynamics
finite_system point_cloud(const std::vector<std::pair<double, double>>& pts) {
    finite_system sys;
    sys.n = pts.size();
    sys.dist.assign(sys.n, std::vector<double>(sys.n, 0.0));
    for (std::size_t i = 0; i < sys.n; ++i)
        for (std::size_t j = i + 1; j < sys.n; ++j) {
            double d = std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second);
            sys.dist[i][j] = sys.dist[j][i] = d;
        }
    sys.s_map.resize(sys.n);
    sys.r_map.resize(sys.n);
    for (std::size_t i = 0; i < sys.n; ++i) sys.s_map[i] = sys.r_map[i] = i;
    sys.mu.assign(sys.n, 1.0 / static_cast<double>(sys.n));
    return sys;
}

} // namespace

TEST_CASE("finite system validation rejects malformed inputs") {
    auto good = finite_system::torus_translations(3, 1, 0, 0, 1);
    CHECK_NOTHROW(good.validate());
    CHECK(good.commutes());
    CHECK(good.preserves_measure());

    auto sys = good;
    sys.dist[0][1] = 0.9;                       // breaks symmetry
    CHECK_THROWS_AS(sys.validate(), bad_input);

    sys = good;
    sys.dist[1][1] = 0.2;
    CHECK_THROWS_AS(sys.validate(), bad_input);

    sys = good;
    sys.dist[0][2] = -0.1;
    CHECK_THROWS_AS(sys.validate(), bad_input);

    sys = good;
    sys.dist[0][4] = sys.dist[4][0] = 5.0;      // detour through any third point is shorter
    CHECK_THROWS_AS(sys.validate(), bad_input);

    sys = good;
    sys.s_map[3] = sys.n + 7;
    CHECK_THROWS_AS(sys.validate(), bad_input);

    sys = good;
    sys.r_map.pop_back();
    CHECK_THROWS_AS(sys.validate(), bad_input);

    sys = good;
    sys.mu[0] += 0.5;
    CHECK_THROWS_AS(sys.validate(), bad_input);

    sys = good;
    sys.mu[0] = -sys.mu[0];
    CHECK_THROWS_AS(sys.validate(), bad_input);

    sys = finite_system{};
    CHECK_THROWS_AS(sys.validate(), bad_input);

    CHECK_THROWS_AS(finite_system::torus_translations(0, 0, 0, 0, 0), bad_input);
}

TEST_CASE("return set preconditions") {
    auto sys = finite_system::torus_translations(4, 1, 0, 0, 1);
    std::vector<std::size_t> y = {0, 1, 5};

    CHECK_THROWS_AS(simultaneous_return_set(sys, y, 0), bad_input);
    CHECK_THROWS_AS(simultaneous_return_set(sys, {99}, 2), bad_input);

    auto bent = sys;
    // send one point off its translate; the maps then disagree on the order
    bent.s_map[0] = bent.s_map[1];
    CHECK_FALSE(bent.commutes());
    CHECK_THROWS_AS(simultaneous_return_set(bent, y, 2), precondition_violated);

    auto lossy = sys;
    lossy.s_map[0] = 0;
    lossy.s_map[3] = 0;                          // two points collapse, measure piles up
    if (lossy.commutes()) {
        CHECK_FALSE(lossy.preserves_measure());
        CHECK_THROWS_AS(simultaneous_return_set(lossy, y, 2), precondition_violated);
    } else {
        CHECK_THROWS_AS(simultaneous_return_set(lossy, y, 2), precondition_violated);
    }
}

TEST_CASE("identity dynamics empties every return set") {
    auto sys = finite_system::torus_translations(5, 0, 0, 0, 0);
    auto y = random_subset(sys.n, 0.5, 11);
    REQUIRE(!y.empty());
    for (int t : {1, 2, 3}) {
        auto res = simultaneous_return_set(sys, y, t);
        CHECK(res.yt.empty());
        CHECK(res.mu_yt == 0.0);
        CHECK(res.verdict);
        CHECK(res.mu_y == doctest::Approx(double(y.size()) / sys.n).epsilon(1e-12));
    }

    auto none = simultaneous_return_set(sys, {}, 2);
    CHECK(none.yt.empty());
    CHECK(none.mu_y == 0.0);
}

TEST_CASE("return set matches the literal definition on a torus") {
    auto sys = finite_system::torus_translations(7, 1, 0, 0, 1);
    for (std::uint32_t seed : {1u, 2u, 3u, 4u}) {
        auto y = random_subset(sys.n, 0.3, seed);
        for (int t : {1, 2, 3}) {
            auto res = simultaneous_return_set(sys, y, t);
            auto want = oracle_yt(sys, y, t);
            CHECK(res.yt == want);
            double mu = 0;
            for (std::size_t x : want) mu += sys.mu[x];
            CHECK(res.mu_yt == doctest::Approx(mu).epsilon(1e-12));
            CHECK(res.t == t);
        }
    }
}

TEST_CASE("return sets shrink as the horizon grows") {
    for (std::uint32_t seed : {5u, 6u, 7u}) {
        std::mt19937 rng(seed);
        std::int64_t m = 8;
        auto sys = finite_system::torus_translations(
            m, std::int64_t(rng() % m), std::int64_t(rng() % m), std::int64_t(rng() % m),
            std::int64_t(rng() % m));
        auto y = random_subset(sys.n, 0.4, seed * 31 + 1);
        auto prev = simultaneous_return_set(sys, y, 1);
        for (int t = 2; t <= 5; ++t) {
            auto cur = simultaneous_return_set(sys, y, t);
            CHECK(std::includes(prev.yt.begin(), prev.yt.end(), cur.yt.begin(), cur.yt.end()));
            CHECK(cur.mu_yt <= prev.mu_yt + 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("return set measure obeys the grid density bound across 200 systems") {
    // pin the bound values once against the exact grid search
    double four_bound = 0;
    {
        auto two = max_corner_free(2);
        auto three = max_corner_free(3);
        auto four = max_corner_free(4);
        CHECK(two.density.to_double() == 0.75);
        CHECK(three.density.to_double() == 7.0 / 9.0);
        CHECK(four.density.to_double() == 11.0 / 16.0);
        four_bound = four.density.to_double();
    }
    int checked = 0;
    for (std::uint32_t seed = 0; seed < 200; ++seed) {
        std::mt19937 rng(1000 + seed);
        std::int64_t m = 5 + std::int64_t(rng() % 6);
        auto sys = finite_system::torus_translations(
            m, std::int64_t(rng() % m), std::int64_t(rng() % m), std::int64_t(rng() % m),
            std::int64_t(rng() % m));
        int t = 2 + int(seed % 3);
        auto y = random_subset(sys.n, 0.45, seed * 7 + 3);
        auto res = simultaneous_return_set(sys, y, t);
        CHECK(res.bound_exact);
        CHECK(res.verdict);
        if (t == 2) CHECK(res.bound_lt == 0.75);
        if (t == 3) CHECK(res.bound_lt == 7.0 / 9.0);
        if (t == 4) CHECK(res.bound_lt == four_bound);
        ++checked;
    }
    CHECK(checked == 200);

    // beyond the searched grids only the trivial bound is certified
    auto sys = finite_system::torus_translations(6, 1, 2, 2, 1);
    auto res = simultaneous_return_set(sys, random_subset(sys.n, 0.4, 77), 5);
    CHECK(res.bound_lt == 1.0);
    CHECK_FALSE(res.bound_exact);
    CHECK(res.verdict);
}

TEST_CASE("equal maps force the one over t bound") {
    for (std::uint32_t seed = 0; seed < 30; ++seed) {
        std::mt19937 rng(4000 + seed);
        std::int64_t m = 5 + std::int64_t(rng() % 8);
        std::int64_t a1 = std::int64_t(rng() % m), a2 = std::int64_t(rng() % m);
        auto sys = finite_system::torus_translations(m, a1, a2, a1, a2);
        int t = 2 + int(seed % 3);
        auto y = random_subset(sys.n, 0.5, seed * 13 + 5);
        auto res = simultaneous_return_set(sys, y, t);
        CHECK(res.mu_yt <= 1.0 / t + 1e-12);
        CHECK(res.verdict);
    }
}

TEST_CASE("recurrence constants on degenerate dynamics") {
    auto still = finite_system::torus_translations(4, 0, 0, 0, 0);
    auto vals = recurrence_constants(still, 3);
    for (std::size_t x = 0; x < still.n; ++x) {
        CHECK(vals.c_s[x] == 0.0);
        CHECK(vals.c_r[x] == 0.0);
        CHECK(vals.c_pair[x] == 0.0);
    }

    auto cyc = unit_cycle(6);
    auto far_vals = recurrence_constants(cyc, 5);      // never returns inside the horizon
    auto home = recurrence_constants(cyc, 6);          // the sixth step is the identity
    for (std::size_t x = 0; x < cyc.n; ++x) {
        CHECK(far_vals.c_s[x] == 1.0);
        CHECK(far_vals.c_pair[x] == 1.0);
        CHECK(home.c_s[x] == 0.0);
        CHECK(home.c_r[x] == 0.0);
        CHECK(home.c_pair[x] == 0.0);
    }

    CHECK_THROWS_AS(recurrence_constants(cyc, 0), bad_input);
}

TEST_CASE("recurrence constants match a fresh orbit scan") {
    auto sys = finite_system::torus_translations(6, 2, 1, 3, 5);
    int n_steps = 9;
    auto vals = recurrence_constants(sys, n_steps);
    for (std::size_t x = 0; x < sys.n; ++x) {
        double bs = 2.0, br = 2.0, bp = 2.0;
        for (int k = 1; k <= n_steps; ++k) {
            double ds = sys.dist[pow_map(sys.s_map, x, k)][x];
            double dr = sys.dist[pow_map(sys.r_map, x, k)][x];
            bs = std::min(bs, ds);
            br = std::min(br, dr);
            bp = std::min(bp, std::max(ds, dr));
        }
        CHECK(vals.c_s[x] == bs);
        CHECK(vals.c_r[x] == br);
        CHECK(vals.c_pair[x] == bp);
    }
}

TEST_CASE("covering number agrees with subset search on a point cloud") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 12; ++i) pts.emplace_back(unit(rng), unit(rng));
    auto sys = point_cloud(pts);

    std::vector<std::size_t> g(sys.n);
    for (std::size_t i = 0; i < sys.n; ++i) g[i] = i;
    double eps = 0.3;
    auto res = covering_number(g, sys, eps);
    CHECK(res.exact);

    std::size_t best = g.size() + 1;
    for (std::uint32_t pick = 1; pick < (1u << sys.n); ++pick) {
        bool all = true;
        for (std::size_t i = 0; i < g.size() && all; ++i) {
            bool hit = false;
            for (std::size_t c = 0; c < sys.n && !hit; ++c)
                if ((pick >> c) & 1u)
                    if (sys.dist[c][g[i]] <= eps + 1e-12) hit = true;
            all = hit;
        }
        if (all) best = std::min(best, std::size_t(__builtin_popcount(pick)));
    }
    CHECK(res.nets == best);

    // one ball around any point reaches everything once eps tops the diameter
    double diam = 0;
    for (std::size_t i = 0; i < sys.n; ++i)
        for (std::size_t j = 0; j < sys.n; ++j) diam = std::max(diam, sys.dist[i][j]);
    auto whole = covering_number(g, sys, diam + 0.01);
    CHECK(whole.nets == 1);
    CHECK(whole.exact);

    // below the closest pair every point needs its own ball
    double closest = 10.0;
    for (std::size_t i = 0; i < sys.n; ++i)
        for (std::size_t j = i + 1; j < sys.n; ++j) closest = std::min(closest, sys.dist[i][j]);
    auto apart = covering_number(g, sys, closest * 0.5);
    CHECK(apart.nets == g.size());
    CHECK(apart.exact);

    auto none = covering_number({}, sys, eps);
    CHECK(none.nets == 0);
    CHECK(none.exact);

    CHECK_THROWS_AS(covering_number(g, sys, 0.0), bad_input);
    CHECK_THROWS_AS(covering_number({sys.n + 2}, sys, eps), bad_input);
}

TEST_CASE("large targets fall back to a flagged greedy cover") {
    auto sys = finite_system::torus_translations(5, 1, 0, 0, 1);
    std::vector<std::size_t> g(sys.n);
    for (std::size_t i = 0; i < sys.n; ++i) g[i] = i;
    REQUIRE(g.size() == 25);

    // radius 0.21 balls are 3x3 blocks; row coverage forces at least four
    auto res = covering_number(g, sys, 0.21);
    CHECK_FALSE(res.exact);
    CHECK(res.nets >= 4);
    CHECK(res.nets <= 10);
}
