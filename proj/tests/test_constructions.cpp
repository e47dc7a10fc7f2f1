#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "corners/constructions.hpp"
#include "corners/errors.hpp"

using namespace corners;

TEST_CASE("progression scan on hand-built sets") {
    CHECK(is_three_term_ap_free(int_set{}));
    CHECK(is_three_term_ap_free(int_set{5}));
    CHECK(is_three_term_ap_free(int_set{0, 1, 3, 4}));
    CHECK_FALSE(is_three_term_ap_free(int_set{0, 1, 2}));
    CHECK_FALSE(is_three_term_ap_free(int_set{2, 8, 14}));
    auto ap = find_three_term_ap(int_set{7, 1, 4});
    REQUIRE(ap.has_value());
    CHECK((*ap)[0] == 1);
    CHECK((*ap)[1] == 4);
    CHECK((*ap)[2] == 7);
}

TEST_CASE("progression-free sets on small ranges") {
    auto b2 = behrend_set(2);
    CHECK(b2.set == int_set{0, 1});
    auto b9 = behrend_set(9);
    for (std::int64_t v : {0, 1, 3, 4}) CHECK(b9.set.contains(v));
    CHECK(b9.set.size() >= 4);
    CHECK(is_three_term_ap_free(b9.set));
}

TEST_CASE("progression-free density beats the digit floor at power-of-three sizes") {
    auto b = behrend_set(6561);
    CHECK(b.set.size() >= 256);
    CHECK(is_three_term_ap_free(b.set));
    for (auto v : b.set.elems()) {
        CHECK(v >= 0);
        CHECK(v < 6561);
    }
}

TEST_CASE("progression-free route sizes are monotone enough in n") {
    std::size_t prev = 0;
    for (std::int64_t n : {10, 50, 200, 1000, 5000}) {
        auto b = behrend_set(n);
        CHECK(is_three_term_ap_free(b.set));
        CHECK(b.set.size() >= prev);
        prev = b.set.size();
    }
}

TEST_CASE("difference-stripe lift of a single point is the diagonal") {
    auto res = corner_free_from_ap_free(int_set{0}, 4);
    CHECK(res.shift == 0);
    CHECK(res.a.size() == 4);
    for (std::int64_t i = 1; i <= 4; ++i) CHECK(res.a.contains(i, i));
    CHECK(is_corner_free(res.a, corner_mode::nonzero_d));
}

TEST_CASE("difference-stripe lift rejects sets with progressions") {
    CHECK_THROWS_AS(corner_free_from_ap_free(int_set{0, 2, 4}, 8), precondition_violated);
}

TEST_CASE("difference-stripe lift is corner-free and maximal over shifts") {
    auto b = behrend_set(20);
    auto res = corner_free_from_ap_free(b.set, 16);
    CHECK(is_corner_free(res.a, corner_mode::nonzero_d));
    // recompute the stripe mass at a spread of shifts; none may beat the chosen one
    for (std::int64_t c = -30; c <= 50; c += 7) {
        std::int64_t mass = 0;
        for (auto x : b.set.elems()) {
            std::int64_t d = std::llabs(x - c);
            if (d < 16) mass += 16 - d;
        }
        CHECK(mass <= static_cast<std::int64_t>(res.a.size()));
    }
}

TEST_CASE("random grid sets are reproducible and density-calibrated") {
    grid_set a = random_grid_set(32, 0.3, 99);
    grid_set b = random_grid_set(32, 0.3, 99);
    CHECK(a == b);
    grid_set c = random_grid_set(32, 0.3, 100);
    CHECK_FALSE(a == c);
    CHECK(random_grid_set(16, 0.0, 5).empty());
    CHECK(random_grid_set(16, 1.0, 5).size() == 256);
}

TEST_CASE("corner counts of dense random sets track the cubic prediction") {
    auto st = expected_corner_report(48, 0.5, 40, 2024);
    CHECK(st.counts.size() == 40);
    CHECK(st.stderr_mean > 0);
    CHECK(std::fabs(st.zscore) <= 5.0);
    // degenerate densities are exact
    auto full = expected_corner_report(12, 1.0, 3, 7);
    CHECK(full.mean == doctest::Approx(static_cast<double>(full_grid_corner_count(12))));
    CHECK(full.stddev == 0.0);
    auto empty = expected_corner_report(12, 0.0, 3, 7);
    CHECK(empty.mean == 0.0);
}

TEST_CASE("product corner identity is exact") {
    auto id = product_corner_check(int_set{1, 2, 4, 7}, int_set{1, 3, 4, 6});
    CHECK(id.equal);
    auto idf = product_corner_check(int_set::interval(1, 9), int_set::interval(1, 9));
    CHECK(idf.equal);
    CHECK(idf.direct == full_grid_corner_count(9));
}

TEST_CASE("product corner counts track the pair-density scaling, not the cube") {
    auto st = product_corner_report(48, 0.5, 0.5, 40, 515);
    CHECK(std::fabs(st.z_product) <= 5.0);
    // the cubic prediction is far off for products
    CHECK(std::fabs(st.z_cube) > 5.0);
}
