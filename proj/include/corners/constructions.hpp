#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "grid.hpp"
#include "intset.hpp"

namespace corners {

std::optional<std::array<std::int64_t, 3>> find_three_term_ap(const int_set& b);
bool is_three_term_ap_free(const int_set& b);

struct behrend_result {
    int_set set;                 // subset of [0, n-1], free of nontrivial 3-term APs
    std::int64_t n = 0;
    std::string route;           // "digits" or "shell"
    int shell_dim = 0;           // populated on the shell route
    std::int64_t shell_base = 0;
    std::int64_t shell_radius = 0;
};

// Dense progression-free subset of [0, n-1].  Two candidate routes: numbers
// whose base-3 digits are all 0 or 1, and the best sphere shell over digit
// vectors with digits small enough that integer addition cannot carry.  The
// larger set wins; shell ties go to the lower dimension.  The output is
// rechecked by the exact pair scan for n up to 1e5.
behrend_result behrend_set(std::int64_t n);

struct centered_difference_result {
    grid_set a;            // {(x, y) in [1, n]^2 : x - y in B - c}
    std::int64_t shift;    // the chosen c
    std::int64_t n = 0;
};

// Lift a progression-free set of integers to a corner-free subset of
// [1, n]^2 along difference stripes, centering B by the shift that maximizes
// the point count (ties to the least shift).
centered_difference_result corner_free_from_ap_free(const int_set& b, std::int64_t n);

grid_set random_grid_set(std::int64_t n, double delta, std::uint64_t seed);
int_set random_int_set(std::int64_t n, double beta, std::uint64_t seed);

struct corner_count_stats {
    std::int64_t n = 0;
    double delta = 0;
    int trials = 0;
    std::vector<std::int64_t> counts;
    double mean = 0;
    double stddev = 0;
    double stderr_mean = 0;
    double predicted = 0;       // delta^3 * full-grid corner count
    double zscore = 0;
};

corner_count_stats expected_corner_report(std::int64_t n, double delta, int trials,
                                          std::uint64_t seed);

grid_set product_grid_set(const int_set& e1, const int_set& e2);

struct product_corner_identity {
    std::int64_t direct = 0;          // corner count of E1 x E2
    std::int64_t via_pair_counts = 0; // sum over d > 0 of r_{E1}(d) r_{E2}(d)
    bool equal = false;
};

product_corner_identity product_corner_check(const int_set& e1, const int_set& e2);

struct product_corner_stats {
    std::int64_t n = 0;
    double beta1 = 0, beta2 = 0;
    int trials = 0;
    std::vector<std::int64_t> counts;
    double mean = 0;
    double stddev = 0;
    double stderr_mean = 0;
    double predicted_product = 0;   // beta1^2 beta2^2 * full-grid corner count
    double predicted_cube = 0;      // (beta1 beta2)^3 * full-grid corner count
    double z_product = 0;
    double z_cube = 0;
};

product_corner_stats product_corner_report(std::int64_t n, double beta1, double beta2,
                                           int trials, std::uint64_t seed);

} // namespace corners
