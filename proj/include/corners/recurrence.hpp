#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "corners/errors.hpp"

namespace corners {

// Finite metric probability space with two self-maps.  The checks are split
// out so callers can report which hypothesis an instance breaks.
struct finite_system {
    std::size_t n = 0;
    std::vector<std::vector<double>> dist;   // symmetric, zero diagonal
    std::vector<std::size_t> s_map, r_map;
    std::vector<double> mu;                  // probability weights

    // torus Z_m x Z_m with the translations by (a1, a2) and (b1, b2), the
    // normalized max quotient metric, and uniform measure
    static finite_system torus_translations(std::int64_t m, std::int64_t a1, std::int64_t a2,
                                            std::int64_t b1, std::int64_t b2);

    bool commutes() const;
    bool preserves_measure() const;
    // throws bad_input on shape errors, asymmetry, nonzero diagonal, negative
    // entries, a triangle violation, or weights that do not sum to one
    void validate() const;
};

// Y(t) = {x in Y : for all i in [1, t], S^i x not in Y or R^i x not in Y}.
// bound_lt is the exact maximum corner-free density of the t x t grid for
// t <= 4 and the trivial bound 1 above that.
struct return_set_result {
    std::vector<std::size_t> yt;
    double mu_y = 0, mu_yt = 0;
    double bound_lt = 1.0;
    bool bound_exact = false;
    bool verdict = false;        // mu_yt <= bound_lt
    int t = 0;
};
return_set_result simultaneous_return_set(const finite_system& sys,
                                          const std::vector<std::size_t>& y, int t);

// C_N(x) = min over 1 <= k <= N of d(T^k x, x) for each map alone, and the
// simultaneous constant min over k of max(d(S^k x, x), d(R^k x, x)).
struct recurrence_values {
    std::vector<double> c_s, c_r, c_pair;
};
recurrence_values recurrence_constants(const finite_system& sys, int n_steps);

// Minimal number of eps-balls centered at system points that cover g.
// Exhaustive set-cover when |g| <= 20, greedy upper bound with the flag
// cleared otherwise.
struct covering_result {
    std::size_t nets = 0;
    bool exact = false;
};
covering_result covering_number(const std::vector<std::size_t>& g, const finite_system& sys,
                                double eps);

} // namespace corners
