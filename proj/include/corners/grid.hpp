#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "errors.hpp"
#include "intset.hpp"
#include "rational.hpp"

namespace corners {

// A corner with difference d is the triple {(k,m), (k+d,m), (k,m+d)}.
// Three counting modes: d > 0 only, d != 0, or all d where d = 0 degenerates
// to a single point and contributes |A|.
enum class corner_mode { positive_d, nonzero_d, include_zero_d };

struct grid_point {
    std::int64_t x = 0;
    std::int64_t y = 0;
    friend bool operator==(const grid_point& a, const grid_point& b) {
        return a.x == b.x && a.y == b.y;
    }
    friend bool operator<(const grid_point& a, const grid_point& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    }
};

struct corner_triple {
    std::int64_t k = 0, m = 0, d = 0;
};

struct grid_window {
    std::int64_t x_lo = 0, x_hi = -1, y_lo = 0, y_hi = -1;
    bool contains(std::int64_t x, std::int64_t y) const {
        return x >= x_lo && x <= x_hi && y >= y_lo && y <= y_hi;
    }
    std::int64_t width() const { return x_hi - x_lo + 1; }
    std::int64_t height() const { return y_hi - y_lo + 1; }
    std::int64_t area() const { return width() * height(); }
    friend bool operator==(const grid_window& a, const grid_window& b) {
        return a.x_lo == b.x_lo && a.x_hi == b.x_hi && a.y_lo == b.y_lo && a.y_hi == b.y_hi;
    }
};

// Finite subset of Z^2.  Points are kept in (x, y) lexicographic order; rows
// (fixed y) are indexed separately because corner scans walk same-row pairs.
// Coordinates are bounded so membership keys pack into 64 bits.
class grid_set {
public:
    grid_set() = default;
    grid_set(std::vector<grid_point> pts, std::optional<grid_window> win = std::nullopt);

    static grid_set full(const grid_window& win);
    static grid_set square(std::int64_t n);                  // full [1, n]^2
    static grid_set centered_square(std::int64_t n);         // full [-n, n]^2

    const grid_window& window() const { return win_; }
    const std::vector<grid_point>& points() const { return pts_; }
    std::size_t size() const { return pts_.size(); }
    bool empty() const { return pts_.empty(); }
    bool contains(std::int64_t x, std::int64_t y) const { return idx_.count(key(x, y)) != 0; }
    bool contains(const grid_point& p) const { return contains(p.x, p.y); }

    // y -> sorted x coordinates of points in that row
    const std::map<std::int64_t, std::vector<std::int64_t>>& rows() const { return rows_; }

    grid_set translated(std::int64_t dx, std::int64_t dy) const;
    grid_set intersect(const grid_set& other) const;
    grid_set reflected_through(const grid_point& v) const;   // v - A
    grid_set sheared_x(std::int64_t s) const;                // (x, y) -> (x + s*y, y)
    grid_set sheared_y(std::int64_t s) const;                // (x, y) -> (x, y + s*x)
    grid_set restricted_to(const grid_window& win) const;
    bool is_subset_of(const grid_set& other) const;

    friend bool operator==(const grid_set& a, const grid_set& b) { return a.pts_ == b.pts_; }

    static std::uint64_t key(std::int64_t x, std::int64_t y) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
               static_cast<std::uint64_t>(static_cast<std::uint32_t>(y));
    }

private:
    void build_index();

    grid_window win_;
    std::vector<grid_point> pts_;
    std::unordered_set<std::uint64_t> idx_;
    std::map<std::int64_t, std::vector<std::int64_t>> rows_;
};

// Finitely supported complex function on Z^2.  Entries iterate in point
// order, which keeps floating sums reproducible run to run.
class grid_fn {
public:
    grid_fn() = default;

    static grid_fn indicator(const grid_set& a);
    // (A - delta) restricted to host, delta = |A ∩ host| / |host|
    static grid_fn balanced(const grid_set& a, const grid_set& host);

    void set(const grid_point& p, cplx v);
    cplx at(std::int64_t x, std::int64_t y) const;
    const std::map<grid_point, cplx>& entries() const { return vals_; }
    std::size_t support_size() const { return vals_.size(); }
    grid_fn translated(std::int64_t dx, std::int64_t dy) const;

private:
    std::map<grid_point, cplx> vals_;
};

std::int64_t count_corners(const grid_set& a, corner_mode mode);
std::optional<corner_triple> find_corner(const grid_set& a, corner_mode mode);
bool is_corner_free(const grid_set& a, corner_mode mode);

// Corner count of the full [1, n]^2 grid in positive-difference mode.
std::int64_t full_grid_corner_count(std::int64_t n);

struct max_corner_free_result {
    std::int64_t n = 0;
    corner_mode mode = corner_mode::positive_d;
    std::size_t size = 0;
    grid_set witness;
    rational density;       // size / n^2
    std::uint64_t nodes = 0;
};

// Exact maximum corner-free subset of [1, n]^2 by depth-first search over
// cells in (x, y) order, include branch first.  Pruning: remaining-cell
// capacity and a greedy packing of pairwise disjoint corners that live
// entirely in undecided cells (each such corner costs at least one cell).
// The include-first order makes the first maximum found the lexicographically
// least witness, so ties never need revisiting.
max_corner_free_result max_corner_free(std::int64_t n,
                                       corner_mode mode = corner_mode::positive_d,
                                       std::uint64_t node_budget = 10'000'000);

struct max_search_budget_exceeded : budget_exceeded {
    std::size_t best_size;
    max_search_budget_exceeded(const std::string& what, std::size_t best)
        : budget_exceeded(what), best_size(best) {}
};

struct symmetrize_result {
    grid_point v{};
    grid_set a1;
    std::size_t input_size = 0;
    std::size_t output_size = 0;
    bool size_bound_ok = false;        // |A1| >= |A|^2 / (4 (2N+1)^2), exact compare
    bool nonzero_corner_free = false;  // A1 has no corner with d != 0
};

// Best additive symmetrization of A ⊆ [-n, n]^2: the shift v in [-2n, 2n]^2
// maximizing |A ∩ (v - A)|, ties to the least v.  Requires A free of
// positive-difference corners; the output is then free of all nonzero ones.
symmetrize_result symmetrize(const grid_set& a, std::int64_t n);

// Sum over points (k, m) of H and integers r of
//   H(k,m) * G(k+r, m+r) * f(k, m+r),
// r = 0 included.  Evaluated by grouping G along diagonals x - y, which pins
// m + r = b for each G point (a, b) on the diagonal of (k, m).
cplx corner_sum_sigma0(const grid_set& h, const grid_set& g, const grid_fn& f);

} // namespace corners
