#include "corners/grid.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace corners {

namespace {

constexpr std::int64_t coord_limit = (std::int64_t{1} << 30);

void check_coord(std::int64_t v) {
    if (v >= coord_limit || v <= -coord_limit)
        throw bad_input("grid coordinate out of range: " + std::to_string(v));
}

} // namespace

grid_set::grid_set(std::vector<grid_point> pts, std::optional<grid_window> win)
    : pts_(std::move(pts)) {
    std::sort(pts_.begin(), pts_.end());
    pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
    for (const auto& p : pts_) {
        check_coord(p.x);
        check_coord(p.y);
    }
    if (win) {
        win_ = *win;
        for (const auto& p : pts_)
            if (!win_.contains(p.x, p.y))
                throw bad_input("point outside declared window");
    } else if (!pts_.empty()) {
        win_ = {pts_.front().x, pts_.front().x, pts_.front().y, pts_.front().y};
        for (const auto& p : pts_) {
            win_.x_lo = std::min(win_.x_lo, p.x);
            win_.x_hi = std::max(win_.x_hi, p.x);
            win_.y_lo = std::min(win_.y_lo, p.y);
            win_.y_hi = std::max(win_.y_hi, p.y);
        }
    }
    build_index();
}

void grid_set::build_index() {
    idx_.clear();
    idx_.reserve(pts_.size() * 2);
    rows_.clear();
    for (const auto& p : pts_) {
        idx_.insert(key(p.x, p.y));
        rows_[p.y].push_back(p.x);
    }
    for (auto& [y, xs] : rows_) std::sort(xs.begin(), xs.end());
}

grid_set grid_set::full(const grid_window& win) {
    std::vector<grid_point> pts;
    pts.reserve(static_cast<std::size_t>(std::max<std::int64_t>(win.area(), 0)));
    for (std::int64_t x = win.x_lo; x <= win.x_hi; ++x)
        for (std::int64_t y = win.y_lo; y <= win.y_hi; ++y) pts.push_back({x, y});
    return grid_set(std::move(pts), win);
}

grid_set grid_set::square(std::int64_t n) {
    if (n < 1) throw bad_input("square: n must be positive");
    return full({1, n, 1, n});
}

grid_set grid_set::centered_square(std::int64_t n) {
    if (n < 0) throw bad_input("centered_square: n must be nonnegative");
    return full({-n, n, -n, n});
}

grid_set grid_set::translated(std::int64_t dx, std::int64_t dy) const {
    std::vector<grid_point> pts;
    pts.reserve(pts_.size());
    for (const auto& p : pts_) pts.push_back({p.x + dx, p.y + dy});
    grid_window w{win_.x_lo + dx, win_.x_hi + dx, win_.y_lo + dy, win_.y_hi + dy};
    return grid_set(std::move(pts), w);
}

grid_set grid_set::intersect(const grid_set& other) const {
    const grid_set& small = size() <= other.size() ? *this : other;
    const grid_set& big = size() <= other.size() ? other : *this;
    std::vector<grid_point> pts;
    for (const auto& p : small.pts_)
        if (big.contains(p)) pts.push_back(p);
    return grid_set(std::move(pts));
}

grid_set grid_set::reflected_through(const grid_point& v) const {
    std::vector<grid_point> pts;
    pts.reserve(pts_.size());
    for (const auto& p : pts_) pts.push_back({v.x - p.x, v.y - p.y});
    return grid_set(std::move(pts));
}

grid_set grid_set::sheared_x(std::int64_t s) const {
    std::vector<grid_point> pts;
    pts.reserve(pts_.size());
    for (const auto& p : pts_) pts.push_back({p.x + s * p.y, p.y});
    return grid_set(std::move(pts));
}

grid_set grid_set::sheared_y(std::int64_t s) const {
    std::vector<grid_point> pts;
    pts.reserve(pts_.size());
    for (const auto& p : pts_) pts.push_back({p.x, p.y + s * p.x});
    return grid_set(std::move(pts));
}

grid_set grid_set::restricted_to(const grid_window& win) const {
    std::vector<grid_point> pts;
    for (const auto& p : pts_)
        if (win.contains(p.x, p.y)) pts.push_back(p);
    return grid_set(std::move(pts), win);
}

bool grid_set::is_subset_of(const grid_set& other) const {
    for (const auto& p : pts_)
        if (!other.contains(p)) return false;
    return true;
}

grid_fn grid_fn::indicator(const grid_set& a) {
    grid_fn f;
    for (const auto& p : a.points()) f.vals_[p] = cplx(1.0, 0.0);
    return f;
}

grid_fn grid_fn::balanced(const grid_set& a, const grid_set& host) {
    if (host.empty()) throw bad_input("balanced: empty host");
    std::size_t inside = 0;
    for (const auto& p : host.points()) inside += a.contains(p) ? 1 : 0;
    double delta = static_cast<double>(inside) / static_cast<double>(host.size());
    grid_fn f;
    for (const auto& p : host.points())
        f.vals_[p] = cplx((a.contains(p) ? 1.0 : 0.0) - delta, 0.0);
    return f;
}

void grid_fn::set(const grid_point& p, cplx v) {
    if (v == cplx(0.0, 0.0))
        vals_.erase(p);
    else
        vals_[p] = v;
}

cplx grid_fn::at(std::int64_t x, std::int64_t y) const {
    auto it = vals_.find({x, y});
    return it == vals_.end() ? cplx(0.0, 0.0) : it->second;
}

grid_fn grid_fn::translated(std::int64_t dx, std::int64_t dy) const {
    grid_fn g;
    for (const auto& [p, v] : vals_) g.vals_[{p.x + dx, p.y + dy}] = v;
    return g;
}

std::int64_t count_corners(const grid_set& a, corner_mode mode) {
    std::int64_t count = 0;
    for (const auto& [m, xs] : a.rows()) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            for (std::size_t j = 0; j < xs.size(); ++j) {
                if (i == j) continue;
                std::int64_t d = xs[j] - xs[i];
                if (mode == corner_mode::positive_d && d < 0) continue;
                if (a.contains(xs[i], m + d)) ++count;
            }
        }
    }
    if (mode == corner_mode::include_zero_d) count += static_cast<std::int64_t>(a.size());
    return count;
}

std::optional<corner_triple> find_corner(const grid_set& a, corner_mode mode) {
    if (mode == corner_mode::include_zero_d && !a.empty()) {
        const auto& p = a.points().front();
        return corner_triple{p.x, p.y, 0};
    }
    std::optional<corner_triple> best;
    for (const auto& [m, xs] : a.rows()) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            for (std::size_t j = 0; j < xs.size(); ++j) {
                if (i == j) continue;
                std::int64_t d = xs[j] - xs[i];
                if (mode == corner_mode::positive_d && d < 0) continue;
                if (!a.contains(xs[i], m + d)) continue;
                corner_triple c{xs[i], m, d};
                if (!best || std::tuple(c.k, c.m, c.d) < std::tuple(best->k, best->m, best->d))
                    best = c;
            }
        }
    }
    return best;
}

bool is_corner_free(const grid_set& a, corner_mode mode) {
    return !find_corner(a, mode).has_value();
}

std::int64_t full_grid_corner_count(std::int64_t n) {
    std::int64_t total = 0;
    for (std::int64_t d = 1; d < n; ++d) total += (n - d) * (n - d);
    return total;
}

// ---------------------------------------------------------------------------
// exact maximum corner-free search

namespace {

struct bnb_state {
    std::int64_t n;
    corner_mode mode;
    std::vector<grid_point> cells;        // (x, y) lexicographic
    std::vector<char> chosen;             // by cell index
    std::unordered_set<std::uint64_t> chosen_keys;
    std::vector<std::size_t> best;        // chosen indices of current best
    std::size_t chosen_count = 0;
    std::vector<std::size_t> current;
    std::uint64_t nodes = 0;
    std::uint64_t budget = 0;

    bool chosen_at(std::int64_t x, std::int64_t y) const {
        return x >= 1 && x <= n && y >= 1 && y <= n &&
               chosen_keys.count(grid_set::key(x, y)) != 0;
    }

    // Would including (x, y) complete a corner with two already chosen cells?
    bool completes_corner(std::int64_t x, std::int64_t y) const {
        for (std::int64_t d = -(n - 1); d <= n - 1; ++d) {
            if (d == 0) continue;
            if (mode == corner_mode::positive_d && d < 0) continue;
            // as base (k, m)
            if (chosen_at(x + d, y) && chosen_at(x, y + d)) return true;
            // as horizontal partner (k+d, m)
            if (chosen_at(x - d, y) && chosen_at(x - d, y + d)) return true;
            // as vertical partner (k, m+d)
            if (chosen_at(x, y - d) && chosen_at(x + d, y - d)) return true;
        }
        return false;
    }

    // Greedy pairwise-disjoint packing of corners lying entirely in the
    // undecided suffix; each one forces losing at least one cell there.
    std::size_t disjoint_corner_packing(std::size_t from) const {
        std::unordered_set<std::uint64_t> used;
        std::size_t packed = 0;
        auto undecided = [&](std::int64_t x, std::int64_t y) {
            if (x < 1 || x > n || y < 1 || y > n) return false;
            // cells are (x,y)-lexicographic, so the undecided suffix is
            // everything at or after cells[from]
            const grid_point& f = cells[from];
            if (x < f.x || (x == f.x && y < f.y)) return false;
            return used.count(grid_set::key(x, y)) == 0;
        };
        for (std::size_t i = from; i < cells.size(); ++i) {
            std::int64_t x = cells[i].x, y = cells[i].y;
            if (!undecided(x, y)) continue;
            for (std::int64_t d = 1; d <= n - 1; ++d) {
                if (undecided(x + d, y) && undecided(x, y + d)) {
                    used.insert(grid_set::key(x, y));
                    used.insert(grid_set::key(x + d, y));
                    used.insert(grid_set::key(x, y + d));
                    ++packed;
                    break;
                }
            }
        }
        return packed;
    }

    void dfs(std::size_t i) {
        if (++nodes > budget)
            throw max_search_budget_exceeded(
                "corner-free search exceeded node budget; best size so far " +
                    std::to_string(best.size()),
                best.size());
        if (i == cells.size()) {
            if (chosen_count > best.size()) best = current;
            return;
        }
        std::size_t remaining = cells.size() - i;
        if (chosen_count + remaining <= best.size()) return;
        if (chosen_count + remaining - disjoint_corner_packing(i) <= best.size()) return;

        const grid_point& c = cells[i];
        if (!completes_corner(c.x, c.y)) {
            chosen_keys.insert(grid_set::key(c.x, c.y));
            current.push_back(i);
            ++chosen_count;
            dfs(i + 1);
            --chosen_count;
            current.pop_back();
            chosen_keys.erase(grid_set::key(c.x, c.y));
        }
        dfs(i + 1);
    }
};

} // namespace

max_corner_free_result max_corner_free(std::int64_t n, corner_mode mode,
                                       std::uint64_t node_budget) {
    if (n < 1) throw bad_input("max_corner_free: n must be positive");
    if (mode == corner_mode::include_zero_d)
        throw bad_input("max_corner_free: every nonempty set has a zero-difference triple");
    bnb_state st;
    st.n = n;
    st.mode = mode;
    st.budget = node_budget;
    for (std::int64_t x = 1; x <= n; ++x)
        for (std::int64_t y = 1; y <= n; ++y) st.cells.push_back({x, y});
    st.dfs(0);

    std::vector<grid_point> pts;
    pts.reserve(st.best.size());
    for (auto i : st.best) pts.push_back(st.cells[i]);
    max_corner_free_result res;
    res.n = n;
    res.mode = mode;
    res.size = st.best.size();
    res.witness = grid_set(std::move(pts), grid_window{1, n, 1, n});
    res.density = rational(static_cast<std::int64_t>(st.best.size()), n * n);
    res.nodes = st.nodes;
    return res;
}

symmetrize_result symmetrize(const grid_set& a, std::int64_t n) {
    if (n < 0) throw bad_input("symmetrize: n must be nonnegative");
    grid_window box{-n, n, -n, n};
    for (const auto& p : a.points())
        if (!box.contains(p.x, p.y)) throw bad_input("symmetrize: set leaves [-n, n]^2");
    if (auto c = find_corner(a, corner_mode::positive_d))
        throw precondition_violated("symmetrize: input has a positive-difference corner at (" +
                                    std::to_string(c->k) + "," + std::to_string(c->m) +
                                    ") d=" + std::to_string(c->d));

    // c(v) = |A ∩ (v - A)| is the number of ordered pairs (s, t) in A x A
    // with s + t = v; accumulate over all pairs, then take the least
    // maximizing v.
    std::int64_t side = 4 * n + 1;
    std::vector<std::int64_t> acc(static_cast<std::size_t>(side * side), 0);
    auto slot = [&](std::int64_t vx, std::int64_t vy) {
        return static_cast<std::size_t>((vx + 2 * n) * side + (vy + 2 * n));
    };
    for (const auto& s : a.points())
        for (const auto& t : a.points()) ++acc[slot(s.x + t.x, s.y + t.y)];

    grid_point best_v{-2 * n, -2 * n};
    std::int64_t best_c = -1;
    for (std::int64_t vx = -2 * n; vx <= 2 * n; ++vx)
        for (std::int64_t vy = -2 * n; vy <= 2 * n; ++vy)
            if (acc[slot(vx, vy)] > best_c) {
                best_c = acc[slot(vx, vy)];
                best_v = {vx, vy};
            }

    symmetrize_result res;
    res.v = best_v;
    res.a1 = a.intersect(a.reflected_through(best_v));
    res.input_size = a.size();
    res.output_size = res.a1.size();
    // |A1| >= |A|^2 / (4 (2n+1)^2), compared exactly
    __int128 lhs = static_cast<__int128>(res.output_size) * 4 * (2 * n + 1) * (2 * n + 1);
    __int128 rhs = static_cast<__int128>(res.input_size) * res.input_size;
    res.size_bound_ok = lhs >= rhs;
    res.nonzero_corner_free = is_corner_free(res.a1, corner_mode::nonzero_d);
    return res;
}

cplx corner_sum_sigma0(const grid_set& h, const grid_set& g, const grid_fn& f) {
    // Group G by diagonal a - b.  For (k, m) in H, the points of G on
    // diagonal k - m are exactly the (k+r, m+r), and then m + r equals the
    // second coordinate of the G point.
    std::unordered_map<std::int64_t, std::vector<grid_point>> diag;
    for (const auto& p : g.points()) diag[p.x - p.y].push_back(p);

    cplx total(0.0, 0.0);
    for (const auto& p : h.points()) {
        auto it = diag.find(p.x - p.y);
        if (it == diag.end()) continue;
        for (const auto& q : it->second) total += f.at(p.x, q.y);
    }
    return total;
}

} // namespace corners
