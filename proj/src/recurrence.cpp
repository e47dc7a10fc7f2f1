#include "corners/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

#include "corners/grid.hpp"

namespace corners {

namespace {

std::int64_t circ(std::int64_t x, std::int64_t m) {
    std::int64_t r = ((x % m) + m) % m;
    return std::min(r, m - r);
}

void check_map(const std::vector<std::size_t>& f, std::size_t n, const char* name) {
    if (f.size() != n) {
        std::ostringstream os;
        os << "finite_system: " << name << " has " << f.size() << " entries for " << n
           << " points";
        throw bad_input(os.str());
    }
    for (std::size_t v : f)
        if (v >= n) throw bad_input(std::string("finite_system: ") + name + " leaves the space");
}

} // namespace

finite_system finite_system::torus_translations(std::int64_t m, std::int64_t a1, std::int64_t a2,
                                                std::int64_t b1, std::int64_t b2) {
    if (m < 1) throw bad_input("torus_translations: m must be positive");
    finite_system sys;
    sys.n = static_cast<std::size_t>(m * m);
    auto idx = [m](std::int64_t i, std::int64_t j) {
        return static_cast<std::size_t>((((i % m) + m) % m) * m + (((j % m) + m) % m));
    };
    sys.dist.assign(sys.n, std::vector<double>(sys.n, 0.0));
    for (std::int64_t i1 = 0; i1 < m; ++i1)
        for (std::int64_t j1 = 0; j1 < m; ++j1)
            for (std::int64_t i2 = 0; i2 < m; ++i2)
                for (std::int64_t j2 = 0; j2 < m; ++j2)
                    sys.dist[idx(i1, j1)][idx(i2, j2)] =
                        static_cast<double>(std::max(circ(i1 - i2, m), circ(j1 - j2, m))) /
                        static_cast<double>(m);
    sys.s_map.resize(sys.n);
    sys.r_map.resize(sys.n);
    for (std::int64_t i = 0; i < m; ++i)
        for (std::int64_t j = 0; j < m; ++j) {
            sys.s_map[idx(i, j)] = idx(i + a1, j + a2);
            sys.r_map[idx(i, j)] = idx(i + b1, j + b2);
        }
    sys.mu.assign(sys.n, 1.0 / static_cast<double>(sys.n));
    return sys;
}

bool finite_system::commutes() const {
    for (std::size_t x = 0; x < n; ++x)
        if (s_map[r_map[x]] != r_map[s_map[x]]) return false;
    return true;
}

bool finite_system::preserves_measure() const {
    for (const auto* f : {&s_map, &r_map}) {
        std::vector<double> push(n, 0.0);
        for (std::size_t x = 0; x < n; ++x) push[(*f)[x]] += mu[x];
        for (std::size_t y = 0; y < n; ++y)
            if (std::fabs(push[y] - mu[y]) > 1e-12) return false;
    }
    return true;
}

void finite_system::validate() const {
    if (n == 0) throw bad_input("finite_system: empty point set");
    if (dist.size() != n) throw bad_input("finite_system: metric row count mismatch");
    for (const auto& row : dist)
        if (row.size() != n) throw bad_input("finite_system: metric column count mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        if (dist[i][i] != 0.0) throw bad_input("finite_system: nonzero metric diagonal");
        for (std::size_t j = 0; j < n; ++j) {
            if (dist[i][j] < 0.0) throw bad_input("finite_system: negative distance");
            if (std::fabs(dist[i][j] - dist[j][i]) > 1e-12)
                throw bad_input("finite_system: metric is not symmetric");
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (dist[i][k] > dist[i][j] + dist[j][k] + 1e-12)
                    throw bad_input("finite_system: triangle inequality fails");
    check_map(s_map, n, "S");
    check_map(r_map, n, "R");
    if (mu.size() != n) throw bad_input("finite_system: weight count mismatch");
    double tot = 0;
    for (double w : mu) {
        if (w < 0.0) throw bad_input("finite_system: negative weight");
        tot += w;
    }
    if (std::fabs(tot - 1.0) > 1e-9)
        throw bad_input("finite_system: weights do not sum to one");
}

namespace {

// exact maximum corner-free densities of the smallest grids, computed once
double grid_density_bound(int t, bool& exact) {
    static std::map<int, double> cache;
    if (t <= 4) {
        auto it = cache.find(t);
        if (it == cache.end()) {
            auto r = max_corner_free(static_cast<std::int64_t>(t));
            it = cache.emplace(t, r.density.to_double()).first;
        }
        exact = true;
        return it->second;
    }
    exact = false;
    return 1.0;
}

} // namespace

return_set_result simultaneous_return_set(const finite_system& sys,
                                          const std::vector<std::size_t>& y, int t) {
    sys.validate();
    if (t < 1) throw bad_input("simultaneous_return_set: t must be at least 1");
    if (!sys.commutes())
        throw precondition_violated("simultaneous_return_set: the maps do not commute");
    if (!sys.preserves_measure())
        throw precondition_violated(
            "simultaneous_return_set: a map does not preserve the measure");
    std::vector<char> in_y(sys.n, 0);
    for (std::size_t x : y) {
        if (x >= sys.n) throw bad_input("simultaneous_return_set: member outside the space");
        in_y[x] = 1;
    }

    return_set_result res;
    res.t = t;
    for (std::size_t x = 0; x < sys.n; ++x)
        if (in_y[x]) res.mu_y += sys.mu[x];

    for (std::size_t x = 0; x < sys.n; ++x) {
        if (!in_y[x]) continue;
        bool stays = true;
        std::size_t sx = x, rx = x;
        for (int i = 1; i <= t && stays; ++i) {
            sx = sys.s_map[sx];
            rx = sys.r_map[rx];
            if (in_y[sx] && in_y[rx]) stays = false;
        }
        if (stays) {
            res.yt.push_back(x);
            res.mu_yt += sys.mu[x];
        }
    }
    res.bound_lt = grid_density_bound(t, res.bound_exact);
    res.verdict = res.mu_yt <= res.bound_lt + 1e-12;
    return res;
}

recurrence_values recurrence_constants(const finite_system& sys, int n_steps) {
    sys.validate();
    if (n_steps < 1) throw bad_input("recurrence_constants: N must be at least 1");
    recurrence_values res;
    res.c_s.resize(sys.n);
    res.c_r.resize(sys.n);
    res.c_pair.resize(sys.n);
    for (std::size_t x = 0; x < sys.n; ++x) {
        double bs = 1e300, br = 1e300, bp = 1e300;
        std::size_t sx = x, rx = x;
        for (int k = 1; k <= n_steps; ++k) {
            sx = sys.s_map[sx];
            rx = sys.r_map[rx];
            double ds = sys.dist[sx][x];
            double dr = sys.dist[rx][x];
            bs = std::min(bs, ds);
            br = std::min(br, dr);
            bp = std::min(bp, std::max(ds, dr));
        }
        res.c_s[x] = bs;
        res.c_r[x] = br;
        res.c_pair[x] = bp;
    }
    return res;
}

covering_result covering_number(const std::vector<std::size_t>& g, const finite_system& sys,
                                double eps) {
    sys.validate();
    if (eps <= 0.0) throw bad_input("covering_number: eps must be positive");
    for (std::size_t x : g)
        if (x >= sys.n) throw bad_input("covering_number: member outside the space");
    covering_result res;
    if (g.empty()) {
        res.nets = 0;
        res.exact = true;
        return res;
    }

    const std::size_t m = g.size();
    if (m <= 20) {
        // exact set cover: masks of g covered by each candidate center
        std::vector<std::uint32_t> cover;
        cover.reserve(sys.n);
        for (std::size_t c = 0; c < sys.n; ++c) {
            std::uint32_t mask = 0;
            for (std::size_t i = 0; i < m; ++i)
                if (sys.dist[c][g[i]] <= eps + 1e-12) mask |= std::uint32_t(1) << i;
            if (mask != 0) cover.push_back(mask);
        }
        const std::uint32_t full = (std::uint32_t(1) << m) - 1;
        std::vector<std::uint16_t> dp(std::size_t(1) << m, std::uint16_t(0xffff));
        dp[0] = 0;
        for (std::uint32_t st = 0; st < (std::uint32_t(1) << m); ++st) {
            if (dp[st] == 0xffff) continue;
            if (st == full) break;
            // cover the lowest missing point; some chosen center must do it
            std::uint32_t missing = ~st & full;
            std::uint32_t low = missing & (~missing + 1);
            for (std::uint32_t cm : cover) {
                if (!(cm & low)) continue;
                std::uint32_t nx = st | cm;
                if (dp[nx] > dp[st] + 1) dp[nx] = static_cast<std::uint16_t>(dp[st] + 1);
            }
        }
        if (dp[full] == 0xffff)
            throw precondition_violated("covering_number: a point has no center in range");
        res.nets = dp[full];
        res.exact = true;
        return res;
    }

    // greedy: largest uncovered gain first
    std::vector<char> covered(m, 0);
    std::size_t left = m, picks = 0;
    while (left > 0) {
        std::size_t best = sys.n;
        std::size_t best_gain = 0;
        for (std::size_t c = 0; c < sys.n; ++c) {
            std::size_t gain = 0;
            for (std::size_t i = 0; i < m; ++i)
                if (!covered[i] && sys.dist[c][g[i]] <= eps + 1e-12) ++gain;
            if (gain > best_gain) {
                best_gain = gain;
                best = c;
            }
        }
        if (best == sys.n)
            throw precondition_violated("covering_number: a point has no center in range");
        for (std::size_t i = 0; i < m; ++i)
            if (!covered[i] && sys.dist[best][g[i]] <= eps + 1e-12) {
                covered[i] = 1;
                --left;
            }
        ++picks;
    }
    res.nets = picks;
    res.exact = false;
    return res;
}

} // namespace corners
