#include "corners/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <unordered_map>

#include "corners/errors.hpp"

namespace corners {

namespace {

double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1p-53;
}

} // namespace

std::optional<std::array<std::int64_t, 3>> find_three_term_ap(const int_set& b) {
    const auto& xs = b.elems();
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j) {
            std::int64_t a = xs[i], c = xs[j];
            if (((c - a) & 1) != 0) continue;
            std::int64_t mid = a + (c - a) / 2;
            if (mid != a && b.contains(mid)) return std::array<std::int64_t, 3>{a, mid, c};
        }
    return std::nullopt;
}

bool is_three_term_ap_free(const int_set& b) { return !find_three_term_ap(b).has_value(); }

namespace {

int_set digit_route(std::int64_t n) {
    std::vector<std::int64_t> xs;
    for (std::int64_t v = 0; v < n; ++v) {
        std::int64_t t = v;
        bool ok = true;
        while (t > 0) {
            if (t % 3 == 2) {
                ok = false;
                break;
            }
            t /= 3;
        }
        if (ok) xs.push_back(v);
    }
    return int_set(std::move(xs));
}

struct shell_candidate {
    int_set set;
    int dim = 0;
    std::int64_t base = 0;
    std::int64_t radius = 0;
};

// Digit vectors over base b with digits at most (b-1)/2 add without carries,
// so a three-term progression in values forces one componentwise; a fixed
// squared-length shell has no nontrivial midpoints.
std::optional<shell_candidate> best_shell(std::int64_t n) {
    std::optional<shell_candidate> best;
    for (int k = 2; k <= 14; ++k) {
        double root = std::pow(static_cast<double>(n), 1.0 / k);
        for (std::int64_t b = std::max<std::int64_t>(3, static_cast<std::int64_t>(root));
             b <= static_cast<std::int64_t>(root) + 2; ++b) {
            // need b^k >= n so every residue pattern below n is reachable
            double cap = std::pow(static_cast<double>(b), k);
            if (cap < static_cast<double>(n)) continue;
            std::int64_t h = (b - 1) / 2;
            double total = std::pow(static_cast<double>(h + 1), k);
            if (total > 2.0e6) continue;

            std::map<std::int64_t, std::vector<std::int64_t>> shells;
            std::vector<std::int64_t> digit(k, 0);
            while (true) {
                std::int64_t value = 0, norm = 0;
                for (int i = k - 1; i >= 0; --i) {
                    value = value * b + digit[i];
                    norm += digit[i] * digit[i];
                }
                if (value < n) shells[norm].push_back(value);
                int pos = 0;
                while (pos < k && digit[pos] == h) digit[pos++] = 0;
                if (pos == k) break;
                ++digit[pos];
            }
            for (auto& [radius, members] : shells) {
                if (!best || members.size() > best->set.size()) {
                    shell_candidate c;
                    c.set = int_set(members);
                    c.dim = k;
                    c.base = b;
                    c.radius = radius;
                    best = std::move(c);
                }
            }
        }
    }
    return best;
}

} // namespace

behrend_result behrend_set(std::int64_t n) {
    if (n < 1) throw bad_input("behrend_set: n must be positive");
    behrend_result res;
    res.n = n;
    int_set digits = digit_route(n);
    auto shell = best_shell(n);
    if (shell && shell->set.size() > digits.size()) {
        res.set = shell->set;
        res.route = "shell";
        res.shell_dim = shell->dim;
        res.shell_base = shell->base;
        res.shell_radius = shell->radius;
    } else {
        res.set = digits;
        res.route = "digits";
    }
    if (n <= 100000 && !is_three_term_ap_free(res.set))
        throw std::logic_error("behrend_set: produced a set with a progression");
    return res;
}

centered_difference_result corner_free_from_ap_free(const int_set& b, std::int64_t n) {
    if (n < 1) throw bad_input("corner_free_from_ap_free: n must be positive");
    if (b.empty()) throw bad_input("corner_free_from_ap_free: empty difference set");
    if (auto ap = find_three_term_ap(b))
        throw precondition_violated("difference set has the progression " +
                                    std::to_string((*ap)[0]) + "," + std::to_string((*ap)[1]) +
                                    "," + std::to_string((*ap)[2]));

    // |A| for shift c is the total stripe mass sum over b of max(0, n - |b - c|).
    std::int64_t best_c = 0, best_mass = -1;
    for (std::int64_t c = b.min() - n + 1; c <= b.max() + n - 1; ++c) {
        std::int64_t mass = 0;
        for (auto x : b.elems()) {
            std::int64_t d = x >= c ? x - c : c - x;
            if (d < n) mass += n - d;
        }
        if (mass > best_mass) {
            best_mass = mass;
            best_c = c;
        }
    }

    std::vector<grid_point> pts;
    for (std::int64_t x = 1; x <= n; ++x)
        for (std::int64_t y = 1; y <= n; ++y)
            if (b.contains(x - y + best_c)) pts.push_back({x, y});
    centered_difference_result res{grid_set(std::move(pts), grid_window{1, n, 1, n}), best_c, n};
    if (static_cast<std::int64_t>(res.a.size()) != best_mass)
        throw std::logic_error("corner_free_from_ap_free: stripe mass mismatch");
    if (n <= 512 && !is_corner_free(res.a, corner_mode::nonzero_d))
        throw std::logic_error("corner_free_from_ap_free: output has a corner");
    return res;
}

grid_set random_grid_set(std::int64_t n, double delta, std::uint64_t seed) {
    if (n < 1) throw bad_input("random_grid_set: n must be positive");
    if (delta < 0.0 || delta > 1.0) throw bad_input("random_grid_set: density outside [0, 1]");
    std::mt19937_64 rng(seed);
    std::vector<grid_point> pts;
    for (std::int64_t x = 1; x <= n; ++x)
        for (std::int64_t y = 1; y <= n; ++y)
            if (unit_uniform(rng) < delta) pts.push_back({x, y});
    return grid_set(std::move(pts), grid_window{1, n, 1, n});
}

int_set random_int_set(std::int64_t n, double beta, std::uint64_t seed) {
    if (n < 1) throw bad_input("random_int_set: n must be positive");
    if (beta < 0.0 || beta > 1.0) throw bad_input("random_int_set: density outside [0, 1]");
    std::mt19937_64 rng(seed);
    std::vector<std::int64_t> xs;
    for (std::int64_t x = 1; x <= n; ++x)
        if (unit_uniform(rng) < beta) xs.push_back(x);
    return int_set(std::move(xs));
}

namespace {

struct moment_summary {
    double mean = 0, stddev = 0, stderr_mean = 0;
};

moment_summary summarize(const std::vector<std::int64_t>& counts) {
    moment_summary s;
    if (counts.empty()) return s;
    double sum = 0;
    for (auto c : counts) sum += static_cast<double>(c);
    s.mean = sum / static_cast<double>(counts.size());
    if (counts.size() > 1) {
        double sq = 0;
        for (auto c : counts) {
            double dev = static_cast<double>(c) - s.mean;
            sq += dev * dev;
        }
        s.stddev = std::sqrt(sq / static_cast<double>(counts.size() - 1));
        s.stderr_mean = s.stddev / std::sqrt(static_cast<double>(counts.size()));
    }
    return s;
}

} // namespace

corner_count_stats expected_corner_report(std::int64_t n, double delta, int trials,
                                          std::uint64_t seed) {
    if (trials < 1) throw bad_input("expected_corner_report: need at least one trial");
    corner_count_stats st;
    st.n = n;
    st.delta = delta;
    st.trials = trials;
    for (int t = 0; t < trials; ++t) {
        grid_set a = random_grid_set(n, delta, seed + static_cast<std::uint64_t>(t));
        st.counts.push_back(count_corners(a, corner_mode::positive_d));
    }
    auto s = summarize(st.counts);
    st.mean = s.mean;
    st.stddev = s.stddev;
    st.stderr_mean = s.stderr_mean;
    st.predicted = delta * delta * delta * static_cast<double>(full_grid_corner_count(n));
    st.zscore = st.stderr_mean > 0 ? (st.mean - st.predicted) / st.stderr_mean : 0.0;
    return st;
}

grid_set product_grid_set(const int_set& e1, const int_set& e2) {
    std::vector<grid_point> pts;
    pts.reserve(e1.size() * e2.size());
    for (auto x : e1.elems())
        for (auto y : e2.elems()) pts.push_back({x, y});
    return grid_set(std::move(pts));
}

product_corner_identity product_corner_check(const int_set& e1, const int_set& e2) {
    product_corner_identity res;
    res.direct = count_corners(product_grid_set(e1, e2), corner_mode::positive_d);

    auto pair_counts = [](const int_set& e) {
        std::unordered_map<std::int64_t, std::int64_t> r;
        const auto& xs = e.elems();
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (std::size_t j = i + 1; j < xs.size(); ++j) ++r[xs[j] - xs[i]];
        return r;
    };
    auto r1 = pair_counts(e1);
    auto r2 = pair_counts(e2);
    res.via_pair_counts = 0;
    for (const auto& [d, c1] : r1) {
        auto it = r2.find(d);
        if (it != r2.end()) res.via_pair_counts += c1 * it->second;
    }
    res.equal = res.direct == res.via_pair_counts;
    return res;
}

product_corner_stats product_corner_report(std::int64_t n, double beta1, double beta2,
                                           int trials, std::uint64_t seed) {
    if (trials < 1) throw bad_input("product_corner_report: need at least one trial");
    product_corner_stats st;
    st.n = n;
    st.beta1 = beta1;
    st.beta2 = beta2;
    st.trials = trials;
    for (int t = 0; t < trials; ++t) {
        std::uint64_t s = seed + static_cast<std::uint64_t>(t);
        int_set e1 = random_int_set(n, beta1, s * 2 + 1);
        int_set e2 = random_int_set(n, beta2, s * 2 + 2);
        auto id = product_corner_check(e1, e2);
        if (!id.equal) throw std::logic_error("product corner identity failed");
        st.counts.push_back(id.direct);
    }
    auto s = summarize(st.counts);
    st.mean = s.mean;
    st.stddev = s.stddev;
    st.stderr_mean = s.stderr_mean;
    double t_n = static_cast<double>(full_grid_corner_count(n));
    st.predicted_product = beta1 * beta1 * beta2 * beta2 * t_n;
    double cube = beta1 * beta2;
    st.predicted_cube = cube * cube * cube * t_n;
    st.z_product = st.stderr_mean > 0 ? (st.mean - st.predicted_product) / st.stderr_mean : 0.0;
    st.z_cube = st.stderr_mean > 0 ? (st.mean - st.predicted_cube) / st.stderr_mean : 0.0;
    return st;
}

} // namespace corners
