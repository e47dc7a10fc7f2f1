#include "corners/bohr.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>

#include "corners/errors.hpp"

namespace corners {

namespace {

constexpr double rational_detect_tol = 1e-13;
constexpr std::int64_t rational_max_den = 1000000;
constexpr double guard_band = 1e-12;

double reduce_mod1(double t) {
    double r = t - std::floor(t);
    if (r >= 1.0) r = 0.0;
    return r;
}

} // namespace

frequency analyze_frequency(double theta) {
    frequency f;
    f.value = reduce_mod1(theta);
    // continued fraction convergents of the reduced value
    double x = f.value;
    std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;  // p: h, q: k, seeded one step back
    double frac = x;
    for (int iter = 0; iter < 64; ++iter) {
        double a_f = std::floor(frac);
        std::int64_t a = static_cast<std::int64_t>(a_f);
        std::int64_t h2 = a * h1 + h0;
        std::int64_t k2 = a * k1 + k0;
        if (k2 > rational_max_den || k2 <= 0) break;
        if (std::fabs(x - static_cast<double>(h2) / static_cast<double>(k2)) <=
            rational_detect_tol) {
            f.rational = true;
            f.p = h2 % k2;
            if (f.p < 0) f.p += k2;
            f.q = k2;
            return f;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        double rem = frac - a_f;
        if (rem < 1e-15) break;
        frac = 1.0 / rem;
    }
    return f;
}

double freq_dist(const frequency& f, std::int64_t x) {
    if (f.rational) {
        std::int64_t xr = x % f.q;
        if (xr < 0) xr += f.q;
        std::int64_t r = (xr * f.p) % f.q;
        std::int64_t d = std::min(r, f.q - r);
        return static_cast<double>(d) / static_cast<double>(f.q);
    }
    long double t = static_cast<long double>(f.value) * static_cast<long double>(x);
    long double m = t - std::floor(static_cast<double>(t));
    m -= std::floor(static_cast<double>(m));
    long double d = m <= 0.5L ? m : 1.0L - m;
    return static_cast<double>(d);
}

double window_factor(int dim, double kappa) {
    return dim >= 1 ? kappa / (100.0 * dim) : kappa;
}

bool bohr_membership(const std::vector<frequency>& freqs, const bohr_spec& spec,
                     std::int64_t x, bool* borderline) {
    std::int64_t dx = x - spec.offset;
    if (static_cast<double>(dx < 0 ? -dx : dx) > spec.radius) return false;
    bool in = true;
    for (const auto& f : freqs) {
        double d = freq_dist(f, dx);
        if (borderline && std::fabs(d - spec.eps) <= guard_band) *borderline = true;
        if (!(d < spec.eps)) {
            in = false;
            break;
        }
    }
    return in;
}

bohr_set build_bohr(const bohr_spec& spec) {
    if (!(spec.eps > 0.0) || spec.eps > 1.0) throw bad_input("bohr: eps outside (0, 1]");
    if (spec.radius < 0.0) throw bad_input("bohr: negative radius");
    if (spec.radius > 4.0e6) throw bad_input("bohr: radius too large for enumeration");
    std::vector<frequency> freqs;
    freqs.reserve(spec.theta.size());
    for (double t : spec.theta) freqs.push_back(analyze_frequency(t));

    std::int64_t r = static_cast<std::int64_t>(std::floor(spec.radius));
    std::vector<std::int64_t> elems;
    std::vector<std::int64_t> flagged;
    for (std::int64_t x = spec.offset - r; x <= spec.offset + r; ++x) {
        bool border = false;
        if (bohr_membership(freqs, spec, x, &border)) elems.push_back(x);
        if (border) flagged.push_back(x);
    }
    return bohr_set(spec, int_set(std::move(elems)), std::move(flagged));
}

size_bound_report size_lower_bound(const bohr_set& lam) {
    size_bound_report rep;
    rep.measured = lam.size();
    rep.lower = 0.5 * std::pow(lam.spec().eps, lam.spec().dim()) * lam.spec().radius;
    rep.ok = static_cast<double>(rep.measured) >= rep.lower;
    return rep;
}

namespace {

// max over frequencies of the distance to Z, tabulated for 0..radius;
// dimension zero tabulates zeros
std::vector<double> dist_table(const std::vector<frequency>& freqs, std::int64_t radius) {
    std::vector<double> g(static_cast<std::size_t>(radius) + 1, 0.0);
    for (std::int64_t x = 0; x <= radius; ++x) {
        double m = 0.0;
        for (const auto& f : freqs) m = std::max(m, freq_dist(f, x));
        g[static_cast<std::size_t>(x)] = m;
    }
    return g;
}

std::size_t count_from_table(const std::vector<double>& g, double eps, double radius) {
    std::int64_t r = static_cast<std::int64_t>(std::floor(radius));
    r = std::min<std::int64_t>(r, static_cast<std::int64_t>(g.size()) - 1);
    std::size_t c = g[0] < eps ? 1 : 0;
    for (std::int64_t x = 1; x <= r; ++x)
        if (g[static_cast<std::size_t>(x)] < eps) c += 2;
    return c;
}

regularity_report probe_with_table(const std::vector<double>& g, int dim, double eps1,
                                   double radius1, double kappa, int grid) {
    regularity_report rep;
    rep.kappa = kappa;
    rep.eps1 = eps1;
    rep.radius1 = radius1;
    rep.grid = grid;
    rep.base_size = count_from_table(g, eps1, radius1);
    double wf = window_factor(dim, kappa);
    // strictly inside the open perturbation window
    double inset = 1.0 - 1.0 / (2.0 * grid);
    double we = wf * eps1 * inset;
    double wr = wf * radius1 * inset;
    rep.min_ratio = 1e300;
    rep.max_ratio = 0.0;
    rep.regular = rep.base_size > 0;
    for (int i = 0; i < grid; ++i) {
        double fe = grid == 1 ? 0.0 : -1.0 + 2.0 * i / (grid - 1);
        for (int j = 0; j < grid; ++j) {
            double fr = grid == 1 ? 0.0 : -1.0 + 2.0 * j / (grid - 1);
            regularity_probe pr;
            pr.eps1 = eps1 + fe * we;
            pr.radius1 = radius1 + fr * wr;
            std::size_t c = count_from_table(g, pr.eps1, pr.radius1);
            pr.ratio = rep.base_size > 0
                           ? static_cast<double>(c) / static_cast<double>(rep.base_size)
                           : 0.0;
            pr.ok = pr.ratio > 1.0 - kappa && pr.ratio < 1.0 + kappa;
            rep.min_ratio = std::min(rep.min_ratio, pr.ratio);
            rep.max_ratio = std::max(rep.max_ratio, pr.ratio);
            rep.regular = rep.regular && pr.ok;
            rep.probes.push_back(pr);
        }
    }
    return rep;
}

// Counts are monotone in both eps and radius, so the whole probe grid passes
// exactly when the two extreme corners do.
bool corners_pass(const std::vector<double>& g, int dim, double eps1, double radius1,
                  double kappa, int grid) {
    std::size_t base = count_from_table(g, eps1, radius1);
    if (base == 0) return false;
    double wf = window_factor(dim, kappa);
    double inset = 1.0 - 1.0 / (2.0 * grid);
    double we = wf * eps1 * inset;
    double wr = wf * radius1 * inset;
    double lo = static_cast<double>(count_from_table(g, eps1 - we, radius1 - wr)) /
                static_cast<double>(base);
    double hi = static_cast<double>(count_from_table(g, eps1 + we, radius1 + wr)) /
                static_cast<double>(base);
    return lo > 1.0 - kappa && hi < 1.0 + kappa;
}

std::int64_t table_span(double radius, int dim, double kappa) {
    return static_cast<std::int64_t>(std::ceil(radius * (1.0 + window_factor(dim, kappa)))) + 2;
}

} // namespace

regularity_report probe_regular(const std::vector<double>& theta, double eps1, double radius1,
                                double kappa, int grid) {
    if (grid < 1) throw bad_input("probe_regular: grid must be positive");
    std::vector<frequency> freqs;
    for (double t : theta) freqs.push_back(analyze_frequency(t));
    int dim = static_cast<int>(theta.size());
    auto g = dist_table(freqs, table_span(radius1, dim, kappa));
    return probe_with_table(g, dim, eps1, radius1, kappa, grid);
}

find_regular_result find_regular(const std::vector<double>& theta, double eps, double radius,
                                 double kappa, int grid, std::uint64_t candidate_budget) {
    if (radius < 2.0) throw not_found("find_regular: radius window is empty");
    std::vector<frequency> freqs;
    for (double t : theta) freqs.push_back(analyze_frequency(t));
    int dim = static_cast<int>(theta.size());
    auto g = dist_table(freqs, table_span(radius, dim, kappa));

    std::int64_t r_hi = static_cast<std::int64_t>(std::floor(radius)) - 1;
    std::int64_t r_lo = static_cast<std::int64_t>(std::floor(radius / 2.0)) + 1;
    std::uint64_t tried = 0;
    for (std::int64_t r1 = r_hi; r1 >= r_lo; --r1) {
        for (int t = 0; t < 64; ++t) {
            double eps1 = eps * std::pow(2.0, -(t + 0.5) / 64.0);
            if (++tried > candidate_budget)
                throw not_found("find_regular: candidate budget exhausted");
            if (!corners_pass(g, dim, eps1, static_cast<double>(r1), kappa, grid)) continue;
            auto rep = probe_with_table(g, dim, eps1, static_cast<double>(r1), kappa, grid);
            if (rep.regular) {
                bohr_spec spec;
                spec.theta = theta;
                spec.eps = eps1;
                spec.radius = static_cast<double>(r1);
                spec.offset = 0;
                return find_regular_result{build_bohr(spec), std::move(rep)};
            }
        }
    }
    throw not_found("find_regular: no pair in (eps/2, eps) x (radius/2, radius) passed");
}

bohr_set attendant(const bohr_set& host, double eps_a, const std::vector<double>& extra,
                   double kappa, int grid) {
    if (!(eps_a > 0.0) || eps_a > 1.0) throw bad_input("attendant: scale outside (0, 1]");
    std::vector<double> theta = host.spec().theta;
    theta.insert(theta.end(), extra.begin(), extra.end());
    double target_eps = std::min(1.0, eps_a * host.spec().eps);
    double target_radius = eps_a * host.spec().radius;
    auto found = find_regular(theta, target_eps, target_radius, kappa, grid);
    return found.set;
}

bool is_attendant_of(const bohr_spec& att, const bohr_spec& host, double eps_a) {
    for (double t : host.theta) {
        bool present = false;
        for (double u : att.theta)
            if (std::fabs(reduce_mod1(t) - reduce_mod1(u)) <= 1e-12) {
                present = true;
                break;
            }
        if (!present) return false;
    }
    double tol = 1e-9;
    double e_hi = eps_a * host.eps, r_hi = eps_a * host.radius;
    if (att.eps < e_hi / 2.0 - tol || att.eps > e_hi * (1.0 + tol)) return false;
    if (att.radius < r_hi / 2.0 - tol || att.radius > r_hi * (1.0 + tol)) return false;
    return true;
}

supp_fn convolve(const supp_fn& f, const supp_fn& g) {
    supp_fn out;
    std::map<std::int64_t, cplx> acc;
    for (const auto& [s, fv] : f.entries())
        for (const auto& [t, gv] : g.entries()) acc[s + t] += fv * std::conj(gv);
    for (const auto& [n, v] : acc)
        if (v != cplx(0.0, 0.0)) out.set(n, v);
    return out;
}

namespace {

void require_cover_window(const bohr_set& lam, const bohr_set& att, double kappa,
                          const char* who) {
    double wf = window_factor(lam.spec().dim(), kappa);
    double slack = 1.0 + 1e-9;
    if (att.spec().radius > wf * lam.spec().radius * slack)
        throw precondition_violated(std::string(who) +
                                    ": attendant radius exceeds the cover window");
    if (lam.spec().dim() >= 1 && att.spec().eps > wf * lam.spec().eps * slack)
        throw precondition_violated(std::string(who) +
                                    ": attendant eps exceeds the cover window");
    for (double t : lam.spec().theta) {
        bool present = false;
        for (double u : att.spec().theta)
            if (std::fabs(reduce_mod1(t) - reduce_mod1(u)) <= 1e-12) {
                present = true;
                break;
            }
        if (!present)
            throw precondition_violated(std::string(who) +
                                        ": attendant drops a host frequency");
    }
}

} // namespace

cover_profile_result cover_profile(const bohr_set& lam, const bohr_set& att, double kappa) {
    if (lam.size() == 0 || att.size() == 0) throw bad_input("cover_profile: empty set");
    require_cover_window(lam, att, kappa, "cover_profile");

    cover_profile_result res;
    res.kappa = kappa;
    res.host_size = lam.size();
    res.att_size = att.size();

    std::map<std::int64_t, std::int64_t> conv;
    for (auto a : lam.set().elems())
        for (auto s : att.set().elems()) ++conv[a + s];

    double att_sz = static_cast<double>(att.size());
    double lam_sz = static_cast<double>(lam.size());
    res.count_pos = 0;
    res.count_full = 0;
    res.l1_residual = 0.0;
    for (const auto& [n, c] : conv) {
        ++res.count_pos;
        if (c == static_cast<std::int64_t>(att.size())) ++res.count_full;
        res.l1_residual += std::fabs(static_cast<double>(c) / att_sz -
                                     (lam.contains(n) ? 1.0 : 0.0));
    }
    for (auto a : lam.set().elems())
        if (conv.find(a) == conv.end()) res.l1_residual += 1.0;

    res.pos_ok = static_cast<double>(res.count_pos) <= (1.0 + kappa) * lam_sz;
    res.full_ok = static_cast<double>(res.count_full) >= (1.0 - kappa) * lam_sz;
    res.l1_ok = res.l1_residual < 2.0 * kappa * lam_sz;

    double wf = window_factor(lam.spec().dim(), kappa);
    bohr_spec plus = lam.spec(), minus = lam.spec();
    plus.radius = lam.spec().radius * (1.0 + wf);
    minus.radius = lam.spec().radius * (1.0 - wf);
    if (lam.spec().dim() >= 1) {
        plus.eps = std::min(1.0, lam.spec().eps * (1.0 + wf));
        minus.eps = lam.spec().eps * (1.0 - wf);
    }
    res.lam_plus = build_bohr(plus);
    res.lam_minus = build_bohr(minus);
    res.sandwich_ok = res.lam_minus.set().is_subset_of(lam.set()) &&
                      lam.set().is_subset_of(res.lam_plus.set());
    res.plus_ok = static_cast<double>(res.lam_plus.size()) <= (1.0 + kappa) * lam_sz;
    res.minus_ok = static_cast<double>(res.lam_minus.size()) >= (1.0 - kappa) * lam_sz;

    res.sumset_size = lam.set().sumset(att.set()).size();
    res.sumset_ok = res.sumset_size >= lam.size() &&
                    static_cast<double>(res.sumset_size) <= (1.0 + 2.0 * kappa) * lam_sz;

    res.translate_cover_ok = true;
    for (auto s : att.set().elems()) {
        for (auto x : res.lam_minus.set().elems())
            if (!lam.contains(x - s)) {
                res.translate_cover_ok = false;
                break;
            }
        if (!res.translate_cover_ok) break;
    }
    return res;
}

local_density_result local_density_residual(const grid_set& e, const bohr_set& lam,
                                            const bohr_set& att, grid_point x, double kappa) {
    if (lam.size() == 0 || att.size() == 0) throw bad_input("local_density: empty set");
    require_cover_window(lam, att, kappa, "local_density");
    double lam2 = static_cast<double>(lam.size()) * static_cast<double>(lam.size());
    double att2 = static_cast<double>(att.size()) * static_cast<double>(att.size());
    if (lam2 * att2 > 5.0e8) throw budget_exceeded("local_density: instance too large");

    std::int64_t inside = 0;
    for (auto a : lam.set().elems())
        for (auto b : lam.set().elems())
            if (e.contains(a + x.x, b + x.y)) ++inside;

    double avg = 0.0;
    for (auto n1 : lam.set().elems())
        for (auto n2 : lam.set().elems()) {
            std::int64_t c = 0;
            for (auto a : att.set().elems())
                for (auto b : att.set().elems())
                    if (e.contains(n1 + x.x + a, n2 + x.y + b)) ++c;
            avg += static_cast<double>(c) / att2;
        }

    local_density_result res;
    res.global_density = static_cast<double>(inside) / lam2;
    res.translate_average = avg / lam2;
    res.residual = std::fabs(res.global_density - res.translate_average);
    res.bound = 4.0 * kappa;
    res.ok = res.residual <= res.bound;
    return res;
}

local_density_result local_density_residual_1d(const int_set& e, const bohr_set& lam,
                                               const bohr_set& att, std::int64_t x,
                                               double kappa) {
    if (lam.size() == 0 || att.size() == 0) throw bad_input("local_density: empty set");
    require_cover_window(lam, att, kappa, "local_density");

    std::int64_t inside = 0;
    for (auto a : lam.set().elems())
        if (e.contains(a + x)) ++inside;

    double avg = 0.0;
    for (auto n : lam.set().elems()) {
        std::int64_t c = 0;
        for (auto a : att.set().elems())
            if (e.contains(n + x + a)) ++c;
        avg += static_cast<double>(c) / static_cast<double>(att.size());
    }

    local_density_result res;
    res.global_density = static_cast<double>(inside) / static_cast<double>(lam.size());
    res.translate_average = avg / static_cast<double>(lam.size());
    res.residual = std::fabs(res.global_density - res.translate_average);
    res.bound = 4.0 * kappa;
    res.ok = res.residual <= res.bound;
    return res;
}

} // namespace corners
