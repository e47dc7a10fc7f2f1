#include "corners/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "corners/constructions.hpp"
#include "corners/errors.hpp"

namespace corners {

namespace {

constexpr double pi = std::numbers::pi;
constexpr std::int64_t max_modulus = 1 << 22;

// In-place radix-2 transform, a[j] <- sum_x a[x] e(-2 pi i x j / n).
void fft_inplace(std::vector<cplx>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j |= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * pi / static_cast<double>(len);
        const cplx step(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                cplx u = a[i + j];
                cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= step;
            }
        }
    }
}

std::int64_t span_of(const supp_fn& f) {
    return f.empty() ? 0 : f.support_max() - f.support_min() + 1;
}

// translated-window balanced restriction; points outside clip are dropped so a
// window hanging over the host edge contributes nothing
supp_fn balanced_on_translate(const int_set& q, const int_set& base, std::int64_t shift,
                              double delta, const int_set* clip = nullptr) {
    supp_fn f;
    for (auto t : base.elems()) {
        std::int64_t s = t + shift;
        if (clip != nullptr && !clip->contains(s)) continue;
        f.set(s, cplx((q.contains(s) ? 1.0 : 0.0) - delta, 0.0));
    }
    return f;
}

} // namespace

spectrum cyclic_dft(const supp_fn& f, std::int64_t modulus) {
    std::int64_t span = span_of(f);
    if (modulus < 2 * span + 1)
        throw modulus_too_small("modulus " + std::to_string(modulus) +
                                " below twice the support span plus one");
    if (modulus > max_modulus) throw bad_input("modulus too large");
    spectrum sp;
    sp.modulus = modulus;
    sp.coef.assign(static_cast<std::size_t>(modulus), cplx(0.0, 0.0));
    for (std::int64_t r = 0; r < modulus; ++r) {
        cplx acc(0.0, 0.0);
        for (const auto& [x, v] : f.entries()) {
            std::int64_t xm = ((x % modulus) + modulus) % modulus;
            std::int64_t e = (xm * r) % modulus;
            double ang = -2.0 * pi * static_cast<double>(e) / static_cast<double>(modulus);
            acc += v * cplx(std::cos(ang), std::sin(ang));
        }
        sp.coef[static_cast<std::size_t>(r)] = acc;
    }
    return sp;
}

std::vector<cplx> inverse_cyclic(const spectrum& sp) {
    const std::int64_t m = sp.modulus;
    if (m <= 0 || sp.coef.size() != static_cast<std::size_t>(m))
        throw bad_input("spectrum length does not match its modulus");
    std::vector<cplx> out(static_cast<std::size_t>(m), cplx(0.0, 0.0));
    for (std::int64_t x = 0; x < m; ++x) {
        cplx acc(0.0, 0.0);
        for (std::int64_t r = 0; r < m; ++r) {
            double ang = 2.0 * pi * static_cast<double>((x * r) % m) / static_cast<double>(m);
            acc += sp.coef[static_cast<std::size_t>(r)] * cplx(std::cos(ang), std::sin(ang));
        }
        out[static_cast<std::size_t>(x)] = acc / static_cast<double>(m);
    }
    return out;
}

dft_identity_report dft_identities(const supp_fn& f, const supp_fn& g, std::int64_t modulus,
                                   double tol) {
    auto fs = cyclic_dft(f, modulus);
    auto gs = cyclic_dft(g, modulus);
    const double m = static_cast<double>(modulus);

    dft_identity_report rep;
    rep.tol = tol;

    double energy_direct = f.l2sq();
    double energy_spec = 0;
    for (const auto& c : fs.coef) energy_spec += std::norm(c);
    energy_spec /= m;
    rep.energy_gap = std::fabs(energy_direct - energy_spec);

    cplx inner_direct(0.0, 0.0);
    for (const auto& [s, v] : f.entries()) inner_direct += v * std::conj(g.at(s));
    cplx inner_spec(0.0, 0.0);
    for (std::size_t r = 0; r < fs.coef.size(); ++r)
        inner_spec += fs.coef[r] * std::conj(gs.coef[r]);
    inner_spec /= m;
    rep.inner_gap = std::abs(inner_direct - inner_spec);

    double corr_direct = 0;
    if (!f.empty() && !g.empty()) {
        for (std::int64_t k = f.support_min() - g.support_max();
             k <= f.support_max() - g.support_min(); ++k) {
            cplx acc(0.0, 0.0);
            for (const auto& [s, v] : f.entries()) acc += v * std::conj(g.at(s - k));
            corr_direct += std::norm(acc);
        }
    }
    double corr_spec = 0;
    for (std::size_t r = 0; r < fs.coef.size(); ++r)
        corr_spec += std::norm(fs.coef[r]) * std::norm(gs.coef[r]);
    corr_spec /= m;
    rep.corr_gap = std::fabs(corr_direct - corr_spec);

    rep.ok = rep.energy_gap <= tol * std::max(1.0, energy_direct) &&
             rep.inner_gap <= tol * std::max(1.0, std::abs(inner_direct)) &&
             rep.corr_gap <= tol * std::max(1.0, corr_direct);
    return rep;
}

sup_fourier_result sup_fourier(const supp_fn& f, double tol, std::int64_t grid_cap) {
    sup_fourier_result res;
    if (f.empty()) {
        res.grid = 1;
        return res;
    }
    // recentering leaves |hat f| unchanged and shrinks the derivative bound
    const std::int64_t mid = (f.support_min() + f.support_max()) / 2;
    std::vector<std::pair<std::int64_t, cplx>> vals;
    vals.reserve(f.support_size());
    double lip = 0;
    double l1 = 0;
    for (const auto& [s, v] : f.entries()) {
        vals.emplace_back(s - mid, v);
        lip += 2.0 * pi * std::fabs(static_cast<double>(s - mid)) * std::abs(v);
        l1 += std::abs(v);
    }
    res.lipschitz = lip;
    const double target = tol * std::max(1.0, l1);
    const std::int64_t span = span_of(f);
    std::int64_t k = 1024;
    while (k < 2 * span) k <<= 1;
    if (grid_cap < k) grid_cap = k;
    for (;;) {
        std::vector<cplx> a(static_cast<std::size_t>(k), cplx(0.0, 0.0));
        for (const auto& [t, v] : vals)
            a[static_cast<std::size_t>(((t % k) + k) % k)] += v;
        fft_inplace(a);
        double best = 0;
        std::int64_t best_j = 0;
        for (std::int64_t j = 0; j < k; ++j) {
            double mag = std::abs(a[static_cast<std::size_t>(j)]);
            if (mag > best) {
                best = mag;
                best_j = j;
            }
        }
        res.lower = best;
        res.upper = best + lip / (2.0 * static_cast<double>(k));
        res.arg_lower = static_cast<double>(best_j) / static_cast<double>(k);
        res.grid = k;
        if (res.upper - res.lower <= target || k >= grid_cap) break;
        k <<= 1;
    }
    return res;
}

alpha_uniformity_result alpha_uniformity(const int_set& a, const bohr_set& host, double tol,
                                         std::int64_t grid_cap) {
    if (host.size() == 0) throw bad_input("empty host");
    if (!a.is_subset_of(host.set()))
        throw precondition_violated("set must lie inside the host");
    alpha_uniformity_result res;
    res.host_size = static_cast<std::int64_t>(host.size());
    res.delta = static_cast<double>(a.size()) / static_cast<double>(host.size());
    supp_fn f = balanced_on_translate(a, host.set(), 0, res.delta);
    res.bracket = sup_fourier(f, tol, grid_cap);
    res.alpha_star = res.bracket.upper / static_cast<double>(host.size());
    return res;
}

box_norm_result box_norm(const grid_fn& f, double cross_budget) {
    box_norm_result res;
    std::map<std::int64_t, std::vector<std::pair<std::int64_t, cplx>>> rows;
    for (const auto& [p, v] : f.entries()) rows[p.y].emplace_back(p.x, v);

    double fourth = 0;
    for (const auto& [m, rm] : rows) {
        for (const auto& [p, rp] : rows) {
            (void)m;
            (void)p;
            cplx b(0.0, 0.0);
            std::size_t i = 0, j = 0;
            while (i < rm.size() && j < rp.size()) {
                if (rm[i].first < rp[j].first)
                    ++i;
                else if (rp[j].first < rm[i].first)
                    ++j;
                else {
                    b += rm[i].second * std::conj(rp[j].second);
                    ++i;
                    ++j;
                }
            }
            fourth += std::norm(b);
        }
    }
    res.fourth_power = fourth;
    res.value = std::pow(fourth, 0.25);

    if (!f.entries().empty()) {
        std::int64_t xmin = f.entries().begin()->first.x, xmax = xmin;
        std::int64_t ymin = f.entries().begin()->first.y, ymax = ymin;
        for (const auto& [p, v] : f.entries()) {
            (void)v;
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
        double cost = static_cast<double>(f.support_size()) *
                      static_cast<double>(xmax - xmin + 1) *
                      static_cast<double>(ymax - ymin + 1);
        if (cost <= cross_budget) {
            cplx lit(0.0, 0.0);
            for (const auto& [p, v] : f.entries()) {
                for (std::int64_t r = xmin - p.x; r <= xmax - p.x; ++r) {
                    cplx f3 = f.at(p.x + r, p.y);
                    if (f3 == cplx(0.0, 0.0)) continue;
                    for (std::int64_t u = ymin - p.y; u <= ymax - p.y; ++u) {
                        cplx f2 = f.at(p.x, p.y + u);
                        if (f2 == cplx(0.0, 0.0)) continue;
                        lit += v * std::conj(f2) * std::conj(f3) * f.at(p.x + r, p.y + u);
                    }
                }
            }
            res.cross_checked = true;
            res.cross_gap = std::abs(lit - cplx(fourth, 0.0));
            if (res.cross_gap > 1e-9 * std::max(1.0, fourth))
                throw std::logic_error("product norm evaluation routes disagree");
        }
    }
    return res;
}

rect_uniform_result rect_alpha_uniform(const grid_set& a, const int_set& e1, const int_set& e2,
                                       double alpha, double cross_budget) {
    if (e1.empty() || e2.empty()) throw bad_input("empty factor set");
    for (const auto& p : a.points())
        if (!e1.contains(p.x) || !e2.contains(p.y))
            throw precondition_violated("set escapes the factor product");
    rect_uniform_result res;
    res.alpha = alpha;
    const double n1 = static_cast<double>(e1.size());
    const double n2 = static_cast<double>(e2.size());
    res.delta = static_cast<double>(a.size()) / (n1 * n2);
    grid_fn f;
    for (auto x : e1.elems())
        for (auto y : e2.elems())
            f.set({x, y}, cplx((a.contains(x, y) ? 1.0 : 0.0) - res.delta, 0.0));
    res.norm = box_norm(f, cross_budget);
    res.measured = res.norm.fourth_power / (n1 * n1 * n2 * n2);
    res.verdict = res.measured <= alpha;
    return res;
}

uniformity_report_result uniformity_report(const int_set& q, const bohr_set& host,
                                           const bohr_set& att, double alpha,
                                           const bohr_set* att2, double fourier_tol,
                                           std::int64_t local_grid_cap,
                                           std::int64_t global_grid_cap) {
    if (host.size() == 0 || att.size() == 0) throw bad_input("empty host or window");
    if (!q.is_subset_of(host.set()))
        throw precondition_violated("set must lie inside the host");

    uniformity_report_result rep;
    rep.alpha = alpha;
    rep.host_size = static_cast<std::int64_t>(host.size());
    rep.att_size = static_cast<std::int64_t>(att.size());
    const double hn = static_cast<double>(rep.host_size);
    const double an = static_cast<double>(rep.att_size);
    rep.delta = static_cast<double>(q.size()) / hn;

    // local densities are conditional on the part of the translated window that
    // lies inside the host, so the full host has density exactly 1 everywhere
    std::vector<double> local_dens;
    local_dens.reserve(host.size());
    double variance = 0;
    for (auto m : host.set().elems()) {
        std::int64_t inside = host.set().count_translate_overlap(att.set(), m);
        double dens = inside > 0
                          ? static_cast<double>(q.count_translate_overlap(att.set(), m)) /
                                static_cast<double>(inside)
                          : rep.delta;
        local_dens.push_back(dens);
        double dev = dens - rep.delta;
        variance += dev * dev;
        if (std::fabs(dev) >= std::pow(alpha, 2.0 / 3.0)) ++rep.b_star_size;

        supp_fn local = balanced_on_translate(q, att.set(), m, rep.delta, &host.set());
        double sup = sup_fourier(local, fourier_tol, local_grid_cap).upper;
        if (sup >= alpha * an) {
            ++rep.b_size;
            rep.b_members.push_back(m);
        }
    }
    variance /= hn;
    rep.variance = variance;
    rep.local_dens = local_dens;

    rep.translate_clause = {static_cast<double>(rep.b_size), alpha * hn,
                            static_cast<double>(rep.b_size) <= alpha * hn};
    rep.variance_clause = {variance, alpha * alpha, variance <= alpha * alpha};

    supp_fn global = balanced_on_translate(q, host.set(), 0, rep.delta);
    rep.sup_dev = sup_fourier(global, fourier_tol, global_grid_cap).upper;
    rep.global_clause = {rep.sup_dev, alpha * hn, rep.sup_dev <= alpha * hn};

    double bstar_rhs = std::pow(alpha, 2.0 / 3.0) * hn;
    rep.b_star_clause = {static_cast<double>(rep.b_star_size), bstar_rhs,
                         static_cast<double>(rep.b_star_size) <= bstar_rhs};

    rep.uniform =
        rep.translate_clause.ok && rep.variance_clause.ok && rep.global_clause.ok;

    if (att2 != nullptr) {
        if (att2->size() == 0) throw bad_input("empty second window");
        rep.omega_checked = true;
        const int_set& l2set = att2->set();
        const double a2n = static_cast<double>(l2set.size());

        std::unordered_map<std::int64_t, double> dens2_memo;
        auto dens2 = [&](std::int64_t n) {
            auto it = dens2_memo.find(n);
            if (it != dens2_memo.end()) return it->second;
            std::int64_t inside = host.set().count_translate_overlap(l2set, n);
            double d = inside > 0
                           ? static_cast<double>(q.count_translate_overlap(l2set, n)) /
                                 static_cast<double>(inside)
                           : rep.delta;
            dens2_memo.emplace(n, d);
            return d;
        };

        double var2 = 0;
        for (auto n : host.set().elems()) {
            double dev = dens2(n) - rep.delta;
            var2 += dev * dev;
        }
        var2 /= hn;
        rep.omega1_pre = var2 <= alpha * alpha;

        const double thr1 = 4.0 * std::sqrt(alpha);
        std::size_t idx = 0;
        for (auto s : host.set().elems()) {
            bool c1 = std::fabs(local_dens[idx++] - rep.delta) >= thr1;
            double acc = 0;
            for (auto t : att.set().elems()) {
                double dev = dens2(t + s) - rep.delta;
                acc += dev * dev;
            }
            acc /= an;
            if (c1 || acc >= thr1) ++rep.omega1_size;
        }
        rep.omega1_clause = {static_cast<double>(rep.omega1_size), thr1 * hn,
                             static_cast<double>(rep.omega1_size) <= thr1 * hn};

        std::int64_t star = 0;
        const double thr2 = 4.0 * std::pow(alpha, 0.25) * a2n;
        for (auto s : host.set().elems()) {
            supp_fn local = balanced_on_translate(q, l2set, s, rep.delta, &host.set());
            double sup = sup_fourier(local, fourier_tol, local_grid_cap).upper;
            if (sup >= thr2) ++rep.omega2_size;
            if (sup >= alpha * a2n) ++star;
        }
        rep.omega2_pre = static_cast<double>(star) <= alpha * hn;
        rep.omega2_clause = {static_cast<double>(rep.omega2_size), thr1 * hn,
                             static_cast<double>(rep.omega2_size) <= thr1 * hn};

        const double alpha_sub = 8.0 * std::pow(alpha, 0.25);
        for (auto s : host.set().elems()) {
            int_set qs = q.translated(-s).intersect(att.set());
            auto sub = uniformity_report(qs, att, *att2, alpha_sub, nullptr, fourier_tol,
                                         local_grid_cap, local_grid_cap);
            if (!sub.uniform) ++rep.omega_tilde_size;
        }
        double thr3 = 8.0 * std::sqrt(alpha) * hn;
        rep.omega_tilde_clause = {static_cast<double>(rep.omega_tilde_size), thr3,
                                  static_cast<double>(rep.omega_tilde_size) <= thr3};
        rep.omega_tilde_pre =
            rep.omega2_pre && rep.omega1_pre && rep.global_clause.ok;
    }
    return rep;
}

rect_eps_norm_result rect_eps_norm(const grid_fn& f, const bohr_set& lam1,
                                   const bohr_set& lam2, const bohr_set& att, double alpha,
                                   double beta1, double beta2, double budget) {
    const int_set& l1 = lam1.set();
    const int_set& l2 = lam2.set();
    const int_set& ap = att.set();
    if (l1.empty() || l2.empty() || ap.empty()) throw bad_input("empty host or window");

    rect_eps_norm_result res;
    const double apn = static_cast<double>(ap.size());
    const double l1n = static_cast<double>(l1.size());
    const double l2n = static_cast<double>(l2.size());
    res.rhs = alpha * beta1 * beta1 * beta2 * beta2 * apn * apn * apn * apn * l1n * l1n * l2n;

    std::set<std::int64_t> xset, yset;
    for (const auto& [p, v] : f.entries()) {
        (void)v;
        if (!l1.contains(p.x) || !l2.contains(p.y))
            throw precondition_violated("support escapes the host product");
        xset.insert(p.x);
        yset.insert(p.y);
    }
    if (xset.empty()) {
        res.within = true;
        return res;
    }
    std::vector<std::int64_t> xs(xset.begin(), xset.end());
    std::vector<std::int64_t> ys(yset.begin(), yset.end());

    const std::int64_t wlo = ap.min() - xs.back();
    const std::int64_t whi = ap.max() - xs.front();
    const std::int64_t klo = std::max(ys.front() - l1.max() - ap.max(), l2.min() + wlo);
    const std::int64_t khi = std::min(ys.back() - l1.min() - ap.min(), l2.max() + whi);
    if (klo > khi) {
        res.within = 0.0 <= res.rhs;
        return res;
    }

    const double wr = static_cast<double>(whi - wlo + 1);
    const double kr = static_cast<double>(khi - klo + 1);
    const double yn = static_cast<double>(ys.size());
    const double xn = static_cast<double>(xs.size());
    const double cost = yn * yn * (wr * xn + kr * (l1n + l2n));
    if (cost > budget)
        throw budget_exceeded("windowed norm cost " + std::to_string(cost) +
                              " exceeds budget " + std::to_string(budget));

    std::vector<cplx> svals(static_cast<std::size_t>(whi - wlo + 1));
    std::vector<cplx> vm(xs.size()), vu(xs.size());
    double total = 0;
    for (auto m : ys) {
        for (std::size_t t = 0; t < xs.size(); ++t) vm[t] = f.at(xs[t], m);
        for (auto u : ys) {
            for (std::size_t t = 0; t < xs.size(); ++t) vu[t] = f.at(xs[t], u);
            bool any = false;
            for (std::int64_t w = wlo; w <= whi; ++w) {
                cplx acc(0.0, 0.0);
                for (std::size_t t = 0; t < xs.size(); ++t)
                    if (ap.contains(w + xs[t])) acc += vm[t] * vu[t];
                svals[static_cast<std::size_t>(w - wlo)] = acc;
                if (acc != cplx(0.0, 0.0)) any = true;
            }
            if (!any) continue;
            for (std::int64_t k = klo; k <= khi; ++k) {
                double weight = 0;
                for (auto i : l1.elems())
                    if (ap.contains(m - k - i) && ap.contains(u - k - i)) weight += 1.0;
                if (weight == 0.0) continue;
                double tacc = 0;
                for (auto j : l2.elems()) {
                    std::int64_t w = k - j;
                    if (w >= wlo && w <= whi)
                        tacc += std::norm(svals[static_cast<std::size_t>(w - wlo)]);
                }
                total += weight * tacc;
            }
        }
    }
    res.fourth_power = total;
    res.value = std::pow(total, 0.25);
    res.within = total <= res.rhs;
    return res;
}

rect_slice_result rect_slices_uniform(const grid_set& a, const int_set& e1, const int_set& e2,
                                      const bohr_set& lam1, const bohr_set& lam2,
                                      const bohr_set& att, const bohr_set& att_eps,
                                      double alpha, double alpha1, double budget) {
    if (e1.empty() || e2.empty()) throw bad_input("empty factor set");
    if (!e1.is_subset_of(lam1.set()) || !e2.is_subset_of(lam2.set()))
        throw precondition_violated("factor sets must lie inside their hosts");
    for (const auto& p : a.points())
        if (!e1.contains(p.x) || !e2.contains(p.y))
            throw precondition_violated("set escapes the factor product");

    rect_slice_result res;
    res.alpha = alpha;
    res.alpha1 = alpha1;
    const double b1 = static_cast<double>(e1.size()) / static_cast<double>(lam1.size());
    const double b2 = static_cast<double>(e2.size()) / static_cast<double>(lam2.size());
    res.delta = static_cast<double>(a.size()) /
                (static_cast<double>(e1.size()) * static_cast<double>(e2.size()));
    const double aen = static_cast<double>(att_eps.size());
    const double apn = static_cast<double>(att.size());
    const double l2n = static_cast<double>(lam2.size());
    res.threshold = alpha * b1 * b1 * b2 * b2 * aen * aen * aen * aen * apn * apn * l2n;

    const double per_slice =
        budget / std::max<double>(1.0, static_cast<double>(lam1.size()));
    std::vector<std::int64_t> bad;
    for (auto l : lam1.set().elems()) {
        grid_fn g;
        for (auto s1 : att.set().elems()) {
            if (!e1.contains(s1 + l)) continue;
            for (auto y : e2.elems())
                g.set({s1, y},
                      cplx((a.contains(s1 + l, y) ? 1.0 : 0.0) - res.delta, 0.0));
        }
        auto norm = rect_eps_norm(g, att, lam2, att_eps, alpha, b1, b2, per_slice);
        res.slice_norms.push_back(norm.fourth_power);
        if (norm.fourth_power > res.threshold) bad.push_back(l);
    }
    res.b = int_set(std::move(bad));
    res.verdict =
        static_cast<double>(res.b.size()) <= alpha1 * static_cast<double>(lam1.size());
    return res;
}

counting_report counting_check(const grid_set& a, const int_set& e1, const int_set& e2,
                               const bohr_set& lam1, const bohr_set& lam2,
                               const bohr_set& att, bool relaxed, double budget) {
    if (e1.empty() || e2.empty()) throw bad_input("empty factor set");
    if (!e1.is_subset_of(lam1.set()) || !e2.is_subset_of(lam2.set()))
        throw precondition_violated("factor sets must lie inside their hosts");
    for (const auto& p : a.points())
        if (!e1.contains(p.x) || !e2.contains(p.y))
            throw precondition_violated("set escapes the factor product");

    counting_report rep;
    const double l1n = static_cast<double>(lam1.size());
    const double l2n = static_cast<double>(lam2.size());
    const double b1 = static_cast<double>(e1.size()) / l1n;
    const double b2 = static_cast<double>(e2.size()) / l2n;
    const double delta = static_cast<double>(a.size()) /
                         (static_cast<double>(e1.size()) * static_cast<double>(e2.size()));

    grid_fn f;
    for (auto x : e1.elems())
        for (auto y : e2.elems())
            f.set({x, y}, cplx((a.contains(x, y) ? 1.0 : 0.0) - delta, 0.0));

    auto norm = rect_eps_norm(f, lam1, lam2, att, 1.0, b1, b2, budget);
    rep.alpha_measured = norm.rhs > 0 ? norm.fourth_power / norm.rhs : 0.0;

    rep.sigma0 = std::abs(corner_sum_sigma0(a, a, f));
    rep.rhs = 32.0 * std::pow(rep.alpha_measured, 0.25) * b1 * b1 * b2 * b2 * l1n * l1n * l2n;
    rep.bound_ok = rep.sigma0 <= rep.rhs;

    // correlation energy against the measured one-dimensional level of e1
    auto au = alpha_uniformity(e1, lam1, 1e-6, 1 << 16);
    const double al = au.alpha_star;
    supp_fn f1 = balanced_on_translate(e1, lam1.set(), 0, au.delta);
    supp_fn g = supp_fn::indicator(e2);
    double corr = 0;
    std::int64_t exceptional = 0;
    const double exc_thr = std::pow(al, 2.0 / 3.0) * l1n;
    if (!f1.empty() && !g.empty()) {
        for (std::int64_t k = f1.support_min() - g.support_max();
             k <= f1.support_max() - g.support_min(); ++k) {
            cplx acc(0.0, 0.0);
            for (const auto& [s, v] : f1.entries()) acc += v * std::conj(g.at(s - k));
            corr += std::norm(acc);
            if (std::abs(acc) > exc_thr) ++exceptional;
        }
    }
    rep.corr_lhs = corr;
    rep.corr_rhs = al * al * l1n * l1n * static_cast<double>(e2.size());
    rep.corr_ok = rep.corr_lhs <= rep.corr_rhs * (1.0 + 1e-9) + 1e-9;
    rep.exceptional = exceptional;
    rep.exceptional_bound = std::pow(al, 2.0 / 3.0) * l2n;
    rep.exceptional_ok = static_cast<double>(exceptional) <= rep.exceptional_bound + 1e-9;

    if (relaxed) {
        grid_fn ind = grid_fn::indicator(a);
        rep.sigma_total = std::real(corner_sum_sigma0(a, a, ind));
        rep.sigma_diagonal = static_cast<double>(a.size());
        std::int64_t surplus =
            std::llround(rep.sigma_total) - static_cast<std::int64_t>(a.size());
        rep.corner_count = count_corners(a.sheared_x(-1), corner_mode::nonzero_d);
        rep.corner_found = surplus > 0;
        rep.cross_ok = surplus == rep.corner_count;
    }
    return rep;
}

} // namespace corners
