#include "corners/profile.hpp"

#include <cmath>

namespace corners {

monomial monomial::dyadic(const rational& e) {
    monomial m;
    m.log2c = e;
    return m;
}

monomial monomial::var(const std::string& name, const rational& e) {
    monomial m;
    m.pow[name] = e;
    return m;
}

monomial monomial::times(const monomial& o) const {
    monomial m = *this;
    m.log2c = m.log2c + o.log2c;
    for (const auto& [v, e] : o.pow) {
        auto it = m.pow.find(v);
        if (it == m.pow.end())
            m.pow[v] = e;
        else {
            it->second = it->second + e;
            if (it->second == rational(0)) m.pow.erase(it);
        }
    }
    return m;
}

monomial monomial::powed(const rational& e) const {
    monomial m;
    m.log2c = log2c * e;
    for (const auto& [v, p] : pow) {
        rational q = p * e;
        if (q != rational(0)) m.pow[v] = q;
    }
    return m;
}

double monomial::eval(const std::map<std::string, double>& vars) const {
    double acc = std::exp2(log2c.to_double());
    for (const auto& [v, e] : pow) {
        auto it = vars.find(v);
        double base = it == vars.end() ? 1.0 : it->second;
        acc *= std::pow(base, e.to_double());
    }
    return acc;
}

std::string monomial::str() const {
    std::string s = "2^(" + log2c.str() + ")";
    for (const auto& [v, e] : pow) {
        s += " " + v;
        if (e != rational(1)) s += "^(" + e.str() + ")";
    }
    return s;
}

bool dominated_on_unit(const monomial& lhs, const monomial& rhs, bool strict) {
    if (strict ? !(lhs.log2c < rhs.log2c) : !(lhs.log2c <= rhs.log2c)) return false;
    // v in (0, 1], so v^p <= v^q exactly when p >= q
    for (const auto& [v, p] : lhs.pow) {
        auto it = rhs.pow.find(v);
        rational q = it == rhs.pow.end() ? rational(0) : it->second;
        if (!(p >= q)) return false;
    }
    for (const auto& [v, q] : rhs.pow)
        if (lhs.pow.find(v) == lhs.pow.end() && !(rational(0) >= q)) return false;
    return true;
}

namespace {

monomial dy(std::int64_t e) { return monomial::dyadic(rational(e)); }

std::map<std::string, monomial> faithful_symbols() {
    monomial delta = monomial::var("delta");
    monomial b1 = monomial::var("beta1");
    monomial b2 = monomial::var("beta2");
    monomial tau = monomial::var("tau");
    monomial sigma = monomial::var("sigma");

    std::map<std::string, monomial> s;
    s["alpha"] = dy(-100).times(delta.powed(12));
    s["alpha1"] = dy(-7).times(delta);
    s["eta"] = dy(-100).times(s["alpha"].powed(3));
    s["alpha0"] = dy(-2000).times(delta.powed(96)).times(b1.powed(48)).times(b2.powed(48));
    s["kappa_u"] = dy(-100).times(tau.powed(5)).times(b1.powed(5)).times(b2.powed(5))
                       .times(sigma.powed(3));
    s["sigma_cap"] = dy(-100).times(tau).times(b1).times(b2);
    s["gain_inc"] = dy(-500).times(delta.powed(37));
    s["gain_step"] = dy(-600).times(delta.powed(37));
    s["size_floor"] = dy(-125).times(delta.powed(12));
    s["beta_floor"] = dy(-1500).times(delta.powed(100));
    s["two_step_gain"] = dy(-25).times(tau.powed(4)).times(b1.powed(4)).times(b2.powed(4))
                             .times(sigma.powed(3));
    s["k0"] = dy(30).times(tau.powed(-4)).times(b1.powed(-4)).times(b2.powed(-4))
                  .times(sigma.powed(-3));
    s["k_total"] = dy(700).times(delta.powed(-36));
    return s;
}

std::map<std::string, monomial> relaxed_symbols() {
    std::map<std::string, monomial> s;
    s["alpha"] = dy(-4);
    s["alpha0"] = dy(-3);
    s["alpha1"] = monomial::dyadic(rational(-1, 2));
    s["sigma"] = dy(-2);
    s["tau"] = dy(-1);
    s["eta"] = dy(-5);
    s["kappa"] = dy(-2);
    s["shrink"] = dy(-1);
    s["gain"] = dy(-10);
    s["size_frac"] = dy(-5);
    s["unif_beta_frac"] = dy(-4);
    s["density_floor"] = dy(-6);
    return s;
}

relation_report dominance(const std::string& name, const monomial& lhs, const monomial& rhs,
                          bool strict) {
    relation_report r;
    r.name = name;
    r.lhs = lhs.str();
    r.rhs = rhs.str();
    r.strict = strict;
    r.method = "dominance";
    r.ok = dominated_on_unit(lhs, rhs, strict);
    return r;
}

relation_report equality(const std::string& name, const monomial& lhs, const monomial& rhs) {
    relation_report r;
    r.name = name;
    r.lhs = lhs.str();
    r.rhs = rhs.str();
    r.method = "dominance";
    r.ok = dominated_on_unit(lhs, rhs, false) && dominated_on_unit(rhs, lhs, false);
    return r;
}

// m >= 1 on the slab {var >= 2^lo, everything in (0, 1]}: the exponent of var
// must be nonnegative (so the minimum over the slab sits at the boundary) and
// the boundary value must be >= 1.
relation_report boundary_at(const std::string& name, const monomial& m, const std::string& var,
                            std::int64_t lo) {
    relation_report r;
    r.name = name;
    r.lhs = m.str();
    r.rhs = "1 on " + var + " >= 2^(" + std::to_string(lo) + ")";
    r.method = "boundary";
    rational p;
    bool others = false;
    for (const auto& [v, e] : m.pow) {
        if (v == var)
            p = e;
        else
            others = true;
    }
    rational at_boundary = m.log2c + p * rational(lo);
    r.ok = !others && p >= rational(0) && at_boundary >= rational(0);
    return r;
}

} // namespace

constants_profile constants_profile::relaxed() {
    constants_profile p;
    p.preset = profile_preset::relaxed;
    p.feasible = true;
    p.symbols = relaxed_symbols();
    p.alpha = p.symbols["alpha"].eval();
    p.alpha0 = p.symbols["alpha0"].eval();
    p.alpha1 = p.symbols["alpha1"].eval();
    p.sigma = p.symbols["sigma"].eval();
    p.tau = p.symbols["tau"].eval();
    p.eta = p.symbols["eta"].eval();
    p.kappa = p.symbols["kappa"].eval();
    p.shrink = p.symbols["shrink"].eval();
    p.gain = p.symbols["gain"].eval();
    p.size_frac = p.symbols["size_frac"].eval();
    p.unif_beta_frac = p.symbols["unif_beta_frac"].eval();
    p.density_floor = p.symbols["density_floor"].eval();
    p.step_budget = 12;
    p.search_budget = 2e7;
    return p;
}

constants_profile constants_profile::paper_faithful() {
    constants_profile p;
    p.preset = profile_preset::paper_faithful;
    p.feasible = false;
    p.symbols = faithful_symbols();
    // shadows at the unit reference point; several underflow to zero, which
    // is exactly why feasible stays false
    p.alpha = p.symbols["alpha"].eval();
    p.alpha0 = p.symbols["alpha0"].eval();
    p.alpha1 = p.symbols["alpha1"].eval();
    p.eta = p.symbols["eta"].eval();
    p.sigma = p.symbols["sigma_cap"].eval();
    p.tau = 0;
    p.kappa = p.symbols["kappa_u"].eval();
    p.shrink = 0;
    p.gain = p.symbols["gain_step"].eval();
    p.size_frac = p.symbols["size_floor"].eval();
    p.unif_beta_frac = 0;
    p.density_floor = 0;
    p.step_budget = 0;
    p.search_budget = 0;
    return p;
}

std::vector<relation_report> profile_relation_checks(const constants_profile& p) {
    std::vector<relation_report> out;
    const auto& s = p.symbols;
    auto get = [&](const char* k) { return s.at(k); };

    if (p.preset == profile_preset::paper_faithful) {
        monomial beta12 = monomial::var("beta1").times(monomial::var("beta2"));
        out.push_back(dominance("32 alpha0^{1/2} < alpha1",
                                dy(5).times(get("alpha0").powed(rational(1, 2))), get("alpha1"),
                                true));
        out.push_back(dominance("16 alpha0^2 < eta beta1 beta2",
                                dy(4).times(get("alpha0").powed(2)), get("eta").times(beta12),
                                true));
        out.push_back(dominance("eta <= 2^-50 alpha^2", get("eta"),
                                dy(-50).times(get("alpha").powed(2)), false));
        out.push_back(dominance("4 alpha0^{1/2} <= 2^-4 alpha1 eta beta1 beta2",
                                dy(2).times(get("alpha0").powed(rational(1, 2))),
                                dy(-4).times(get("alpha1")).times(get("eta")).times(beta12),
                                false));
        out.push_back(dominance("alpha0^{1/4} <= alpha1 beta1 beta2",
                                get("alpha0").powed(rational(1, 4)), get("alpha1").times(beta12),
                                false));
        out.push_back(equality("eta = 2^-100 alpha^3", get("eta"),
                               dy(-100).times(get("alpha").powed(3))));
        out.push_back(dominance("slice branch gain covers the floor", get("gain_inc"),
                                dy(-6).times(get("alpha1")).times(get("eta")), false));
        out.push_back(dominance("triple branch gain covers the floor", get("gain_inc"),
                                dy(-5).times(get("eta")), false));
        out.push_back(dominance("fallback branch gain covers the floor", get("gain_inc"),
                                dy(-40).times(get("alpha").powed(2)), false));
        out.push_back(dominance("combined step floor under the branch floor", get("gain_step"),
                                get("gain_inc"), false));
        out.push_back(dominance("uniformization kappa budget",
                                dy(3).times(get("kappa_u")).times(get("k0")),
                                dy(-3).times(monomial::var("tau")).times(beta12), false));
        out.push_back(dominance("two-step count fits the step budget",
                                dy(26).times(monomial::var("tau").powed(-4))
                                    .times(monomial::var("beta1").powed(-4))
                                    .times(monomial::var("beta2").powed(-4))
                                    .times(monomial::var("sigma").powed(-3)),
                                get("k0"), false));
        out.push_back(dominance("index range under budget times gain", dy(1),
                                get("k0").times(get("two_step_gain")), false));
        out.push_back(dominance("256 alpha0^{1/2} <= second-stage beta product",
                                dy(8).times(get("alpha0").powed(rational(1, 2))),
                                dy(-32).times(get("alpha").powed(4))
                                    .times(monomial::var("beta1").powed(2))
                                    .times(monomial::var("beta2").powed(2)), false));
        out.push_back(dominance("sigma cap under the density filters", get("sigma_cap"),
                                dy(-4).times(monomial::var("tau")).times(beta12), false));
        out.push_back(boundary_at("total steps cover the density range",
                                  get("k_total").times(get("gain_step")), "delta", -100));
        return out;
    }

    out.push_back(dominance("alpha1 > alpha0^{1/2}", get("alpha0").powed(rational(1, 2)),
                            get("alpha1"), true));
    out.push_back(dominance("alpha0^{1/4} <= alpha1", get("alpha0").powed(rational(1, 4)),
                            get("alpha1"), false));
    out.push_back(dominance("sigma <= tau / 2", get("sigma"), dy(-1).times(get("tau")), false));
    out.push_back(dominance("eta <= alpha", get("eta"), get("alpha"), false));
    out.push_back(dominance("gain <= eta / 16", get("gain"), dy(-4).times(get("eta")), false));
    out.push_back(dominance("alpha0^2 < eta", get("alpha0").powed(2), get("eta"), true));
    out.push_back(dominance("size_frac <= tau / 4", get("size_frac"), dy(-2).times(get("tau")),
                            false));
    out.push_back(dominance("density_floor >= 4 gain", dy(2).times(get("gain")),
                            get("density_floor"), false));
    out.push_back(dominance("shrink <= 1/2", get("shrink"), dy(-1), false));
    out.push_back(dominance("kappa <= 1/2", get("kappa"), dy(-1), false));
    out.push_back(dominance("case thresholds stay below sigma",
                            dy(-2).times(get("sigma").powed(rational(3, 2))), get("sigma"),
                            false));
    out.push_back(dominance("window retention under tau / 4", get("unif_beta_frac"),
                            dy(-2).times(get("tau")), false));
    return out;
}

} // namespace corners
