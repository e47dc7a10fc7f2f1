#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rational.hpp"

namespace corners {

// Symbolic value 2^log2c * prod_v v^pow[v], every variable ranging over
// (0, 1].  Exponents are rational so square and fourth roots of the stored
// constants stay exact.
struct monomial {
    rational log2c;
    std::map<std::string, rational> pow;

    static monomial dyadic(const rational& e);
    static monomial var(const std::string& name, const rational& e = rational(1));

    monomial times(const monomial& o) const;
    monomial powed(const rational& e) const;
    double eval(const std::map<std::string, double>& vars = {}) const;
    std::string str() const;
};

// lhs <= rhs for every assignment of the variables in (0, 1]: requires the
// dyadic coefficient no larger and every variable exponent no smaller.  With
// strict, the coefficient comparison must be strict.
bool dominated_on_unit(const monomial& lhs, const monomial& rhs, bool strict = false);

struct relation_report {
    std::string name;
    std::string lhs, rhs;
    bool strict = false;
    bool ok = false;
    std::string method;   // "dominance" or "boundary"
};

enum class profile_preset { paper_faithful, relaxed };

// Working constants for the increment engine.  Both presets carry the full
// symbolic table; the relaxed preset's symbols are variable-free dyadics
// whose float shadows are the executable knobs below, while the faithful
// preset's symbols keep their delta/beta/tau/sigma dependence and are only
// ever used through the exact relation checks (their shadows underflow, and
// feasible stays false).
struct constants_profile {
    profile_preset preset = profile_preset::relaxed;
    bool feasible = true;

    double alpha = 0;           // box-uniformity working level
    double alpha0 = 0;          // host uniformity level
    double alpha1 = 0;          // slice-family threshold
    double sigma = 0;           // uniformization level
    double tau = 0;             // density surplus parameter
    double eta = 0;             // slice surplus target
    double kappa = 0;           // attendant regularity
    double shrink = 0;          // attendant scale per level
    double gain = 0;            // accepted increment floor
    double size_frac = 0;       // |F_i| >= size_frac * beta_i * |window|
    double unif_beta_frac = 0;  // window density retention floor
    double density_floor = 0;
    int step_budget = 0;
    double search_budget = 0;

    std::map<std::string, monomial> symbols;

    static constants_profile relaxed();
    static constants_profile paper_faithful();
};

// The ordering relations the increment proofs consume, evaluated exactly on
// the profile's symbol table.  The faithful table checks the displayed
// constants (32 alpha0^{1/2} < alpha1, 16 alpha0^2 < eta beta1 beta2, ...);
// the relaxed table checks the weakened analogs its knobs were chosen for.
std::vector<relation_report> profile_relation_checks(const constants_profile& p);

} // namespace corners
