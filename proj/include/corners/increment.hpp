#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bohr.hpp"
#include "grid.hpp"
#include "harmonic.hpp"
#include "intset.hpp"
#include "profile.hpp"

namespace corners {

// Slice accounting over window translates: B collects the translates s of the
// window along the first axis where A's count falls below (delta - eta) times
// C's count, and the displayed bound says the remaining slices carry almost
// all of A's mass:
//   sum_{s not in B} |A cap ((W+s) x Lam2)|
//     >= delta sum_{s not in B} |C cap ...| + eta sum_{s in B} |C cap ...|
//        - 4 kappa |W| |Lam1| |Lam2|
struct slice_deficit_report {
    double delta = 0, eta = 0, kappa = 0;
    std::vector<std::int64_t> b_members;
    double sum_good_a = 0, sum_good_c = 0, sum_bad_c = 0;
    double lhs = 0, rhs = 0;
    bool ok = false;
};
slice_deficit_report slice_deficit_check(const grid_set& a, const grid_set& c,
                                         const bohr_set& lam1, const bohr_set& lam2,
                                         const bohr_set& att, double eta, double kappa);

// Green's increment: a box-nonuniform A on E1 x E2 yields F1, F2 with
//   density(A on F1 x F2) > delta + alpha^2 / 2^14,  |F_i| >= 2^-8 alpha |E_i|.
// Both bounds are re-verified on the candidate before returning.
struct green_result {
    int_set f1, f2;
    double delta = 0, alpha = 0, measured = 0;
    double new_density = 0, target = 0;
    double floor1 = 0, floor2 = 0;
    std::uint64_t nodes = 0;
    std::string strategy;   // "heavy_columns", "column_pair", or "random"
};

struct green_budget_exceeded : search_budget_exceeded {
    double best_density;
    std::size_t best_f1, best_f2;
    green_budget_exceeded(const std::string& w, double d, std::size_t s1, std::size_t s2)
        : search_budget_exceeded(w), best_density(d), best_f1(s1), best_f2(s2) {}
};

green_result green_increment(const grid_set& a, const int_set& e1, const int_set& e2,
                             double alpha, double budget = 2e6, std::uint64_t seed = 1);

// Bourgain's refinement: a large Fourier coefficient of the balanced set
// forces the local densities over translates of the refined Bohr set to
// spread; x0 joins the frequency list and the window parameters scale by
// window_factor(dim, kappa).
struct bourgain_result {
    double x0 = 0;
    bohr_spec lam_prime;
    double variance = 0;
    double delta = 0;
    double alpha = 0;            // requested level
    double alpha_measured = 0;   // certified sup lower bracket / |Lam|
    double witness_dev = 0;      // |Q^(x0) - delta Lam^(x0)| recomputed directly
    double sup_lower = 0, sup_upper = 0;
    double kappa = 0;
    bool kappa_ok = false;       // kappa <= alpha_measured / 32, reported not enforced
    double relax_frac = 0;
    bool variance_ok = false;    // variance >= relax_frac * alpha_measured^2 / 4
};
bourgain_result bourgain_increment(const int_set& q, const bohr_set& lam, double alpha,
                                   double kappa, double relax_frac = 0.25,
                                   double fourier_tol = 1e-6);

// Mean-square density statements over attendant translates.  Each selector
// evaluates both sides of its inequality exactly on the instance; the
// measured attendant defect (how far translate averages drift from the global
// density) supplies the kappa slack.
enum class l2_selector {
    product_mean,      // 2-d translate mean of squared densities >= delta^2 - 8 kappa
    product_mean_1d,
    variance_lift,     // variance hypothesis lifts the mean square to delta^2 + var - 4 kappa
    variance_lift_1d,
    product_gain,      // variance failure in one factor lifts the product mean square
    bourgain_gain      // sup failure does the same through a refined Bohr set
};
struct l2_report {
    l2_selector selector{};
    double lhs = 0, rhs = 0, slack = 0;
    double delta = 0, beta1 = 0, beta2 = 0;
    double alpha = 0, kappa = 0;
    double hypothesis = 0;       // the measured hypothesis quantity
    int coord = 0;               // which factor triggered, for the product forms
    bohr_spec built;             // the refined spec, for bourgain_gain
    bool ok = false;
};
l2_report l2_product_mean(const grid_set& q, const bohr_set& lam, const bohr_set& att,
                          double kappa);
l2_report l2_product_mean_1d(const int_set& q, const bohr_set& lam, const bohr_set& att,
                             double kappa);
l2_report l2_variance_lift(const grid_set& q, const bohr_set& lam, const bohr_set& att,
                           double kappa);
l2_report l2_variance_lift_1d(const int_set& q, const bohr_set& lam, const bohr_set& att,
                              double kappa);
l2_report l2_product_gain(const int_set& e1, const int_set& e2, const bohr_set& lam,
                          const bohr_set& att, double kappa);
l2_report l2_bourgain_gain(const int_set& e1, const int_set& e2, const bohr_set& lam,
                           double alpha, double kappa);

// Nested averaging chain: level k averages over positions drawn uniformly
// from the root window convolved with the first k star windows, and
// evaluates the functional on the level-k star translated to the drawn
// position.  Stars are regular attendants of the previous level, so the
// drift the chain accumulates stays inside the cover error.
struct index_chain {
    bohr_spec root;
    int_set root_set;
    std::vector<bohr_spec> star_specs;
    std::vector<int_set> star_sets;
    double shrink = 0, kappa = 0;
    int depth() const { return static_cast<int>(star_specs.size()) - 1; }
};
index_chain make_chain(const bohr_spec& root, int depth, double shrink, double kappa);

enum class index_fn {
    g_sq,     // squared density of E over the translated star product
    g_one,    // density of A
    g_two,    // density of A inside E cap the translated product
    g_three   // density of E
};
double index_eval(const index_chain& ch, index_fn tag, int k, const grid_set& e_prod,
                  const grid_set* a = nullptr, const grid_set* marker = nullptr);

// One uniformization descent step.  case_fired: 3 = global Fourier peak
// (refined Bohr set through bourgain_increment), 2 = translate variance
// (same-frequency attendant), 1 = translate family (attendant, with the
// near-balanced filter sizes logged).  Index estimates are sampled means;
// after-values are measured at the next level and patched in.
struct uniformize_step {
    int step = 0;
    int case_fired = 0;
    std::string mechanism;       // "fourier_peak_refine", "mean_square_lift", "translate_family"
    double ind_before = 0, ind_after = 0;   // restricted density-mean estimate
    double g_before = 0, g_after = 0;       // squared-density mean estimate
    double gain = 0;                        // g_after - g_before
    double theory_gain = 0;                 // the case's claimed lower-order gain
    int dim = 0;
    double eps = 0;
    std::int64_t radius = 0;
    std::int64_t t1 = 0, t2 = 0;
    std::int64_t b_size = 0, b_tilde_size = 0;
};

struct uniformize_result {
    bohr_spec lam_out;
    std::array<std::int64_t, 2> t{0, 0};
    int_set e1p, e2p;            // centered inside lam_out
    std::vector<uniformize_step> trace;
    uniformity_report_result rep1, rep2;
    double beta1_in = 0, beta2_in = 0;
    double beta1 = 0, beta2 = 0;
    bool retention_ok = false;   // window density product floor
    double a_density = -1;       // density of the tracked set on the output windows
    bool density_ok = false;
    bool already_uniform = false;
};

// Descend through attendant translates until both window sets test uniform
// at level sigma.  The optional tracked set a (with its baseline density)
// adds the requirement that the chosen windows keep its density.
uniformize_result uniformize(const int_set& e1, const int_set& e2, const bohr_set& lam,
                             std::array<std::int64_t, 2> shift,
                             const constants_profile& profile, const grid_set* a = nullptr,
                             double delta_base = -1);

struct increment_hosts {
    bohr_set lam1, lam2;   // hosts for the two axes
    bohr_set att;          // first-level window
    bohr_set att2;         // second-level window
};

struct branch_diag {
    std::string branch;
    double best = 0, target = 0;
    std::string note;
};

// One increment of the density on a corner-free set: scan window slices for a
// direct surplus, then window pairs at the finer scale, then fall back to
// Green's increment on the best box-energy window.  First branch whose
// verified postcondition passes wins.
struct increment_step_result {
    bohr_spec lam_tilde;
    std::array<std::int64_t, 2> y{0, 0};
    int_set f1, f2;              // absolute subsets of e1, e2
    double delta = 0, new_density = 0, gain = 0;
    double size_floor1 = 0, size_floor2 = 0;
    std::string branch;          // "slice_surplus", "window_surplus", "box_energy"
    std::vector<branch_diag> diagnostics;
};
increment_step_result increment_step(const grid_set& a, const int_set& e1, const int_set& e2,
                                     const increment_hosts& hosts,
                                     const constants_profile& profile,
                                     std::uint64_t seed = 1);

// Running state of the driver; the constructor enforces the floors every
// displayed inequality divides by.
struct increment_state {
    bohr_spec bohr;
    std::array<std::int64_t, 2> shift{0, 0};
    int_set e1, e2;              // absolute coordinates
    grid_set a;                  // absolute coordinates
    double delta = 0, beta1 = 0, beta2 = 0;
    std::vector<std::string> log;

    increment_state(bohr_spec spec, std::array<std::int64_t, 2> s, int_set e1_, int_set e2_,
                    grid_set a_, const constants_profile& profile);
};

enum class driver_outcome { corner_found, density_exceeded_one, step_budget };

struct driver_cond {
    double lhs = 0, rhs = 0;
    bool ok = false;
};

struct driver_step_record {
    int step = 0;
    std::string stage;           // "corner_scan", "symmetrize", "uniformize", "counting", "increment"
    std::string mechanism;
    double before = 0, after = 0, gain = 0;
    int dim = 0;
    double eps = 0;
    std::int64_t radius = 0;
    std::int64_t s1 = 0, s2 = 0;
    driver_cond cond_beta, cond_uniform, cond_gain;
    std::string detail;
};

struct driver_result {
    driver_outcome outcome{};
    std::optional<corner_triple> witness;
    bool witness_verified = false;
    std::vector<driver_step_record> trace;
    double initial_density = 0, final_density = 0;
    int iterations = 0;
    std::string stop_reason;
};

// Full pipeline on a finite instance: scan for corners, symmetrize, then
// iterate uniformize / counting audit / increment until the density cannot
// grow further or the budget runs out.  Every reported corner is re-verified
// against the corner oracles before it is returned.
driver_result increment_driver(const grid_set& a0, std::int64_t n,
                               const constants_profile& profile, std::uint64_t seed = 1);

} // namespace corners
