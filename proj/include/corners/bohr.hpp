#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "grid.hpp"
#include "intset.hpp"

namespace corners {

// Frequency analyzed for membership tests.  A value that is (to within
// 1e-13) a rational with denominator at most 1e6 gets an exact residue
// branch; everything else goes through long double remainders with a guard
// band, and borderline elements are flagged rather than silently kept.
struct frequency {
    double value = 0;
    bool rational = false;
    std::int64_t p = 0, q = 1;
};

frequency analyze_frequency(double theta);
double freq_dist(const frequency& f, std::int64_t x);   // distance of x*theta to Z

struct bohr_spec {
    std::vector<double> theta;
    double eps = 1.0;        // in (0, 1]
    double radius = 0;       // membership window |x - offset| <= radius
    std::int64_t offset = 0;
    int dim() const { return static_cast<int>(theta.size()); }
};

// The attendant/cover window factor: eps and radius perturbations are
// measured in units of kappa/(100 d); a zero-dimensional spec is a plain
// interval and degrades to plain kappa.
double window_factor(int dim, double kappa);

class bohr_set {
public:
    bohr_set() = default;
    bohr_set(bohr_spec spec, int_set elems, std::vector<std::int64_t> flagged)
        : spec_(std::move(spec)), elems_(std::move(elems)), flagged_(std::move(flagged)) {}

    const bohr_spec& spec() const { return spec_; }
    const int_set& set() const { return elems_; }
    std::size_t size() const { return elems_.size(); }
    bool contains(std::int64_t x) const { return elems_.contains(x); }
    const std::vector<std::int64_t>& flagged() const { return flagged_; }

private:
    bohr_spec spec_;
    int_set elems_;
    std::vector<std::int64_t> flagged_;
};

bohr_set build_bohr(const bohr_spec& spec);
bool bohr_membership(const std::vector<frequency>& freqs, const bohr_spec& spec,
                     std::int64_t x, bool* borderline);

struct size_bound_report {
    std::size_t measured = 0;
    double lower = 0;        // eps^dim * radius / 2
    bool ok = false;
};
size_bound_report size_lower_bound(const bohr_set& lam);

struct regularity_probe {
    double eps1 = 0;
    double radius1 = 0;
    double ratio = 0;
    bool ok = false;
};

struct regularity_report {
    double kappa = 0;
    double eps1 = 0;
    double radius1 = 0;
    std::size_t base_size = 0;
    int grid = 0;
    std::vector<regularity_probe> probes;
    double min_ratio = 0, max_ratio = 0;
    bool regular = false;
};

// Probe the size stability of Λ_{θ, eps1, n1}: sample a grid of perturbed
// parameters strictly inside the window |eps - eps'| < w_e, |n - n'| < w_n
// with w = window_factor(d, kappa) * base, and require every size ratio to
// stay inside (1 - kappa, 1 + kappa).
regularity_report probe_regular(const std::vector<double>& theta, double eps1, double radius1,
                                double kappa, int grid = 33);

struct find_regular_result {
    bohr_set set;
    regularity_report report;
};

// Scan radius1 downward from radius-1 and eps1 over a 64-point geometric
// grid in (eps/2, eps), returning the first pair whose probe grid passes.
find_regular_result find_regular(const std::vector<double>& theta, double eps, double radius,
                                 double kappa, int grid = 33,
                                 std::uint64_t candidate_budget = 200000);

// Regular sharpening of Λ at scale eps_a: frequencies theta ++ extra, target
// window eps in [eps_a eps0 / 2, eps_a eps0], radius likewise.  The result
// is centered at zero regardless of the host offset.
bohr_set attendant(const bohr_set& host, double eps_a, const std::vector<double>& extra,
                   double kappa, int grid = 33);

// Does att sit inside the attendant window of host at scale eps_a?
bool is_attendant_of(const bohr_spec& att, const bohr_spec& host, double eps_a);

supp_fn convolve(const supp_fn& f, const supp_fn& g);   // sum_s f(s) conj g(n - s)

struct cover_profile_result {
    double kappa = 0;
    std::size_t host_size = 0, att_size = 0;
    std::int64_t count_pos = 0;    // translates meeting the host at all
    std::int64_t count_full = 0;   // translates fully inside the host
    double l1_residual = 0;        // || conv / |Λ'| - 1_Λ ||_1
    bool pos_ok = false;           // count_pos <= (1 + kappa) |Λ|
    bool full_ok = false;          // count_full >= (1 - kappa) |Λ|
    bool l1_ok = false;            // l1_residual < 2 kappa |Λ|
    bohr_set lam_plus, lam_minus;
    bool sandwich_ok = false;      // Λ- ⊆ Λ ⊆ Λ+
    bool plus_ok = false;          // |Λ+| <= (1 + kappa) |Λ|
    bool minus_ok = false;         // |Λ-| >= (1 - kappa) |Λ|
    std::size_t sumset_size = 0;
    bool sumset_ok = false;        // |Λ| <= |Λ + Λ'| <= (1 + 2 kappa) |Λ|
    bool translate_cover_ok = false; // for every s in Λ': Λ- ⊆ Λ + s
};

// How well translates of the attendant tile the host: computes the
// convolution cover counts, the scaled copies Λ±, the sumset growth, and the
// translate inclusions, with each bound reported rather than asserted.
cover_profile_result cover_profile(const bohr_set& lam, const bohr_set& att, double kappa);

struct local_density_result {
    double global_density = 0;
    double translate_average = 0;
    double residual = 0;
    double bound = 0;              // 4 kappa
    bool ok = false;
};

// Averaging local densities of E over attendant translates centered in
// Λ + x recovers the global density up to 4 kappa.
local_density_result local_density_residual(const grid_set& e, const bohr_set& lam,
                                            const bohr_set& att, grid_point x, double kappa);
local_density_result local_density_residual_1d(const int_set& e, const bohr_set& lam,
                                               const bohr_set& att, std::int64_t x,
                                               double kappa);

} // namespace corners
