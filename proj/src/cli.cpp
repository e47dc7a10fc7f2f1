#include "corners/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "corners/bohr.hpp"
#include "corners/constructions.hpp"
#include "corners/errors.hpp"
#include "corners/grid.hpp"
#include "corners/harmonic.hpp"
#include "corners/increment.hpp"
#include "corners/intset.hpp"
#include "corners/io.hpp"
#include "corners/profile.hpp"
#include "corners/recurrence.hpp"

namespace corners {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct run_result {
    json record = {{"command", ""},
                   {"inputs", json::object()},
                   {"outputs", json::object()},
                   {"checks", json::array()},
                   {"seed", nullptr},
                   {"version", artifact_version}};
    std::vector<std::string> human;          // status lines
    std::string dump;                        // machine payload for dump commands
    std::map<std::string, std::string> files;
    bool is_dump = false;
};

void add_check(run_result& rr, const char* ref, double lhs, double rhs, bool ok) {
    rr.record["checks"].push_back({{"ref", ref}, {"lhs", lhs}, {"rhs", rhs}, {"ok", ok}});
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw bad_input("cannot read file: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::string read_stream(std::istream& in) {
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

bool looks_like_json(const std::string& text) {
    auto pos = text.find_first_not_of(" \t\r\n");
    return pos != std::string::npos && text[pos] == '{';
}

std::string format_points(const grid_set& s) {
    std::ostringstream os;
    for (std::size_t i = 0; i < s.points().size(); ++i) {
        if (i) os << ' ';
        os << '(' << s.points()[i].x << ',' << s.points()[i].y << ')';
    }
    return os.str();
}

json spec_json(const bohr_spec& spec) {
    return {{"theta", spec.theta}, {"eps", spec.eps}, {"N", spec.radius},
            {"offset", spec.offset}, {"dim", spec.dim()}};
}

int_set sample_subset(const std::vector<std::int64_t>& universe, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(p);
    std::vector<std::int64_t> xs;
    for (auto x : universe)
        if (coin(rng)) xs.push_back(x);
    return int_set(std::move(xs));
}

grid_set sample_product_subset(const int_set& e1, const int_set& e2, double p,
                               std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(p);
    std::vector<grid_point> pts;
    for (auto x : e1.elems())
        for (auto y : e2.elems())
            if (coin(rng)) pts.push_back({x, y});
    return grid_set(std::move(pts));
}

// every option lives on the root app; leaves only name the operation
struct cli_options {
    std::string profile = "relaxed";
    std::vector<std::string> consts;
    std::string out_dir;
    std::uint64_t seed = 0;
    int trials = 100;
    double budget = -1;
    std::int64_t n = -1;
    double delta = -1;
    std::string mode = "posd";
    std::string set_path, e1_path, e2_path, system_path, y_path, g_path;
    bool use_stdin = false;
    bool full = false;
    bool checkerboard = false;
    bool evens = false;
    std::vector<double> theta;
    double eps = 1.0;
    std::int64_t offset = 0;
    double kappa = 0.25;
    double shrink = 0.5;
    int grid = 33;
    std::int64_t from = 4, to = 16;
    double alpha = 0.0625;
    double relax = 0.25;
    double beta1 = 0.5, beta2 = 0.5;
    std::vector<std::int64_t> torus;
    double y_density = -1;
    int t = 2;
    int steps = 8;
};

struct cli_ctx {
    cli_options o;
    bool seed_given = false;
    bool trials_given = false;
    run_result rr;

    std::uint64_t seed_or(std::uint64_t fallback) const { return seed_given ? o.seed : fallback; }
    void need_seed() const {
        if (!seed_given) throw bad_input("this command draws randomness; pass --seed");
    }
    double budget_or(double fallback) const { return o.budget < 0 ? fallback : o.budget; }

    corner_mode mode() const {
        if (o.mode == "posd") return corner_mode::positive_d;
        if (o.mode == "nzd") return corner_mode::nonzero_d;
        throw bad_input("unknown mode: " + o.mode);
    }

    grid_set load_points(std::istream& stdin_stream) const {
        std::string text;
        if (!o.set_path.empty())
            text = read_file(o.set_path);
        else if (o.use_stdin)
            text = read_stream(stdin_stream);
        else
            throw bad_input("pass the point set via --set <file> or --stdin");
        return looks_like_json(text) ? grid_set_from_json(text) : points_from_text(text);
    }

    constants_profile resolve_profile() {
        constants_profile p = o.profile == "paper" ? constants_profile::paper_faithful()
                                                   : constants_profile::relaxed();
        json ov = json::object();
        for (const auto& kv : o.consts) {
            auto pos = kv.find('=');
            if (pos == std::string::npos) throw bad_input("--const expects key=value");
            std::string key = kv.substr(0, pos);
            double val = 0;
            try {
                val = std::stod(kv.substr(pos + 1));
            } catch (const std::exception&) {
                throw bad_input("--const " + key + ": value is not a number");
            }
            if (key == "alpha") p.alpha = val;
            else if (key == "alpha0") p.alpha0 = val;
            else if (key == "alpha1") p.alpha1 = val;
            else if (key == "sigma") p.sigma = val;
            else if (key == "tau") p.tau = val;
            else if (key == "eta") p.eta = val;
            else if (key == "kappa") p.kappa = val;
            else if (key == "shrink") p.shrink = val;
            else if (key == "gain") p.gain = val;
            else if (key == "size_frac") p.size_frac = val;
            else if (key == "unif_beta_frac") p.unif_beta_frac = val;
            else if (key == "density_floor") p.density_floor = val;
            else if (key == "step_budget") p.step_budget = static_cast<int>(val);
            else if (key == "search_budget") p.search_budget = val;
            else throw bad_input("unknown constant: " + key);
            ov[key] = val;
        }
        rr.record["inputs"]["profile"] = o.profile;
        rr.record["inputs"]["overrides"] = ov;
        return p;
    }

    finite_system load_system() const {
        if (!o.system_path.empty()) return finite_system_from_json(read_file(o.system_path));
        if (o.torus.size() == 5)
            return finite_system::torus_translations(o.torus[0], o.torus[1], o.torus[2],
                                                     o.torus[3], o.torus[4]);
        throw bad_input("pass --system <file> or --torus m,a1,a2,b1,b2");
    }
};

// ---- leaf actions -------------------------------------------------------

void run_corners_count(cli_ctx& c, std::istream& in) {
    auto& inputs = c.rr.record["inputs"];
    inputs["mode"] = c.o.mode;
    if (c.trials_given) {
        if (c.o.n < 1 || c.o.delta < 0) throw bad_input("--trials needs --n and --delta");
        c.need_seed();
        inputs["n"] = c.o.n;
        inputs["delta"] = c.o.delta;
        inputs["trials"] = c.o.trials;
        auto st = expected_corner_report(c.o.n, c.o.delta, c.o.trials, c.o.seed);
        auto& outs = c.rr.record["outputs"];
        outs["mean"] = st.mean;
        outs["stddev"] = st.stddev;
        outs["stderr"] = st.stderr_mean;
        outs["predicted"] = st.predicted;
        outs["zscore"] = st.zscore;
        add_check(c.rr, "random-corner-heuristic", std::fabs(st.mean - st.predicted),
                  5 * st.stderr_mean, std::fabs(st.zscore) <= 5.0);
        std::ostringstream os;
        os << "mean " << st.mean << " predicted " << st.predicted << " z " << st.zscore;
        c.rr.human.push_back(os.str());
        return;
    }

    grid_set a;
    if (c.o.full) {
        if (c.o.n < 1) throw bad_input("--full needs --n");
        a = grid_set::square(c.o.n);
        inputs["n"] = c.o.n;
        inputs["source"] = "full";
    } else if (!c.o.set_path.empty() || c.o.use_stdin) {
        a = c.load_points(in);
        inputs["source"] = c.o.use_stdin ? "stdin" : c.o.set_path;
    } else if (c.o.delta >= 0) {
        if (c.o.n < 1) throw bad_input("--delta needs --n");
        c.need_seed();
        a = random_grid_set(c.o.n, c.o.delta, c.o.seed);
        inputs["n"] = c.o.n;
        inputs["delta"] = c.o.delta;
        inputs["source"] = "random";
    } else {
        throw bad_input("choose --full, --set/--stdin, or --delta with --seed");
    }
    std::int64_t count = count_corners(a, c.mode());
    c.rr.record["outputs"]["count"] = count;
    c.rr.record["outputs"]["points"] = a.size();
    if (c.o.full) {
        std::int64_t closed = full_grid_corner_count(c.o.n);
        std::int64_t rhs = c.mode() == corner_mode::positive_d ? closed : 2 * closed;
        add_check(c.rr, "corner-count-closed-form", double(count), double(rhs), count == rhs);
    }
    c.rr.human.push_back(std::to_string(count));
}

void run_corners_max(cli_ctx& c) {
    if (c.o.n < 1) throw bad_input("corners max needs --n");
    auto& inputs = c.rr.record["inputs"];
    inputs["n"] = c.o.n;
    inputs["mode"] = c.o.mode;
    std::uint64_t nodes = static_cast<std::uint64_t>(c.budget_or(1e7));
    inputs["budget"] = nodes;
    auto r = max_corner_free(c.o.n, c.mode(), nodes);
    auto& outs = c.rr.record["outputs"];
    outs["size"] = r.size;
    outs["density"] = std::to_string(r.density.num) + "/" + std::to_string(r.density.den);
    outs["nodes"] = r.nodes;
    auto wit = json::array();
    for (const auto& p : r.witness.points()) wit.push_back({p.x, p.y});
    outs["witness"] = std::move(wit);
    add_check(c.rr, "density-ratio-identity", double(r.size),
              r.density.to_double() * double(c.o.n) * double(c.o.n),
              std::fabs(double(r.size) - r.density.to_double() * double(c.o.n * c.o.n)) < 1e-9);
    c.rr.human.push_back("size " + std::to_string(r.size));
    c.rr.human.push_back("L = " + std::to_string(r.density.num) + "/" +
                         std::to_string(r.density.den));
    c.rr.human.push_back("witness " + format_points(r.witness));
}

void run_corners_free(cli_ctx& c, std::istream& in) {
    grid_set a = c.load_points(in);
    c.rr.record["inputs"]["mode"] = c.o.mode;
    c.rr.record["inputs"]["points"] = a.size();
    bool free = is_corner_free(a, c.mode());
    c.rr.record["outputs"]["corner_free"] = free;
    if (!free) {
        auto w = find_corner(a, c.mode());
        c.rr.record["outputs"]["witness"] = {{"k", w->k}, {"m", w->m}, {"d", w->d}};
        std::ostringstream os;
        os << "corner_free false (" << w->k << ',' << w->m << ',' << w->d << ')';
        c.rr.human.push_back(os.str());
    } else {
        c.rr.human.push_back("corner_free true");
    }
}

void run_bohr_build(cli_ctx& c) {
    if (c.o.n < 1) throw bad_input("bohr build needs --n (the radius)");
    bohr_spec spec{c.o.theta, c.o.eps, double(c.o.n), c.o.offset};
    c.rr.record["inputs"]["spec"] = spec_json(spec);
    auto b = build_bohr(spec);
    auto sb = size_lower_bound(b);
    auto& outs = c.rr.record["outputs"];
    outs["size"] = b.size();
    outs["dim"] = spec.dim();
    outs["flagged"] = b.flagged().size();
    outs["size_floor"] = sb.lower;
    add_check(c.rr, "bohr-size-floor", double(sb.measured), sb.lower, sb.ok);
    c.rr.is_dump = true;
    c.rr.dump = int_set_to_text(b.set());
    c.rr.human.push_back("size " + std::to_string(b.size()) + " dim " +
                         std::to_string(spec.dim()));
}

void run_bohr_regular(cli_ctx& c) {
    if (c.o.n < 1) throw bad_input("bohr regular needs --n (the radius)");
    auto& inputs = c.rr.record["inputs"];
    inputs["spec"] = spec_json({c.o.theta, c.o.eps, double(c.o.n), 0});
    inputs["kappa"] = c.o.kappa;
    inputs["grid"] = c.o.grid;
    std::uint64_t cand = static_cast<std::uint64_t>(c.budget_or(200000));
    auto fr = find_regular(c.o.theta, c.o.eps, double(c.o.n), c.o.kappa, c.o.grid, cand);
    auto& outs = c.rr.record["outputs"];
    outs["eps1"] = fr.report.eps1;
    outs["radius1"] = fr.report.radius1;
    outs["size"] = fr.set.size();
    outs["min_ratio"] = fr.report.min_ratio;
    outs["max_ratio"] = fr.report.max_ratio;
    outs["spec"] = spec_json(fr.set.spec());
    double dev = std::max(std::fabs(fr.report.min_ratio - 1.0),
                          std::fabs(fr.report.max_ratio - 1.0));
    add_check(c.rr, "regularity-band", dev, c.o.kappa, fr.report.regular);
    std::ostringstream os;
    os << "regular eps' " << fr.report.eps1 << " N' " << fr.report.radius1 << " size "
       << fr.set.size();
    c.rr.human.push_back(os.str());
}

void run_bohr_attendant(cli_ctx& c) {
    if (c.o.n < 1) throw bad_input("bohr attendant needs --n (the host radius)");
    bohr_spec spec{c.o.theta, c.o.eps, double(c.o.n), c.o.offset};
    auto& inputs = c.rr.record["inputs"];
    inputs["spec"] = spec_json(spec);
    inputs["kappa"] = c.o.kappa;
    inputs["shrink"] = c.o.shrink;
    auto host = build_bohr(spec);
    auto att = attendant(host, c.o.shrink, {}, c.o.kappa, c.o.grid);
    auto& outs = c.rr.record["outputs"];
    outs["host_size"] = host.size();
    outs["att_size"] = att.size();
    outs["spec"] = spec_json(att.spec());
    add_check(c.rr, "attendant-window", att.spec().eps, c.o.shrink * spec.eps,
              is_attendant_of(att.spec(), host.spec(), c.o.shrink));
    std::ostringstream os;
    os << "attendant eps " << att.spec().eps << " N " << att.spec().radius << " size "
       << att.size();
    c.rr.human.push_back(os.str());
}

void run_bohr_profile(cli_ctx& c) {
    if (c.o.from < 2 || c.o.to < c.o.from) throw bad_input("bohr profile needs 2 <= --from <= --to");
    auto& inputs = c.rr.record["inputs"];
    inputs["theta"] = c.o.theta;
    inputs["eps"] = c.o.eps;
    inputs["kappa"] = c.o.kappa;
    inputs["from"] = c.o.from;
    inputs["to"] = c.o.to;
    auto rows = json::array();
    std::vector<double> xs, ys;
    for (std::int64_t r = c.o.from; r <= c.o.to; ++r) {
        auto rep = probe_regular(c.o.theta, c.o.eps, double(r), c.o.kappa, c.o.grid);
        rows.push_back({{"radius", r},
                        {"regular", rep.regular},
                        {"min_ratio", rep.min_ratio},
                        {"max_ratio", rep.max_ratio}});
        xs.push_back(double(r));
        ys.push_back(rep.max_ratio);
        std::ostringstream os;
        os << "radius " << r << (rep.regular ? " regular" : " irregular") << " ratio ["
           << rep.min_ratio << ", " << rep.max_ratio << "]";
        c.rr.human.push_back(os.str());
    }
    c.rr.record["outputs"]["rows"] = std::move(rows);
    c.rr.files["profile.csv"] = plot_csv("radius", "max_ratio", xs, ys);
    c.rr.files["profile.svg"] = plot_svg("radius", "max_ratio", xs, ys);
}

void run_uniformity_report(cli_ctx& c) {
    if (c.o.n < 1) throw bad_input("uniformity report needs --n (the host radius)");
    auto& inputs = c.rr.record["inputs"];
    inputs["alpha"] = c.o.alpha;
    inputs["kappa"] = c.o.kappa;
    inputs["shrink"] = c.o.shrink;
    inputs["n"] = c.o.n;
    auto host = find_regular(c.o.theta, c.o.eps, double(c.o.n), c.o.kappa).set;
    auto att = attendant(host, c.o.shrink, {}, c.o.kappa);
    int_set q;
    if (!c.o.set_path.empty()) {
        q = int_set_from_text(read_file(c.o.set_path));
        inputs["source"] = c.o.set_path;
    } else {
        double d = c.o.delta < 0 ? 0.5 : c.o.delta;
        c.need_seed();
        q = sample_subset(host.set().elems(), d, c.o.seed);
        inputs["delta"] = d;
        inputs["source"] = "random";
    }
    auto rep = uniformity_report(q, host, att, c.o.alpha);
    auto& outs = c.rr.record["outputs"];
    outs["alpha"] = rep.alpha;
    outs["delta"] = rep.delta;
    outs["host_size"] = rep.host_size;
    outs["att_size"] = rep.att_size;
    outs["uniform"] = rep.uniform;
    outs["variance"] = rep.variance;
    outs["sup_dev"] = rep.sup_dev;
    auto clause = [](const uniformity_clause& u) {
        return json{{"lhs", u.lhs}, {"rhs", u.rhs}, {"ok", u.ok}};
    };
    outs["translate_clause"] = clause(rep.translate_clause);
    outs["variance_clause"] = clause(rep.variance_clause);
    outs["global_clause"] = clause(rep.global_clause);
    outs["b_star_clause"] = clause(rep.b_star_clause);
    outs["b_size"] = rep.b_size;
    outs["b_star_size"] = rep.b_star_size;
    std::vector<double> xs, ys;
    const auto& elems = host.set().elems();
    for (std::size_t i = 0; i < rep.local_dens.size() && i < elems.size(); ++i) {
        xs.push_back(double(elems[i]));
        ys.push_back(rep.local_dens[i]);
    }
    c.rr.files["local_density.csv"] = plot_csv("translate", "local_density", xs, ys);
    c.rr.files["local_density.svg"] = plot_svg("translate", "local_density", xs, ys);
    c.rr.human.push_back(std::string("uniform ") + (rep.uniform ? "true" : "false"));
}

// shared instance loader for the product-set commands
struct product_instance {
    grid_set a;
    int_set e1, e2;
};

product_instance load_product(cli_ctx& c, std::istream& in) {
    product_instance pi;
    auto& inputs = c.rr.record["inputs"];
    if (c.o.checkerboard) {
        std::int64_t n = c.o.n < 1 ? 15 : c.o.n;
        std::vector<grid_point> pts;
        for (std::int64_t x = 0; x <= n; ++x)
            for (std::int64_t y = 0; y <= n; ++y)
                if ((x + y) % 2 == 0) pts.push_back({x, y});
        pi.a = grid_set(std::move(pts));
        pi.e1 = pi.e2 = int_set::interval(0, n);
        inputs["instance"] = "checkerboard";
        inputs["n"] = n;
        return pi;
    }
    if (!c.o.e1_path.empty() || !c.o.e2_path.empty()) {
        if (c.o.e1_path.empty() || c.o.e2_path.empty())
            throw bad_input("pass both --e1 and --e2");
        pi.e1 = int_set_from_text(read_file(c.o.e1_path));
        pi.e2 = int_set_from_text(read_file(c.o.e2_path));
        pi.a = c.load_points(in);
        inputs["instance"] = "files";
        return pi;
    }
    if (c.o.n < 1) throw bad_input("random product instance needs --n");
    c.need_seed();
    double d = c.o.delta < 0 ? 0.5 : c.o.delta;
    pi.e1 = random_int_set(c.o.n, c.o.beta1, c.o.seed);
    pi.e2 = random_int_set(c.o.n, c.o.beta2, c.o.seed + 1);
    pi.a = sample_product_subset(pi.e1, pi.e2, d, c.o.seed + 2);
    inputs["instance"] = "random";
    inputs["n"] = c.o.n;
    inputs["beta1"] = c.o.beta1;
    inputs["beta2"] = c.o.beta2;
    inputs["delta"] = d;
    return pi;
}

void run_uniformity_box(cli_ctx& c, std::istream& in) {
    auto pi = load_product(c, in);
    auto f = grid_fn::balanced(pi.a, product_grid_set(pi.e1, pi.e2));
    auto bn = box_norm(f, c.budget_or(1e6));
    auto& outs = c.rr.record["outputs"];
    outs["fourth_power"] = bn.fourth_power;
    outs["value"] = bn.value;
    outs["cross_checked"] = bn.cross_checked;
    outs["cross_gap"] = bn.cross_gap;
    add_check(c.rr, "box-norm-nonnegative", bn.fourth_power, 0.0, bn.fourth_power >= -1e-12);
    if (bn.cross_checked)
        add_check(c.rr, "box-norm-pair-reduction", bn.cross_gap,
                  1e-6 * (1.0 + std::fabs(bn.fourth_power)),
                  bn.cross_gap <= 1e-6 * (1.0 + std::fabs(bn.fourth_power)));
    std::ostringstream os;
    os << "box norm " << bn.value;
    c.rr.human.push_back(os.str());
}

void run_uniformity_rect(cli_ctx& c, std::istream& in) {
    auto pi = load_product(c, in);
    c.rr.record["inputs"]["alpha"] = c.o.alpha;
    auto r = rect_alpha_uniform(pi.a, pi.e1, pi.e2, c.o.alpha, c.budget_or(1e6));
    auto& outs = c.rr.record["outputs"];
    outs["measured"] = r.measured;
    outs["alpha"] = r.alpha;
    outs["verdict"] = r.verdict;
    outs["delta"] = r.delta;
    c.rr.human.push_back(std::string("rect_uniform ") + (r.verdict ? "true" : "false"));
}

void run_increment_green(cli_ctx& c, std::istream& in) {
    auto pi = load_product(c, in);
    c.rr.record["inputs"]["alpha"] = c.o.alpha;
    auto g = green_increment(pi.a, pi.e1, pi.e2, c.o.alpha, c.budget_or(2e6),
                             c.seed_or(1));
    auto& outs = c.rr.record["outputs"];
    outs["strategy"] = g.strategy;
    outs["f1_size"] = g.f1.size();
    outs["f2_size"] = g.f2.size();
    outs["delta"] = g.delta;
    outs["measured_alpha"] = g.measured;
    outs["new_density"] = g.new_density;
    outs["target"] = g.target;
    outs["nodes"] = g.nodes;
    add_check(c.rr, "green-density-target", g.new_density, g.target,
              g.new_density > g.target);
    add_check(c.rr, "green-size-floor-1", double(g.f1.size()), g.floor1,
              double(g.f1.size()) >= g.floor1);
    add_check(c.rr, "green-size-floor-2", double(g.f2.size()), g.floor2,
              double(g.f2.size()) >= g.floor2);
    std::ostringstream os;
    os << "density " << g.delta << " -> " << g.new_density << " via " << g.strategy;
    c.rr.human.push_back(os.str());
}

void run_increment_bourgain(cli_ctx& c) {
    if (c.o.n < 1) throw bad_input("increment bourgain needs --n (the host radius)");
    auto& inputs = c.rr.record["inputs"];
    inputs["n"] = c.o.n;
    inputs["alpha"] = c.o.alpha;
    inputs["kappa"] = c.o.kappa;
    inputs["relax"] = c.o.relax;
    bohr_spec spec{c.o.theta, c.o.eps, double(c.o.n), 0};
    auto lam = build_bohr(spec);
    int_set q;
    if (c.o.evens) {
        std::vector<std::int64_t> xs;
        for (auto x : lam.set().elems())
            if (x % 2 == 0) xs.push_back(x);
        q = int_set(std::move(xs));
        inputs["set"] = "evens";
    } else if (!c.o.set_path.empty()) {
        q = int_set_from_text(read_file(c.o.set_path));
        inputs["set"] = c.o.set_path;
    } else {
        throw bad_input("pass --evens or --set <file>");
    }
    auto b = bourgain_increment(q, lam, c.o.alpha, c.o.kappa, c.o.relax);
    auto& outs = c.rr.record["outputs"];
    outs["x0"] = b.x0;
    outs["variance"] = b.variance;
    outs["variance_ok"] = b.variance_ok;
    outs["kappa_ok"] = b.kappa_ok;
    outs["delta"] = b.delta;
    outs["alpha_measured"] = b.alpha_measured;
    outs["sup_lower"] = b.sup_lower;
    outs["sup_upper"] = b.sup_upper;
    outs["spec"] = spec_json(b.lam_prime);
    add_check(c.rr, "peak-witness-identity", b.witness_dev, b.sup_lower,
              std::fabs(b.witness_dev - b.sup_lower) <= 1e-6 * (1.0 + b.sup_lower));
    std::ostringstream os;
    os << "x0 " << b.x0 << " variance " << b.variance << " variance_ok "
       << (b.variance_ok ? "true" : "false");
    c.rr.human.push_back(os.str());
}

void run_increment_uniformize(cli_ctx& c) {
    if (c.o.n < 1) throw bad_input("increment uniformize needs --n (the host radius)");
    auto profile = c.resolve_profile();
    auto& inputs = c.rr.record["inputs"];
    inputs["n"] = c.o.n;
    bohr_spec spec{c.o.theta, c.o.eps, double(c.o.n), 0};
    auto lam = build_bohr(spec);
    int_set e1, e2;
    if (c.o.evens) {
        std::vector<std::int64_t> xs;
        for (auto x : lam.set().elems())
            if (x % 2 == 0) xs.push_back(x);
        e1 = int_set(xs);
        e2 = int_set(std::move(xs));
        inputs["instance"] = "evens";
    } else if (!c.o.e1_path.empty() && !c.o.e2_path.empty()) {
        e1 = int_set_from_text(read_file(c.o.e1_path));
        e2 = int_set_from_text(read_file(c.o.e2_path));
        inputs["instance"] = "files";
    } else {
        c.need_seed();
        e1 = sample_subset(lam.set().elems(), c.o.beta1, c.o.seed);
        e2 = sample_subset(lam.set().elems(), c.o.beta2, c.o.seed + 1);
        inputs["instance"] = "random";
        inputs["beta1"] = c.o.beta1;
        inputs["beta2"] = c.o.beta2;
    }
    auto u = uniformize(e1, e2, lam, {0, 0}, profile);
    auto& outs = c.rr.record["outputs"];
    outs["steps"] = u.trace.size();
    outs["spec"] = spec_json(u.lam_out);
    outs["t"] = {u.t[0], u.t[1]};
    outs["beta1"] = u.beta1;
    outs["beta2"] = u.beta2;
    outs["retention_ok"] = u.retention_ok;
    outs["already_uniform"] = u.already_uniform;
    auto steps = json::array();
    for (const auto& st : u.trace) {
        steps.push_back({{"step", st.step},
                         {"case", st.case_fired},
                         {"mechanism", st.mechanism},
                         {"gain", st.gain},
                         {"dim", st.dim},
                         {"eps", st.eps},
                         {"N", st.radius}});
        std::ostringstream os;
        os << "step " << st.step << " case " << st.case_fired << " " << st.mechanism;
        c.rr.human.push_back(os.str());
    }
    outs["trace"] = std::move(steps);
    c.rr.human.push_back(std::string("already_uniform ") +
                         (u.already_uniform ? "true" : "false"));
}

void run_increment_drive(cli_ctx& c, std::istream& in) {
    auto profile = c.resolve_profile();
    auto& inputs = c.rr.record["inputs"];
    grid_set a0;
    std::int64_t n = c.o.n;
    if (!c.o.set_path.empty() || c.o.use_stdin) {
        a0 = c.load_points(in);
        inputs["source"] = c.o.use_stdin ? "stdin" : c.o.set_path;
        if (n < 1) {
            for (const auto& p : a0.points())
                n = std::max({n, std::abs(p.x), std::abs(p.y)});
            if (n < 1) n = 1;
        }
    } else {
        if (c.o.n < 1) throw bad_input("random instance needs --n");
        c.need_seed();
        double d = c.o.delta < 0 ? 0.45 : c.o.delta;
        a0 = random_grid_set(c.o.n, d, c.o.seed);
        inputs["delta"] = d;
        inputs["source"] = "random";
    }
    inputs["n"] = n;
    auto dr = increment_driver(a0, n, profile, c.seed_or(1));
    auto& outs = c.rr.record["outputs"];
    const char* oc = dr.outcome == driver_outcome::corner_found        ? "corner_found"
                     : dr.outcome == driver_outcome::density_exceeded_one ? "density_exceeded_one"
                                                                          : "step_budget";
    outs["outcome"] = oc;
    outs["initial_density"] = dr.initial_density;
    outs["final_density"] = dr.final_density;
    outs["iterations"] = dr.iterations;
    outs["stop_reason"] = dr.stop_reason;
    if (dr.witness)
        outs["witness"] = {{"k", dr.witness->k}, {"m", dr.witness->m}, {"d", dr.witness->d}};
    if (dr.outcome == driver_outcome::corner_found)
        add_check(c.rr, "corner-witness-exact", dr.witness_verified ? 1.0 : 0.0, 1.0,
                  dr.witness_verified);
    add_check(c.rr, "density-monotone", dr.final_density, dr.initial_density,
              dr.final_density >= dr.initial_density - 1e-12);

    std::ostringstream trace_file;
    std::vector<double> xs, ys;
    for (const auto& rec : dr.trace) {
        json line = {{"step", rec.step},
                     {"case", rec.stage},
                     {"lemma", rec.mechanism.empty() ? rec.stage : rec.mechanism},
                     {"before", rec.before},
                     {"after", rec.after},
                     {"gain", rec.gain},
                     {"bohr", {{"dim", rec.dim}, {"eps", rec.eps}, {"N", rec.radius}}},
                     {"shift", {rec.s1, rec.s2}}};
        std::string s = line.dump();
        c.rr.human.push_back(s);
        trace_file << s << '\n';
        if (rec.after > 0) {
            xs.push_back(double(rec.step));
            ys.push_back(rec.after);
        }
    }
    c.rr.files["trace.jsonl"] = trace_file.str();
    if (xs.empty()) {
        xs = {0.0, 1.0};
        ys = {dr.initial_density, dr.final_density};
    }
    c.rr.files["density.csv"] = plot_csv("step", "density", xs, ys);
    c.rr.files["density.svg"] = plot_svg("step", "density", xs, ys);
    std::ostringstream os;
    os << "outcome " << oc << " density " << dr.initial_density << " -> " << dr.final_density
       << " iterations " << dr.iterations;
    c.rr.human.push_back(os.str());
}

void run_construct_behrend(cli_ctx& c) {
    if (c.o.n < 1) throw bad_input("construct behrend needs --n");
    c.rr.record["inputs"]["n"] = c.o.n;
    auto r = behrend_set(c.o.n);
    auto& outs = c.rr.record["outputs"];
    outs["size"] = r.set.size();
    outs["route"] = r.route;
    outs["shell_dim"] = r.shell_dim;
    outs["density"] = double(r.set.size()) / double(c.o.n);
    add_check(c.rr, "three-ap-free", is_three_term_ap_free(r.set) ? 0.0 : 1.0, 0.0,
              is_three_term_ap_free(r.set));
    c.rr.is_dump = true;
    c.rr.dump = int_set_to_text(r.set);
    c.rr.human.push_back("size " + std::to_string(r.set.size()) + " route " + r.route);
}

void run_construct_cornerfree(cli_ctx& c) {
    if (c.o.n < 1) throw bad_input("construct cornerfree needs --n");
    c.rr.record["inputs"]["n"] = c.o.n;
    auto b = behrend_set(c.o.n);
    auto lift = corner_free_from_ap_free(b.set, c.o.n);
    auto& outs = c.rr.record["outputs"];
    outs["size"] = lift.a.size();
    outs["shift"] = lift.shift;
    outs["density"] = double(lift.a.size()) / double(c.o.n * c.o.n);
    bool free = is_corner_free(lift.a, corner_mode::nonzero_d);
    add_check(c.rr, "corner-free-lift", free ? 0.0 : 1.0, 0.0, free);
    c.rr.is_dump = true;
    c.rr.dump = points_to_text(lift.a);
    c.rr.human.push_back("size " + std::to_string(lift.a.size()) + " shift " +
                         std::to_string(lift.shift));
}

void run_construct_random(cli_ctx& c) {
    if (c.o.n < 1) throw bad_input("construct random needs --n");
    if (c.o.delta < 0) throw bad_input("construct random needs --delta");
    c.need_seed();
    c.rr.record["inputs"]["n"] = c.o.n;
    c.rr.record["inputs"]["delta"] = c.o.delta;
    auto a = random_grid_set(c.o.n, c.o.delta, c.o.seed);
    auto& outs = c.rr.record["outputs"];
    outs["size"] = a.size();
    outs["density"] = double(a.size()) / double(c.o.n * c.o.n);
    c.rr.is_dump = true;
    c.rr.dump = points_to_text(a);
    c.rr.human.push_back("size " + std::to_string(a.size()));
}

void run_construct_product(cli_ctx& c) {
    if (c.o.n < 1) throw bad_input("construct product needs --n");
    c.need_seed();
    auto& inputs = c.rr.record["inputs"];
    inputs["n"] = c.o.n;
    inputs["beta1"] = c.o.beta1;
    inputs["beta2"] = c.o.beta2;
    if (c.trials_given) {
        inputs["trials"] = c.o.trials;
        auto st = product_corner_report(c.o.n, c.o.beta1, c.o.beta2, c.o.trials, c.o.seed);
        auto& outs = c.rr.record["outputs"];
        outs["mean"] = st.mean;
        outs["stderr"] = st.stderr_mean;
        outs["predicted_product"] = st.predicted_product;
        outs["predicted_cube"] = st.predicted_cube;
        outs["z_product"] = st.z_product;
        outs["z_cube"] = st.z_cube;
        add_check(c.rr, "product-density-scaling", std::fabs(st.mean - st.predicted_product),
                  5 * st.stderr_mean, std::fabs(st.z_product) <= 5.0);
        std::ostringstream os;
        os << "mean " << st.mean << " product prediction " << st.predicted_product << " z "
           << st.z_product;
        c.rr.human.push_back(os.str());
        return;
    }
    auto e1 = random_int_set(c.o.n, c.o.beta1, c.o.seed);
    auto e2 = random_int_set(c.o.n, c.o.beta2, c.o.seed + 1);
    auto p = product_grid_set(e1, e2);
    auto pc = product_corner_check(e1, e2);
    auto& outs = c.rr.record["outputs"];
    outs["e1_size"] = e1.size();
    outs["e2_size"] = e2.size();
    outs["size"] = p.size();
    outs["corners"] = pc.direct;
    add_check(c.rr, "product-corner-identity", double(pc.direct), double(pc.via_pair_counts),
              pc.equal);
    c.rr.is_dump = true;
    c.rr.dump = points_to_text(p);
    c.rr.human.push_back("sizes " + std::to_string(e1.size()) + " x " +
                         std::to_string(e2.size()));
}

void run_recur_simulate(cli_ctx& c) {
    auto sys = c.load_system();
    auto& inputs = c.rr.record["inputs"];
    inputs["points"] = sys.n;
    inputs["t"] = c.o.t;
    std::vector<std::size_t> y;
    if (!c.o.y_path.empty()) {
        for (auto v : int_set_from_text(read_file(c.o.y_path)).elems()) {
            if (v < 0) throw bad_input("recur simulate: negative index in --y");
            y.push_back(std::size_t(v));
        }
        inputs["y"] = c.o.y_path;
    } else {
        double d = c.o.y_density < 0 ? 0.4 : c.o.y_density;
        c.need_seed();
        std::mt19937_64 rng(c.o.seed);
        std::bernoulli_distribution coin(d);
        for (std::size_t x = 0; x < sys.n; ++x)
            if (coin(rng)) y.push_back(x);
        inputs["y_density"] = d;
    }
    auto res = simultaneous_return_set(sys, y, c.o.t);
    auto& outs = c.rr.record["outputs"];
    outs["mu_y"] = res.mu_y;
    outs["mu_yt"] = res.mu_yt;
    outs["yt_size"] = res.yt.size();
    outs["bound"] = res.bound_lt;
    outs["bound_exact"] = res.bound_exact;
    add_check(c.rr, "return-set-grid-bound", res.mu_yt, res.bound_lt, res.verdict);
    if (sys.s_map == sys.r_map)
        add_check(c.rr, "equal-maps-inverse-t", res.mu_yt, 1.0 / c.o.t,
                  res.mu_yt <= 1.0 / c.o.t + 1e-12);
    std::ostringstream os;
    os << "mu(Y(" << c.o.t << ")) = " << res.mu_yt << " bound " << res.bound_lt;
    c.rr.human.push_back(os.str());
}

void run_recur_constants(cli_ctx& c) {
    auto sys = c.load_system();
    c.rr.record["inputs"]["points"] = sys.n;
    c.rr.record["inputs"]["steps"] = c.o.steps;
    auto vals = recurrence_constants(sys, c.o.steps);
    auto summary = [](const std::vector<double>& v) {
        double lo = v.empty() ? 0 : v[0], hi = lo, mean = 0;
        for (double x : v) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
            mean += x;
        }
        if (!v.empty()) mean /= double(v.size());
        return json{{"min", lo}, {"mean", mean}, {"max", hi}};
    };
    auto& outs = c.rr.record["outputs"];
    outs["c_s"] = summary(vals.c_s);
    outs["c_r"] = summary(vals.c_r);
    outs["c_pair"] = summary(vals.c_pair);
    std::vector<double> sorted = vals.c_pair;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> xs(sorted.size());
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = double(i);
    c.rr.files["recurrence.csv"] = plot_csv("rank", "c_pair", xs, sorted);
    c.rr.files["recurrence.svg"] = plot_svg("rank", "c_pair", xs, sorted);
    std::ostringstream os;
    os << "c_pair min " << outs["c_pair"]["min"].get<double>() << " max "
       << outs["c_pair"]["max"].get<double>();
    c.rr.human.push_back(os.str());
}

void run_recur_cover(cli_ctx& c) {
    auto sys = c.load_system();
    auto& inputs = c.rr.record["inputs"];
    inputs["points"] = sys.n;
    inputs["eps"] = c.o.eps;
    std::vector<std::size_t> g;
    if (!c.o.g_path.empty()) {
        for (auto v : int_set_from_text(read_file(c.o.g_path)).elems()) {
            if (v < 0) throw bad_input("recur cover: negative index in --g");
            g.push_back(std::size_t(v));
        }
        inputs["g"] = c.o.g_path;
    } else {
        g.resize(sys.n);
        for (std::size_t i = 0; i < sys.n; ++i) g[i] = i;
    }
    auto cov = covering_number(g, sys, c.o.eps);
    auto& outs = c.rr.record["outputs"];
    outs["nets"] = cov.nets;
    outs["exact"] = cov.exact;
    outs["targets"] = g.size();
    std::ostringstream os;
    os << "nets " << cov.nets << (cov.exact ? " exact" : " greedy");
    c.rr.human.push_back(os.str());
}

// ---- plumbing -----------------------------------------------------------

void emit(run_result& rr, const std::string& out_dir, std::ostream& out, std::ostream& err,
          int& exit_code) {
    for (const auto& chk : rr.record["checks"])
        if (!chk.at("ok").get<bool>()) exit_code = std::max(exit_code, 2);
    for (const auto& line : rr.human) (rr.is_dump ? err : out) << line << '\n';
    if (rr.is_dump) out << rr.dump;
    std::string rec = rr.record.dump();
    if (!rr.is_dump) out << rec << '\n';
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        auto write = [&](const std::string& name, const std::string& content) {
            std::ofstream f(out_dir + "/" + name, std::ios::binary);
            f << content;
        };
        write("record.json", rec + "\n");
        char stamp[32] = {0};
        std::time_t now = std::time(nullptr);
        std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        write("record.meta.json", json{{"written_at", stamp}}.dump() + "\n");
        for (const auto& [name, content] : rr.files) write(name, content);
    }
}

std::map<std::string, std::string> read_config(const std::string& path) {
    std::map<std::string, std::string> kv;
    std::istringstream is(read_file(path));
    std::string line;
    while (std::getline(is, line)) {
        auto start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        auto pos = line.find('=');
        if (pos == std::string::npos)
            throw bad_input("config: expected key=value, got \"" + line + "\"");
        auto trim = [](std::string s) {
            auto a = s.find_first_not_of(" \t\r");
            auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, pos)), val = trim(line.substr(pos + 1));
        if (key.empty()) throw bad_input("config: empty key");
        kv[key] = val;
    }
    return kv;
}

} // namespace

int cli_run(std::vector<std::string> args, std::istream& in, std::ostream& out,
            std::ostream& err) {
    cli_ctx ctx;

    // config file: pulled out before parsing so file values become defaults
    std::string config_path;
    for (auto it = args.begin(); it != args.end();) {
        if (*it == "--config") {
            if (std::next(it) == args.end()) {
                err << "error: --config needs a file\n";
                return 4;
            }
            config_path = *std::next(it);
            it = args.erase(it, std::next(it, 2));
        } else if (it->rfind("--config=", 0) == 0) {
            config_path = it->substr(9);
            it = args.erase(it);
        } else {
            ++it;
        }
    }

    CLI::App app{"corner statistics, Bohr windows, uniformity tests, density increments,"
                 " extremal constructions, and recurrence simulation"};
    app.require_subcommand(1);
    auto& o = ctx.o;
    app.add_option("--profile", o.profile, "constant preset")
        ->check(CLI::IsMember({"paper", "relaxed"}));
    app.add_option("--const", o.consts, "override one profile constant, key=value");
    app.add_option("--out", o.out_dir, "directory for the result record and artifacts");
    auto* seed_opt = app.add_option("--seed", o.seed, "random seed");
    auto* trials_opt = app.add_option("--trials", o.trials, "number of seeded trials");
    app.add_option("--budget", o.budget, "node/candidate budget for searches");
    app.add_option("--n", o.n, "grid side, radius, or range bound");
    app.add_option("--delta", o.delta, "target density");
    app.add_option("--mode", o.mode, "corner difference mode")
        ->check(CLI::IsMember({"posd", "nzd"}));
    app.add_option("--set", o.set_path, "input set file");
    app.add_flag("--stdin", o.use_stdin, "read the input set from standard input");
    app.add_flag("--full", o.full, "use the full grid");
    app.add_flag("--checkerboard", o.checkerboard, "canonical parity instance");
    app.add_flag("--evens", o.evens, "even elements of the host window");
    app.add_option("--theta", o.theta, "frequency list")->delimiter(',');
    app.add_option("--eps", o.eps, "window width or covering radius");
    app.add_option("--offset", o.offset, "window center");
    app.add_option("--kappa", o.kappa, "regularity tolerance");
    app.add_option("--shrink", o.shrink, "attendant scale");
    app.add_option("--grid", o.grid, "regularity probe grid");
    app.add_option("--from", o.from, "first radius of a scan");
    app.add_option("--to", o.to, "last radius of a scan");
    app.add_option("--alpha", o.alpha, "uniformity level");
    app.add_option("--relax", o.relax, "variance floor fraction");
    app.add_option("--beta1", o.beta1, "first factor density");
    app.add_option("--beta2", o.beta2, "second factor density");
    app.add_option("--e1", o.e1_path, "first factor set file");
    app.add_option("--e2", o.e2_path, "second factor set file");
    app.add_option("--system", o.system_path, "finite system JSON file");
    app.add_option("--torus", o.torus, "torus system m,a1,a2,b1,b2")->delimiter(',');
    app.add_option("--y", o.y_path, "target set of point indices");
    app.add_option("--y-density", o.y_density, "random target density");
    app.add_option("--t", o.t, "return horizon");
    app.add_option("--steps", o.steps, "recurrence horizon");
    app.add_option("--g", o.g_path, "covering target indices");
    app.set_help_flag("--help,-h", "print usage");

    std::vector<std::pair<std::string, std::string>> groups = {
        {"corners", "count max free"},       {"bohr", "build regular attendant profile"},
        {"uniformity", "report box rect"},   {"increment", "green bourgain uniformize drive"},
        {"construct", "behrend cornerfree random product"}, {"recur", "simulate constants cover"}};
    for (const auto& [name, leaves] : groups) {
        auto* sub = app.add_subcommand(name);
        sub->require_subcommand(1);
        sub->fallthrough();
        std::istringstream ls(leaves);
        std::string leaf;
        while (ls >> leaf) sub->add_subcommand(leaf)->fallthrough();
    }

    // inject config values for options the command line left untouched
    if (!config_path.empty()) {
        std::set<std::string> known;
        for (const auto* opt : app.get_options())
            for (const auto& ln : opt->get_lnames()) known.insert(ln);
        std::map<std::string, std::string> kv;
        try {
            kv = read_config(config_path);
        } catch (const bad_input& e) {
            err << "error: " << e.what() << '\n';
            return 4;
        }
        for (const auto& [key, val] : kv) {
            if (!known.count(key)) {
                err << "error: config: unknown key \"" << key << "\"\n";
                return 4;
            }
            bool given = false;
            for (const auto& a : args)
                if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) given = true;
            if (!given) args.push_back("--" + key + "=" + val);
        }
    }

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 4;
    }
    ctx.seed_given = seed_opt->count() > 0;
    ctx.trials_given = trials_opt->count() > 0;

    auto matched = app.get_subcommands();
    if (matched.empty()) {
        err << "error: a subcommand is required\n";
        return 4;
    }
    auto* grp = matched.front();
    auto leaf_list = grp->get_subcommands();
    if (leaf_list.empty()) {
        err << "error: " << grp->get_name() << " needs an operation\n";
        return 4;
    }
    std::string cmd = grp->get_name() + " " + leaf_list.front()->get_name();
    ctx.rr.record["command"] = cmd;
    if (ctx.seed_given) ctx.rr.record["seed"] = o.seed;

    int exit_code = 0;
    try {
        // constants are validated up front so a typo fails fast even for
        // commands that never touch the profile
        static const char* const profile_keys[] = {
            "alpha", "alpha0",    "alpha1",         "sigma",         "tau",
            "eta",   "kappa",     "shrink",         "gain",          "size_frac",
            "unif_beta_frac",     "density_floor",  "step_budget",   "search_budget"};
        for (const auto& kv : o.consts) {
            std::string key = kv.substr(0, kv.find('='));
            bool known = false;
            for (const char* k : profile_keys)
                if (key == k) known = true;
            if (!known) throw bad_input("unknown constant: " + key);
        }
        if (cmd == "corners count") run_corners_count(ctx, in);
        else if (cmd == "corners max") run_corners_max(ctx);
        else if (cmd == "corners free") run_corners_free(ctx, in);
        else if (cmd == "bohr build") run_bohr_build(ctx);
        else if (cmd == "bohr regular") run_bohr_regular(ctx);
        else if (cmd == "bohr attendant") run_bohr_attendant(ctx);
        else if (cmd == "bohr profile") run_bohr_profile(ctx);
        else if (cmd == "uniformity report") run_uniformity_report(ctx);
        else if (cmd == "uniformity box") run_uniformity_box(ctx, in);
        else if (cmd == "uniformity rect") run_uniformity_rect(ctx, in);
        else if (cmd == "increment green") run_increment_green(ctx, in);
        else if (cmd == "increment bourgain") run_increment_bourgain(ctx);
        else if (cmd == "increment uniformize") run_increment_uniformize(ctx);
        else if (cmd == "increment drive") run_increment_drive(ctx, in);
        else if (cmd == "construct behrend") run_construct_behrend(ctx);
        else if (cmd == "construct cornerfree") run_construct_cornerfree(ctx);
        else if (cmd == "construct random") run_construct_random(ctx);
        else if (cmd == "construct product") run_construct_product(ctx);
        else if (cmd == "recur simulate") run_recur_simulate(ctx);
        else if (cmd == "recur constants") run_recur_constants(ctx);
        else if (cmd == "recur cover") run_recur_cover(ctx);
        else {
            err << "error: unknown command " << cmd << '\n';
            return 4;
        }
    } catch (const not_found& e) {
        ctx.rr.record["outputs"] = {{"outcome", "not_found"}, {"message", e.what()}};
        ctx.rr.human.push_back(std::string("no result: ") + e.what());
    } catch (const not_nonuniform& e) {
        ctx.rr.record["outputs"] = {{"outcome", "not_nonuniform"}, {"message", e.what()}};
        ctx.rr.human.push_back(std::string("no result: ") + e.what());
    } catch (const no_large_coefficient& e) {
        ctx.rr.record["outputs"] = {{"outcome", "no_large_coefficient"}, {"message", e.what()}};
        ctx.rr.human.push_back(std::string("no result: ") + e.what());
    } catch (const no_increment_found& e) {
        ctx.rr.record["outputs"] = {{"outcome", "no_increment_found"}, {"message", e.what()}};
        ctx.rr.human.push_back(std::string("no result: ") + e.what());
    } catch (const step_budget_exceeded& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const search_budget_exceeded& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const budget_exceeded& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const bad_input& e) {
        err << "error: " << e.what() << '\n';
        return 4;
    } catch (const precondition_violated& e) {
        err << "error: " << e.what() << '\n';
        return 4;
    } catch (const modulus_too_small& e) {
        err << "error: " << e.what() << '\n';
        return 4;
    } catch (const infeasible_profile& e) {
        err << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }

    emit(ctx.rr, o.out_dir, out, err, exit_code);
    return exit_code;
}

} // namespace corners
