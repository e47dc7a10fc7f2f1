#include "corners/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace corners {

namespace {

using nlohmann::json;

json parse(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw bad_input(std::string(what) + ": malformed JSON");
    return j;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string points_to_text(const grid_set& s) {
    std::ostringstream os;
    for (const auto& p : s.points()) os << p.x << ' ' << p.y << '\n';
    return os.str();
}

grid_set points_from_text(const std::string& text) {
    std::istringstream is(text);
    std::vector<grid_point> pts;
    std::string line;
    while (std::getline(is, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        grid_point p;
        if (!(ls >> p.x >> p.y)) throw bad_input("points_from_text: expected \"x y\" lines");
        std::string rest;
        if (ls >> rest) throw bad_input("points_from_text: trailing tokens on a line");
        pts.push_back(p);
    }
    return grid_set(std::move(pts));
}

std::string grid_set_to_json(const grid_set& s) {
    json j;
    const auto& w = s.window();
    j["window"] = {w.x_lo, w.x_hi, w.y_lo, w.y_hi};
    auto pts = json::array();
    for (const auto& p : s.points()) pts.push_back({p.x, p.y});
    j["points"] = std::move(pts);
    return j.dump();
}

grid_set grid_set_from_json(const std::string& text) {
    json j = parse(text, "grid_set_from_json");
    try {
        auto win = j.at("window");
        if (!win.is_array() || win.size() != 4)
            throw bad_input("grid_set_from_json: window must have four bounds");
        grid_window w{win[0].get<std::int64_t>(), win[1].get<std::int64_t>(),
                      win[2].get<std::int64_t>(), win[3].get<std::int64_t>()};
        std::vector<grid_point> pts;
        for (const auto& e : j.at("points")) {
            if (!e.is_array() || e.size() != 2)
                throw bad_input("grid_set_from_json: points must be [x, y] pairs");
            pts.push_back({e[0].get<std::int64_t>(), e[1].get<std::int64_t>()});
        }
        return grid_set(std::move(pts), w);
    } catch (const json::exception&) {
        throw bad_input("grid_set_from_json: missing or mistyped field");
    }
}

std::string int_set_to_text(const int_set& s) {
    std::ostringstream os;
    for (auto x : s.elems()) os << x << '\n';
    return os.str();
}

int_set int_set_from_text(const std::string& text) {
    std::istringstream is(text);
    std::vector<std::int64_t> xs;
    std::string line;
    while (std::getline(is, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        std::int64_t x;
        if (!(ls >> x)) throw bad_input("int_set_from_text: expected one decimal per line");
        std::string rest;
        if (ls >> rest) throw bad_input("int_set_from_text: trailing tokens on a line");
        xs.push_back(x);
    }
    return int_set(std::move(xs));
}

std::string bohr_spec_to_json(const bohr_spec& spec) {
    json j;
    j["theta"] = spec.theta;
    j["eps"] = spec.eps;
    j["N"] = spec.radius;
    j["offset"] = spec.offset;
    return j.dump();
}

bohr_spec bohr_spec_from_json(const std::string& text) {
    json j = parse(text, "bohr_spec_from_json");
    try {
        bohr_spec spec;
        spec.theta = j.at("theta").get<std::vector<double>>();
        spec.eps = j.at("eps").get<double>();
        spec.radius = j.at("N").get<double>();
        spec.offset = j.value("offset", std::int64_t(0));
        return spec;
    } catch (const json::exception&) {
        throw bad_input("bohr_spec_from_json: missing or mistyped field");
    }
}

std::string spectrum_to_json(const spectrum& sp) {
    json j;
    j["modulus"] = sp.modulus;
    auto coef = json::array();
    for (const auto& c : sp.coef) coef.push_back({c.real(), c.imag()});
    j["coef"] = std::move(coef);
    return j.dump();
}

std::string supp_fn_to_csv(const supp_fn& f) {
    std::ostringstream os;
    os << "x,re,im\n";
    for (const auto& [x, v] : f.entries())
        os << x << ',' << fmt(v.real()) << ',' << fmt(v.imag()) << '\n';
    return os.str();
}

std::string grid_fn_to_csv(const grid_fn& f) {
    std::ostringstream os;
    os << "x,y,re,im\n";
    for (const auto& [p, v] : f.entries())
        os << p.x << ',' << p.y << ',' << fmt(v.real()) << ',' << fmt(v.imag()) << '\n';
    return os.str();
}

std::string finite_system_to_json(const finite_system& sys) {
    json j;
    j["points"] = sys.n;
    j["metric"] = sys.dist;
    j["S"] = sys.s_map;
    j["R"] = sys.r_map;
    j["mu"] = sys.mu;
    return j.dump();
}

finite_system finite_system_from_json(const std::string& text) {
    json j = parse(text, "finite_system_from_json");
    try {
        finite_system sys;
        sys.n = j.at("points").get<std::size_t>();
        sys.dist = j.at("metric").get<std::vector<std::vector<double>>>();
        sys.s_map = j.at("S").get<std::vector<std::size_t>>();
        sys.r_map = j.at("R").get<std::vector<std::size_t>>();
        sys.mu = j.at("mu").get<std::vector<double>>();
        sys.validate();
        return sys;
    } catch (const json::exception&) {
        throw bad_input("finite_system_from_json: missing or mistyped field");
    }
}

std::string plot_csv(const std::string& x_label, const std::string& y_label,
                     const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw bad_input("plot_csv: column lengths differ");
    std::ostringstream os;
    os << x_label << ',' << y_label << '\n';
    for (std::size_t i = 0; i < xs.size(); ++i) os << fmt(xs[i]) << ',' << fmt(ys[i]) << '\n';
    return os.str();
}

std::string plot_svg(const std::string& x_label, const std::string& y_label,
                     const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw bad_input("plot_svg: column lengths differ");
    const double w = 640, h = 400, ml = 60, mr = 20, mt = 20, mb = 45;
    double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
    if (!xs.empty()) {
        x_lo = x_hi = xs[0];
        y_lo = y_hi = ys[0];
        for (std::size_t i = 1; i < xs.size(); ++i) {
            x_lo = std::min(x_lo, xs[i]);
            x_hi = std::max(x_hi, xs[i]);
            y_lo = std::min(y_lo, ys[i]);
            y_hi = std::max(y_hi, ys[i]);
        }
    }
    if (x_hi == x_lo) x_hi = x_lo + 1;
    if (y_hi == y_lo) y_hi = y_lo + 1;
    auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * (w - ml - mr); };
    auto py = [&](double y) { return h - mb - (y - y_lo) / (y_hi - y_lo) * (h - mt - mb); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
    os << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
       << h - mb << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 8
       << "\" text-anchor=\"middle\" font-size=\"14\">" << x_label << "</text>\n";
    os << "<text x=\"14\" y=\"" << (mt + h - mb) / 2
       << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 14 "
       << (mt + h - mb) / 2 << ")\">" << y_label << "</text>\n";
    os << "<text x=\"" << ml << "\" y=\"" << h - mb + 16 << "\" font-size=\"11\">" << fmt(x_lo)
       << "</text>\n";
    os << "<text x=\"" << w - mr << "\" y=\"" << h - mb + 16
       << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(x_hi) << "</text>\n";
    os << "<text x=\"" << ml - 4 << "\" y=\"" << h - mb
       << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(y_lo) << "</text>\n";
    os << "<text x=\"" << ml - 4 << "\" y=\"" << mt + 6
       << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(y_hi) << "</text>\n";
    if (!xs.empty()) {
        os << "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i) os << ' ';
            os << fmt(px(xs[i])) << ',' << fmt(py(ys[i]));
        }
        os << "\"/>\n";
        for (std::size_t i = 0; i < xs.size(); ++i)
            os << "<circle cx=\"" << fmt(px(xs[i])) << "\" cy=\"" << fmt(py(ys[i]))
               << "\" r=\"2.5\" fill=\"#1f6fb2\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace corners
