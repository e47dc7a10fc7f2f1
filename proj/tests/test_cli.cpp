#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "corners/cli.hpp"
#include "corners/io.hpp"
#include "corners/recurrence.hpp"

using namespace corners;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct cli_result {
    int code = -1;
    std::string out, err;
};

cli_result run(std::vector<std::string> args, const std::string& stdin_text = "") {
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    cli_result r;
    r.code = cli_run(std::move(args), in, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> ls;
    std::istringstream is(text);
    std::string l;
    while (std::getline(is, l)) ls.push_back(l);
    return ls;
}

// the result record is the last stdout line of every non-dump command
json record_of(const cli_result& r) {
    auto ls = lines_of(r.out);
    REQUIRE(!ls.empty());
    return json::parse(ls.back());
}

std::string write_temp(const std::string& name, const std::string& content) {
    auto path = (fs::temp_directory_path() / name).string();
    std::ofstream f(path, std::ios::binary);
    f << content;
    return path;
}

} // namespace

TEST_CASE("extremal search reports the exact three by three answer") {
    auto r = run({"corners", "max", "--n", "3"});
    CHECK(r.code == 0);
    CHECK(r.out.find("size 7") != std::string::npos);
    CHECK(r.out.find("L = 7/9") != std::string::npos);
    CHECK(r.out.find("witness") != std::string::npos);
    auto rec = record_of(r);
    CHECK(rec["command"] == "corners max");
    CHECK(rec["outputs"]["size"] == 7);
    CHECK(rec["outputs"]["density"] == "7/9");
    CHECK(rec["version"] == std::string(artifact_version));
    CHECK(rec["seed"].is_null());
    for (const auto& chk : rec["checks"]) CHECK(chk["ok"] == true);
}

TEST_CASE("full grid count prints the closed form value") {
    auto r = run({"corners", "count", "--n", "3", "--full"});
    CHECK(r.code == 0);
    CHECK(lines_of(r.out).front() == "5");
    auto rec = record_of(r);
    CHECK(rec["outputs"]["count"] == 5);
    CHECK(rec["checks"][0]["ref"] == "corner-count-closed-form");
    CHECK(rec["checks"][0]["ok"] == true);

    auto nz = run({"corners", "count", "--n", "3", "--full", "--mode", "nzd"});
    CHECK(lines_of(nz.out).front() == "10");
    CHECK(record_of(nz)["checks"][0]["ok"] == true);
}

TEST_CASE("constructed corner-free sets pipe into the corner scan") {
    auto made = run({"construct", "cornerfree", "--n", "9"});
    CHECK(made.code == 0);
    // the dump is pure data: every stdout line is an "x y" pair
    for (const auto& l : lines_of(made.out)) {
        std::istringstream is(l);
        long long x, y;
        std::string rest;
        CHECK(bool(is >> x >> y));
        CHECK_FALSE(bool(is >> rest));
    }
    CHECK(made.err.find("size") != std::string::npos);

    auto scan = run({"corners", "free", "--stdin", "--mode", "nzd"}, made.out);
    CHECK(scan.code == 0);
    CHECK(scan.out.find("corner_free true") != std::string::npos);
    CHECK(record_of(scan)["outputs"]["corner_free"] == true);
}

TEST_CASE("progression-free generator dumps plain decimals") {
    auto r = run({"construct", "behrend", "--n", "9"});
    CHECK(r.code == 0);
    for (const auto& l : lines_of(r.out)) {
        std::istringstream is(l);
        long long x;
        std::string rest;
        CHECK(bool(is >> x));
        CHECK_FALSE(bool(is >> rest));
    }
    CHECK(r.err.find("size") != std::string::npos);
}

TEST_CASE("identical invocations produce byte-identical records") {
    auto a = run({"corners", "max", "--n", "3"});
    auto b = run({"corners", "max", "--n", "3"});
    CHECK(lines_of(a.out).back() == lines_of(b.out).back());

    auto c = run({"construct", "random", "--n", "8", "--delta", "0.4", "--seed", "5"});
    auto d = run({"construct", "random", "--n", "8", "--delta", "0.4", "--seed", "5"});
    CHECK(c.code == 0);
    CHECK(c.out == d.out);
}

TEST_CASE("usage problems exit with code four") {
    CHECK(run({"corners", "count"}).code == 4);                    // no source chosen
    CHECK(run({"corners"}).code == 4);                             // missing operation
    CHECK(run({"--bogus"}).code == 4);                             // unknown flag
    CHECK(run({"frobnicate"}).code == 4);                          // unknown command
    auto r = run({"construct", "random", "--n", "6", "--delta", "0.5"});
    CHECK(r.code == 4);                                            // stochastic without seed
    CHECK(r.err.find("--seed") != std::string::npos);
    CHECK(run({"corners", "max"}).code == 4);                      // missing --n
    CHECK(run({"corners", "max", "--n", "3", "--mode", "weird"}).code == 4);
}

TEST_CASE("search budgets exit with code three") {
    auto r = run({"corners", "max", "--n", "6", "--budget", "100"});
    CHECK(r.code == 3);
    CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("window build dumps elements and checks the size floor") {
    auto r = run({"bohr", "build", "--n", "20"});
    CHECK(r.code == 0);
    auto ls = lines_of(r.out);
    CHECK(ls.size() == 41);
    CHECK(ls.front() == "-20");
    CHECK(ls.back() == "20");
    CHECK(r.err.find("size 41") != std::string::npos);
}

TEST_CASE("regular window search lands on the stable radius") {
    auto r = run({"bohr", "regular", "--n", "20", "--kappa", "0.25"});
    CHECK(r.code == 0);
    auto rec = record_of(r);
    CHECK(rec["outputs"]["radius1"] == 16.0);
    CHECK(rec["checks"][0]["ref"] == "regularity-band");
    CHECK(rec["checks"][0]["ok"] == true);

    // the scan below the smallest stable radius reports the miss as data
    auto miss = run({"bohr", "regular", "--n", "4", "--kappa", "0.25"});
    CHECK(miss.code == 0);
    CHECK(record_of(miss)["outputs"]["outcome"] == "not_found");
}

TEST_CASE("attendant scaling reports the shrunken window") {
    auto r = run({"bohr", "attendant", "--n", "20", "--shrink", "0.5"});
    CHECK(r.code == 0);
    auto rec = record_of(r);
    CHECK(rec["outputs"]["att_size"] == 17);
    CHECK(rec["outputs"]["spec"]["N"] == 8.0);
    CHECK(rec["checks"][0]["ok"] == true);
}

TEST_CASE("radius scan separates stable from unstable windows") {
    auto r = run({"bohr", "profile", "--from", "4", "--to", "12", "--kappa", "0.25"});
    CHECK(r.code == 0);
    auto rows = record_of(r)["outputs"]["rows"];
    REQUIRE(rows.size() == 9);
    for (const auto& row : rows) {
        std::int64_t radius = row["radius"].get<std::int64_t>();
        CHECK(row["regular"] == (radius % 4 == 0));
    }
}

TEST_CASE("parity instance walks the box increment pipeline") {
    auto box = run({"uniformity", "box", "--checkerboard"});
    CHECK(box.code == 0);
    CHECK(record_of(box)["outputs"]["value"].get<double>() == doctest::Approx(8.0).epsilon(1e-9));

    auto tight = run({"uniformity", "rect", "--checkerboard", "--alpha", "0.05"});
    CHECK(tight.code == 0);
    CHECK(record_of(tight)["outputs"]["verdict"] == false);
    auto loose = run({"uniformity", "rect", "--checkerboard", "--alpha", "0.07"});
    CHECK(record_of(loose)["outputs"]["verdict"] == true);

    auto green = run({"increment", "green", "--checkerboard", "--alpha", "0.05"});
    CHECK(green.code == 0);
    auto rec = record_of(green);
    CHECK(rec["outputs"]["strategy"] == "heavy_columns");
    CHECK(rec["outputs"]["new_density"].get<double>() ==
          doctest::Approx(8.0 / 15).epsilon(1e-9));
    for (const auto& chk : rec["checks"]) CHECK(chk["ok"] == true);
}

TEST_CASE("even residues drive the translate variance increment") {
    auto r = run({"increment", "bourgain", "--evens", "--n", "60", "--alpha", "0.4"});
    CHECK(r.code == 0);
    auto rec = record_of(r);
    CHECK(rec["outputs"]["x0"].get<double>() == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(rec["outputs"]["variance_ok"] == true);
    CHECK(rec["checks"][0]["ref"] == "peak-witness-identity");
    CHECK(rec["checks"][0]["ok"] == true);
}

TEST_CASE("driver emits the step trace and the verified witness") {
    auto r = run({"increment", "drive", "--stdin", "--n", "5"}, "0 0\n3 0\n0 3\n");
    CHECK(r.code == 0);
    auto ls = lines_of(r.out);
    REQUIRE(ls.size() >= 3);
    auto rec = json::parse(ls.back());
    CHECK(rec["outputs"]["outcome"] == "corner_found");
    CHECK(rec["outputs"]["witness"]["d"] == 3);
    for (const auto& chk : rec["checks"]) CHECK(chk["ok"] == true);

    // every line between the summary and the record is a trace step with the
    // fixed key set
    bool saw_scan = false;
    for (std::size_t i = 0; i + 2 < ls.size(); ++i) {
        auto line = json::parse(ls[i]);
        CHECK(line.size() == 8);
        for (const char* key : {"step", "case", "lemma", "before", "after", "gain", "bohr",
                                "shift"})
            CHECK(line.contains(key));
        CHECK(line["bohr"].size() == 3);
        for (const char* key : {"dim", "eps", "N"}) CHECK(line["bohr"].contains(key));
        if (line["case"] == "corner_scan") saw_scan = true;
    }
    CHECK(saw_scan);
}

TEST_CASE("driver runs a full uniformize and increment round") {
    std::ostringstream pts;
    for (int x = -20; x <= 20; ++x) pts << x << " 3\n";
    auto r = run({"increment", "drive", "--stdin", "--n", "20"}, pts.str());
    CHECK(r.code == 0);
    auto rec = record_of(r);
    CHECK(rec["outputs"]["outcome"] == "step_budget");
    CHECK(rec["outputs"]["final_density"].get<double>() >
          rec["outputs"]["initial_density"].get<double>());
    CHECK(rec["outputs"]["iterations"].get<int>() >= 1);
}

TEST_CASE("uniformize walks the parity descent end to end") {
    auto r = run({"increment", "uniformize", "--n", "60", "--evens"});
    CHECK(r.code == 0);
    auto rec = record_of(r);
    CHECK(rec["outputs"]["already_uniform"] == false);
    CHECK(rec["outputs"]["spec"]["dim"] == 1);
    CHECK(rec["outputs"]["spec"]["theta"][0].get<double>() ==
          doctest::Approx(0.5).epsilon(1e-9));
    CHECK(rec["outputs"]["retention_ok"] == true);
    auto trace = rec["outputs"]["trace"];
    REQUIRE(!trace.empty());
    CHECK(trace[0]["mechanism"] == "fourier_peak_refine");

    // a full window is uniform on arrival
    std::ostringstream full;
    for (int x = -40; x <= 40; ++x) full << x << '\n';
    auto path = write_temp("cli_full_win.txt", full.str());
    auto flat = run({"increment", "uniformize", "--n", "40", "--e1", path, "--e2", path});
    CHECK(flat.code == 0);
    auto flat_rec = record_of(flat);
    CHECK(flat_rec["outputs"]["already_uniform"] == true);
    CHECK(flat_rec["outputs"]["steps"] == 0);
}

TEST_CASE("uniformity report renders clause verdicts and a density plot") {
    auto dir = (fs::temp_directory_path() / "cli_report_out").string();
    fs::remove_all(dir);
    auto r = run({"uniformity", "report", "--n", "26", "--delta", "0.5", "--seed", "2",
                  "--alpha", "0.5", "--out", dir});
    CHECK(r.code == 0);
    auto rec = record_of(r);
    CHECK(rec["outputs"].contains("uniform"));
    CHECK(rec["outputs"]["translate_clause"].contains("ok"));
    CHECK(fs::exists(dir + "/record.json"));
    CHECK(fs::exists(dir + "/record.meta.json"));
    CHECK(fs::exists(dir + "/local_density.csv"));
    CHECK(fs::exists(dir + "/local_density.svg"));

    std::ifstream f(dir + "/record.json");
    std::string file_line;
    std::getline(f, file_line);
    CHECK(file_line == lines_of(r.out).back());
    CHECK(file_line.find("written_at") == std::string::npos);

    std::ifstream meta(dir + "/record.meta.json");
    std::string meta_line;
    std::getline(meta, meta_line);
    CHECK(meta_line.find("written_at") != std::string::npos);
}

TEST_CASE("config files fill in flags without overriding them") {
    auto cfg = write_temp("cli_cfg.txt", "# scan size\nn = 3\n");
    auto from_file = run({"corners", "max", "--config", cfg});
    CHECK(from_file.code == 0);
    CHECK(record_of(from_file)["outputs"]["size"] == 7);

    auto overridden = run({"corners", "max", "--config", cfg, "--n", "2"});
    CHECK(record_of(overridden)["outputs"]["size"] == 3);

    auto bad = write_temp("cli_cfg_bad.txt", "frobnicate = 1\n");
    CHECK(run({"corners", "max", "--config", bad}).code == 4);

    CHECK(run({"corners", "max", "--n", "3", "--const", "zeta=1"}).code == 4);
}

TEST_CASE("recurrence simulation certifies the grid bound") {
    auto r = run({"recur", "simulate", "--torus", "7,1,0,0,1", "--y-density", "0.3",
                  "--seed", "3", "--t", "2"});
    CHECK(r.code == 0);
    auto rec = record_of(r);
    CHECK(rec["outputs"]["bound"] == 0.75);
    CHECK(rec["checks"][0]["ref"] == "return-set-grid-bound");
    CHECK(rec["checks"][0]["ok"] == true);

    auto same = run({"recur", "simulate", "--torus", "6,1,2,1,2", "--y-density", "0.5",
                     "--seed", "4", "--t", "3"});
    CHECK(same.code == 0);
    bool saw_inverse_t = false;
    auto same_rec = record_of(same);
    for (const auto& chk : same_rec["checks"]) {
        if (chk["ref"] == "equal-maps-inverse-t") saw_inverse_t = true;
        CHECK(chk["ok"] == true);
    }
    CHECK(saw_inverse_t);
}

TEST_CASE("system files feed the recurrence commands") {
    auto sys = finite_system::torus_translations(4, 1, 0, 0, 1);
    auto path = write_temp("cli_sys.json", finite_system_to_json(sys));

    auto consts = run({"recur", "constants", "--system", path, "--steps", "3"});
    CHECK(consts.code == 0);
    CHECK(record_of(consts)["outputs"]["c_pair"].contains("mean"));

    // eps 0.3 reaches one step around the ring in both axes, so each center
    // claims a three by three block; two blocks always leave a row and column
    // meeting point open while (0,0),(2,2),(1,1) close the torus
    auto cover = run({"recur", "cover", "--system", path, "--eps", "0.3"});
    CHECK(cover.code == 0);
    auto rec = record_of(cover);
    CHECK(rec["outputs"]["nets"] == 3);
    CHECK(rec["outputs"]["exact"] == true);
}
