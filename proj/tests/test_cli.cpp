#include <catch2/catch_amalgamated.hpp>

#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

using Json = nlohmann::json;

std::string fx(const std::string& name) { return std::string(TROP_FIXTURES) + "/" + name; }

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::filesystem::path scratch_file(const std::string& stem) {
    static int counter = 0;
    return std::filesystem::temp_directory_path() /
           ("trop_cli_" + stem + "_" + std::to_string(++counter));
}

std::string write_scratch(const std::string& stem, const std::string& content) {
    auto p = scratch_file(stem);
    std::ofstream(p, std::ios::binary) << content;
    return p.string();
}

struct CliRun {
    int code = -1;
    std::string stdout_text;
    std::string report_text;
    Json report;
};

// Spawn the installed binary, capture stdout+stderr, and collect the JSON
// report written through --out.
CliRun run(const std::string& args, bool want_report = true) {
    auto cap = scratch_file("stdout");
    auto outp = scratch_file("report");
    std::string cmd = std::string(TROP_CLI_BIN) + " " + args;
    if (want_report) cmd += " --out " + outp.string();
    cmd += " > " + cap.string() + " 2>&1";
    int rc = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.stdout_text = slurp(cap);
    std::filesystem::remove(cap);
    if (want_report && std::filesystem::exists(outp)) {
        r.report_text = slurp(outp);
        r.report = Json::parse(r.report_text, nullptr, false);
        std::filesystem::remove(outp);
    }
    return r;
}

const Json& result_named(const Json& report, const std::string& name) {
    for (const auto& r : report.at("results"))
        if (r.at("name") == name) return r;
    throw std::runtime_error("no result named " + name);
}

} // namespace

TEST_CASE("balance verdicts and exit codes") {
    auto line = run("balance " + fx("tropical_line.json"));
    CHECK(line.code == 0);
    CHECK(line.report.at("exit_code") == 0);
    CHECK(line.report.at("boundary_faces") == Json::array());
    REQUIRE(line.report.at("results").size() == 1);
    const Json& face = line.report.at("results")[0];
    CHECK(face.at("status") == "pass");
    CHECK(face.at("certificate") == Json::array({0, 0}));

    auto half = run("balance " + fx("half_line.json"));
    CHECK(half.code == 1);
    CHECK(half.report.at("exit_code") == 1);
    CHECK(half.report.at("boundary_faces").size() == 1);
    CHECK(half.report.at("results")[0].at("status") == "fail");
    CHECK(half.report.at("results")[0].at("certificate") == Json::array({1, 0}));

    auto rim = run("balance " + fx("square_boundary.json"));
    CHECK(rim.code == 1);
    CHECK(rim.report.at("boundary_faces").size() == 4);

    std::string bad = write_scratch("bad", "{\"oops\": ");
    CHECK(run("balance " + bad, false).code == 2);
    std::filesystem::remove(bad);
    CHECK(run("balance " + fx("no_such_file.json"), false).code == 2);
}

TEST_CASE("balance rejects inconsistent weighted complexes") {
    std::string mixed = write_scratch("mixed", R"({
        "ambient_dim": 1,
        "cells": [{"vertices": [[0], [1]]}, {"vertices": [[2]]}],
        "weights": {"0": 1, "1": 1}
    })");
    CHECK(run("balance " + mixed, false).code == 2);
    std::filesystem::remove(mixed);

    std::string dangling = write_scratch("dangling", R"({
        "ambient_dim": 1,
        "cells": [{"vertices": [[0], [1]]}],
        "weights": {"3": 1}
    })");
    CHECK(run("balance " + dangling, false).code == 2);
    std::filesystem::remove(dangling);
}

TEST_CASE("divisor command on the three standard examples") {
    auto hinge = run("divisor " + fx("real_line.json") + " " + fx("hinge_fn.json"));
    CHECK(hinge.code == 0);
    const Json& div = hinge.report.at("divisor");
    CHECK(div.at("dim") == 0);
    REQUIRE(div.at("cells").size() == 1);
    CHECK(div.at("cells")[0].at("vertices") == Json::array({Json::array({"0"})}));
    CHECK(div.at("weights").at("0") == 1);

    auto affine = run("divisor " + fx("real_line.json") + " " + fx("affine_fn.json"));
    CHECK(affine.code == 0);
    CHECK(affine.report.at("divisor").at("cells") == Json::array());
    CHECK(result_named(affine.report, "divisor").at("supported") == false);

    auto trop = run("divisor " + fx("tropical_line.json") + " " + fx("tropical_line_fn.json"));
    CHECK(trop.code == 0);
    const Json& tdiv = trop.report.at("divisor");
    REQUIRE(tdiv.at("cells").size() == 1);
    CHECK(tdiv.at("cells")[0].at("vertices") == Json::array({Json::array({"0", "0"})}));
    CHECK(tdiv.at("weights").at("0") == 1);
}

TEST_CASE("pushforward command examples") {
    auto proj = run("pushforward " + fx("line13.json") + " " + fx("yproj_map.json"));
    CHECK(proj.code == 0);
    const Json& img = proj.report.at("image");
    CHECK(img.at("ambient_dim") == 1);
    REQUIRE(img.at("cells").size() == 1);
    CHECK(img.at("cells")[0].at("lineality") == Json::array({Json::array({1})}));
    CHECK(img.at("weights").at("0") == 3);

    auto ident = run("pushforward " + fx("tropical_line.json") + " " + fx("identity2_map.json"));
    CHECK(ident.code == 0);
    CHECK(ident.report.at("image").at("cells").size() == 3);
    for (const auto& [k, w] : ident.report.at("image").at("weights").items()) CHECK(w == 1);

    auto collapse = run("pushforward " + fx("line13.json") + " " + fx("collapse_map.json"));
    CHECK(collapse.code == 0);
    CHECK(collapse.report.at("image").at("cells") == Json::array());
    CHECK(result_named(collapse.report, "pushforward").at("supported") == false);
}

TEST_CASE("stokes command") {
    auto x2 = run("stokes " + fx("interval.json") + " " + fx("x2_form.json"));
    CHECK(x2.code == 0);
    const Json& r = result_named(x2.report, "stokes-d''");
    CHECK(r.at("lhs") == "-1");
    CHECK(r.at("rhs") == "-1");

    auto zero = run("stokes " + fx("interval.json") + " " + fx("zero_form.json"));
    CHECK(zero.code == 0);

    auto ray = run("stokes " + fx("ray.json") + " " + fx("x2_form.json"), false);
    CHECK(ray.code == 2);
    CHECK(ray.stdout_text.find("non-compact support") != std::string::npos);
}

TEST_CASE("green command on the unit square") {
    auto sq = run("green " + fx("square.json") + " " + fx("green_pair.json"));
    CHECK(sq.code == 0);
    const Json& r = result_named(sq.report, "green");
    CHECK(r.at("status") == "pass");
    CHECK(r.at("lhs") == "-1/2");
    CHECK(r.at("rhs") == "-1/2");
}

TEST_CASE("poincare-lelong command") {
    auto line = run("poincare-lelong " + fx("real_line.json") + " " + fx("pl_line_data.json"));
    CHECK(line.code == 0);
    const Json& r = result_named(line.report, "poincare-lelong");
    CHECK(r.at("lhs") == "1");
    CHECK(r.at("rhs") == "1");
    CHECK(r.at("boundary_term") == "0");

    auto trop = run("poincare-lelong " + fx("tropical_line.json") + " " +
                    fx("pl_tropical_line_data.json"));
    CHECK(trop.code == 0);
    const Json& t = result_named(trop.report, "poincare-lelong");
    CHECK(t.at("lhs") == "1");
    CHECK(t.at("rhs") == "1");
}

TEST_CASE("graph jacobian matches the classical theta coordinates") {
    auto jac = run("graph " + fx("theta.json") + " jacobian");
    CHECK(jac.code == 0);
    const Json& r = result_named(jac.report, "jacobian");
    CHECK(r.at("betti") == 2);
    CHECK(r.at("gram") == Json::array({Json::array({"7", "5"}), Json::array({"5", "8"})}));
    CHECK(r.at("covolume") == "31");
}

TEST_CASE("graph dirichlet and harmonic-check") {
    auto dir = run("graph " + fx("path.json") + " dirichlet " + fx("path_boundary_values.json"));
    CHECK(dir.code == 0);
    CHECK(result_named(dir.report, "dirichlet").at("at_vertex") ==
          Json::array({"0", "1/2", "1"}));
    CHECK(result_named(dir.report, "harmonic").at("status") == "pass");

    auto harm = run("graph " + fx("path.json") + " harmonic-check " + fx("path_harmonic_fn.json"));
    CHECK(harm.code == 0);

    std::string tent = write_scratch("tent", R"({"vertex_values": [0, 1, 0]})");
    auto bad = run("graph " + fx("path.json") + " harmonic-check " + tent);
    CHECK(bad.code == 1);
    const Json& r = result_named(bad.report, "harmonic");
    CHECK(r.at("status") == "fail");
    CHECK(r.at("defects").size() == 1);
    CHECK(r.at("defects")[0].at("vertex") == 1);
    std::filesystem::remove(tent);

    CHECK(run("graph " + fx("path.json") + " dirichlet", false).code == 2);
}

TEST_CASE("graph abel-jacobi") {
    auto tree = run("graph " + fx("tree.json") + " abel-jacobi");
    CHECK(tree.code == 0);
    const Json& r = result_named(tree.report, "abel-jacobi");
    CHECK(r.at("betti") == 0);
    for (const auto& v : r.at("vertices")) {
        CHECK(v.at("raw") == Json::array());
        CHECK(v.at("reduced") == Json::array());
    }

    auto theta = run("graph " + fx("theta.json") + " abel-jacobi");
    CHECK(theta.code == 0);
    const Json& t = result_named(theta.report, "abel-jacobi");
    CHECK(t.at("vertices")[0].at("reduced") == Json::array({"0", "0"}));
    CHECK(t.at("vertices")[1].at("raw") == Json::array({"-5", "-5"}));
    CHECK(t.at("vertices")[1].at("reduced") == Json::array({"7", "8"}));

    CHECK(run("graph " + fx("theta.json") + " abel-jacobi --base 7", false).code == 2);
}

TEST_CASE("graph dolbeault table and hypotheses") {
    auto theta = run("graph " + fx("theta.json") + " dolbeault");
    CHECK(theta.code == 0);
    CHECK(result_named(theta.report, "dolbeault").at("dims") == Json::array({1, 2, 2, 1}));

    auto circle = run("graph " + fx("circle.json") + " dolbeault");
    CHECK(circle.code == 0);
    CHECK(result_named(circle.report, "dolbeault").at("dims") == Json::array({1, 1, 1, 1}));

    auto path = run("graph " + fx("path.json") + " dolbeault", false);
    CHECK(path.code == 2);
    CHECK(path.stdout_text.find("boundary must be empty") != std::string::npos);

    std::string split = write_scratch("split", R"({
        "vertices": 4,
        "edges": [{"tail": 0, "head": 1, "length": 1}, {"tail": 2, "head": 3, "length": 1}],
        "boundary": []
    })");
    CHECK(run("graph " + split + " jacobian", false).code == 2);
    std::filesystem::remove(split);
}

TEST_CASE("theta-demo output") {
    auto demo = run("theta-demo 2 3 5");
    CHECK(demo.code == 0);
    const Json& lattice = result_named(demo.report, "lattice");
    CHECK(lattice.at("gram") == Json::array({Json::array({"7", "5"}), Json::array({"5", "8"})}));
    CHECK(lattice.at("covolume") == "31");
    const Json& aj = result_named(demo.report, "abel-jacobi");
    REQUIRE(aj.at("edges").size() == 3);
    CHECK(aj.at("edges")[0].at("edge") == "a");
    CHECK(aj.at("edges")[0].at("offset") == Json::array({"7", "5"}));
    CHECK(aj.at("edges")[0].at("slope") == Json::array({"-1", "0"}));
    CHECK(aj.at("edges")[1].at("offset") == Json::array({"5", "8"}));
    CHECK(aj.at("edges")[1].at("slope") == Json::array({"0", "-1"}));
    CHECK(aj.at("edges")[2].at("offset") == Json::array({"0", "0"}));
    CHECK(aj.at("edges")[2].at("slope") == Json::array({"1", "1"}));
    CHECK(result_named(demo.report, "dolbeault").at("dims") == Json::array({1, 2, 2, 1}));

    auto unit = run("theta-demo 1 1 1");
    CHECK(unit.code == 0);
    CHECK(result_named(unit.report, "lattice").at("gram") ==
          Json::array({Json::array({"2", "1"}), Json::array({"1", "2"})}));

    CHECK(run("theta-demo 1 0 1", false).code == 2);
}

TEST_CASE("reports are deterministic and flags behave") {
    auto a = run("theta-demo 2 3 5");
    auto b = run("theta-demo 2 3 5");
    CHECK(a.report_text == b.report_text);

    auto c = run("balance " + fx("tropical_line.json"));
    auto d = run("balance " + fx("tropical_line.json"));
    CHECK(c.report_text == d.report_text);

    auto quiet = run("balance " + fx("tropical_line.json") + " --quiet");
    CHECK(quiet.code == 0);
    CHECK(quiet.stdout_text.empty());

    auto printed = run("graph " + fx("theta.json") + " jacobian --json");
    CHECK(printed.stdout_text == printed.report_text);

    CHECK(run("no-such-command", false).code == 2);
    CHECK(run("", false).code == 2);
}
