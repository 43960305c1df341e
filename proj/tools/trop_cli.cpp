#include "trop/json_io.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using trop::Int;
using trop::Json;
using trop::Rat;

// ---------------------------------------------------------------- plumbing

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    std::ostringstream o;
    o << std::hex << std::setw(16) << std::setfill('0') << v;
    return o.str();
}

struct Loaded {
    std::string path;
    std::string bytes;
    Json doc;
};

Loaded load_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw trop::input_error("cannot open '" + path + "'");
    Loaded l;
    l.path = path;
    l.bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    try {
        l.doc = Json::parse(l.bytes);
    } catch (const std::exception& e) {
        throw trop::input_error(path + ": " + e.what());
    }
    return l;
}

struct Emit {
    std::string out_path;
    bool as_json = false;
    bool quiet = false;
};

std::string fmt_qvec(const trop::QVec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += trop::rat_str(v[i]);
    }
    return s + ")";
}

std::string fmt_zvec(const trop::ZVec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += v[i].str();
    }
    return s + ")";
}

// One run = one report: named pass/fail checks plus free-form payload, dumped
// as an insertion-ordered JSON document so identical runs emit identical
// bytes. Any failed check drives the exit code to 1.
class Report {
public:
    explicit Report(const std::string& command) {
        doc_["command"] = command;
        title_ = command;
    }

    void subcommand(const std::string& s) {
        doc_["subcommand"] = s;
        title_ += " " + s;
    }

    void input_file(const std::string& role, const Loaded& l) {
        if (!doc_.contains("inputs")) doc_["inputs"] = Json::object();
        Json rec = Json::object();
        rec["path"] = l.path;
        rec["fnv1a64"] = hex64(fnv1a64(l.bytes));
        doc_["inputs"][role] = std::move(rec);
        title_ += " " + l.path;
    }

    void input_arg(const std::string& role, Json value) {
        if (!doc_.contains("inputs")) doc_["inputs"] = Json::object();
        doc_["inputs"][role] = std::move(value);
    }

    void check(const std::string& name, bool pass, Json extra = Json::object(),
               const std::string& human = "") {
        if (!doc_.contains("results")) doc_["results"] = Json::array();
        Json r = Json::object();
        r["name"] = name;
        r["status"] = pass ? "pass" : "fail";
        for (auto& [k, v] : extra.items()) r[k] = v;
        doc_["results"].push_back(std::move(r));
        if (!pass) failed_ = true;
        std::string line = std::string("  [") + (pass ? "pass" : "FAIL") + "] " + name;
        if (!human.empty()) line += "  " + human;
        lines_.push_back(std::move(line));
    }

    void line(const std::string& s) { lines_.push_back("  " + s); }

    void payload(const std::string& key, Json value) { doc_[key] = std::move(value); }

    int finish(const Emit& e) {
        int code = failed_ ? 1 : 0;
        doc_["exit_code"] = code;
        std::string text = doc_.dump(2);
        text += '\n';
        if (!e.out_path.empty()) {
            std::ofstream out(e.out_path, std::ios::binary);
            if (!out) throw trop::input_error("cannot write '" + e.out_path + "'");
            out << text;
        }
        if (!e.quiet) {
            if (e.as_json) {
                std::cout << text;
            } else {
                std::cout << title_ << "\n";
                for (const auto& l : lines_) std::cout << l << "\n";
                std::cout << "result: " << (code ? "FAIL" : "PASS") << " (exit " << code << ")\n";
            }
        }
        return code;
    }

private:
    Json doc_ = Json::object();
    std::vector<std::string> lines_;
    std::string title_;
    bool failed_ = false;
};

// -------------------------------------------------------------- subcommands

int run_balance(const std::string& complex_file, const Emit& emit) {
    Report rep("balance");
    Loaded lc = load_json(complex_file);
    rep.input_file("complex", lc);
    trop::WeightedComplex a = trop::weighted_from_json(lc.doc);
    Json boundary = Json::array();
    std::string blist;
    for (auto tau : a.C.of_dim(a.d - 1)) {
        auto cert = trop::balance_at(a, tau);
        Json extra;
        extra["cell"] = tau;
        extra["point"] = trop::qvec_to_json(a.C.cells[tau].relint_point());
        extra["certificate"] = trop::zvec_to_json(cert.certificate);
        rep.check("face " + std::to_string(tau), cert.balanced, extra,
                  "certificate " + fmt_zvec(cert.certificate));
        if (!cert.balanced) {
            boundary.push_back(tau);
            if (!blist.empty()) blist += ", ";
            blist += std::to_string(tau);
        }
    }
    rep.payload("boundary_faces", boundary);
    rep.line("boundary faces: " + (blist.empty() ? "none" : blist));
    return rep.finish(emit);
}

int run_divisor(const std::string& complex_file, const std::string& function_file,
                const Emit& emit) {
    Report rep("divisor");
    Loaded lc = load_json(complex_file);
    Loaded lf = load_json(function_file);
    rep.input_file("complex", lc);
    rep.input_file("function", lf);
    trop::WeightedComplex a = trop::weighted_from_json(lc.doc);
    trop::PLFunction f = trop::pl_from_json(lf.doc, a.n);
    auto res = trop::weil_divisor(a, f);
    Json faces = Json::array();
    for (const auto& df : res.faces) {
        Json r = Json::object();
        r["cell"] = df.tau;
        r["point"] = trop::qvec_to_json(res.data.wc.C.cells[df.tau].relint_point());
        r["multiplicity"] = trop::int_to_json(df.mult);
        r["balanced"] = df.balanced;
        faces.push_back(std::move(r));
        if (df.mult != 0)
            rep.line("multiplicity " + df.mult.str() + " at " +
                     fmt_qvec(res.data.wc.C.cells[df.tau].relint_point()));
    }
    rep.check("divisor", true,
              {{"supported", res.divisor.supported()},
               {"weighted_cells", res.divisor.w.size()}},
              res.divisor.supported()
                  ? std::to_string(res.divisor.w.size()) + " weighted cell(s)"
                  : "empty");
    rep.payload("faces", std::move(faces));
    rep.payload("divisor", trop::weighted_to_json(res.divisor));
    return rep.finish(emit);
}

int run_pushforward(const std::string& complex_file, const std::string& map_file,
                    const Emit& emit) {
    Report rep("pushforward");
    Loaded lc = load_json(complex_file);
    Loaded lm = load_json(map_file);
    rep.input_file("complex", lc);
    rep.input_file("map", lm);
    trop::WeightedComplex a = trop::weighted_from_json(lc.doc);
    trop::PLMap m = trop::plmap_from_json(lm.doc);
    trop::WeightedComplex img = trop::pushforward(a, m);
    for (const auto& [idx, wt] : img.w)
        rep.line("weight " + wt.str() + " on a " + std::to_string(img.C.cells[idx].dim) +
                 "-cell at " + fmt_qvec(img.C.cells[idx].relint_point()));
    rep.check("pushforward", true,
              {{"supported", img.supported()}, {"weighted_cells", img.w.size()}},
              img.supported() ? std::to_string(img.w.size()) + " weighted cell(s)" : "zero cycle");
    rep.payload("image", trop::weighted_to_json(img));
    return rep.finish(emit);
}

int run_stokes(const std::string& complex_file, const std::string& form_file, const Emit& emit) {
    Report rep("stokes");
    Loaded lc = load_json(complex_file);
    Loaded lf = load_json(form_file);
    rep.input_file("complex", lc);
    rep.input_file("form", lf);
    trop::WeightedComplex a = trop::weighted_from_json(lc.doc);
    trop::FormField f = trop::field_from_json(lf.doc);
    auto r = trop::stokes_check(a, f);
    rep.check(r.identity_name, r.holds,
              {{"lhs", trop::rat_to_json(r.lhs)}, {"rhs", trop::rat_to_json(r.rhs)}},
              "lhs " + trop::rat_str(r.lhs) + ", rhs " + trop::rat_str(r.rhs));
    return rep.finish(emit);
}

int run_green(const std::string& complex_file, const std::string& forms_file, const Emit& emit) {
    Report rep("green");
    Loaded lc = load_json(complex_file);
    Loaded lf = load_json(forms_file);
    rep.input_file("complex", lc);
    rep.input_file("forms", lf);
    trop::WeightedComplex a = trop::weighted_from_json(lc.doc);
    if (!lf.doc.is_object() || !lf.doc.contains("omega") || !lf.doc.contains("eta"))
        throw trop::input_error("green needs a file with omega and eta");
    trop::FormField omega = trop::field_from_json(lf.doc.at("omega"));
    trop::FormField eta = trop::field_from_json(lf.doc.at("eta"));
    auto r = trop::green_check(a, omega, eta);
    rep.check(r.identity_name, r.holds,
              {{"lhs", trop::rat_to_json(r.lhs)}, {"rhs", trop::rat_to_json(r.rhs)}},
              "lhs " + trop::rat_str(r.lhs) + ", rhs " + trop::rat_str(r.rhs));
    return rep.finish(emit);
}

int run_poincare_lelong(const std::string& complex_file, const std::string& data_file,
                        const Emit& emit) {
    Report rep("poincare-lelong");
    Loaded lc = load_json(complex_file);
    Loaded ld = load_json(data_file);
    rep.input_file("complex", lc);
    rep.input_file("data", ld);
    trop::WeightedComplex a = trop::weighted_from_json(lc.doc);
    if (!ld.doc.is_object() || !ld.doc.contains("function") || !ld.doc.contains("eta"))
        throw trop::input_error("poincare-lelong needs a file with function and eta");
    trop::PLFunction f = trop::pl_from_json(ld.doc.at("function"), a.n);
    trop::FormField eta = trop::field_from_json(ld.doc.at("eta"));
    auto r = trop::poincare_lelong_check(a, f, eta);
    rep.check(r.identity_name, r.holds,
              {{"lhs", trop::rat_to_json(r.lhs)},
               {"rhs", trop::rat_to_json(r.rhs)},
               {"boundary_term", trop::rat_to_json(r.boundary_term)}},
              "lhs " + trop::rat_str(r.lhs) + ", rhs " + trop::rat_str(r.rhs) +
                  ", boundary " + trop::rat_str(r.boundary_term));
    return rep.finish(emit);
}

int run_graph(const std::string& graph_file, const std::string& mode,
              const std::string& data_file, std::size_t base, const Emit& emit) {
    Report rep("graph");
    rep.subcommand(mode);
    Loaded lg = load_json(graph_file);
    rep.input_file("graph", lg);
    trop::MetricGraph g = trop::graph_from_json(lg.doc);
    auto need_data = [&](const char* what) {
        if (data_file.empty())
            throw trop::input_error(mode + std::string(" needs a ") + what + " file");
        Loaded ld = load_json(data_file);
        rep.input_file("data", ld);
        return ld;
    };
    if (mode == "harmonic-check") {
        Loaded ld = need_data("function");
        trop::GraphPL h = trop::graph_pl_from_json(g, ld.doc);
        auto hr = trop::is_harmonic(g, h);
        bool sub = trop::is_subharmonic(g, h);
        Json defects = Json::array();
        for (const auto& [v, m] : hr.defects) {
            defects.push_back({{"vertex", v}, {"mass", trop::rat_to_json(m)}});
            rep.line("defect " + trop::rat_str(m) + " at vertex " + std::to_string(v));
        }
        rep.check("harmonic", hr.harmonic,
                  {{"edge_affine", hr.edge_affine},
                   {"subharmonic", sub},
                   {"defects", std::move(defects)}},
                  hr.edge_affine ? "" : "not affine on every edge");
    } else if (mode == "dirichlet") {
        Loaded ld = need_data("boundary values");
        auto values = trop::vertex_values_from_json(ld.doc);
        trop::GraphPL sol = trop::solve_dirichlet(g, values);
        Json at_vertex = Json::array();
        std::string human = "u = (";
        for (std::size_t v = 0; v < g.nv; ++v) {
            at_vertex.push_back(trop::rat_to_json(sol.at_vertex[v]));
            if (v) human += ", ";
            human += trop::rat_str(sol.at_vertex[v]);
        }
        human += ")";
        rep.check("dirichlet", true, {{"at_vertex", std::move(at_vertex)}}, human);
        rep.check("harmonic", trop::is_harmonic(g, sol).harmonic);
    } else if (mode == "jacobian") {
        trop::JacobianDesc j = trop::jacobian(g);
        Json cycles = Json::array();
        for (const auto& c : j.cycles) cycles.push_back(trop::qvec_to_json(c));
        std::string rows;
        for (std::size_t i = 0; i < j.iota.nr; ++i)
            rows += (i ? ", " : "") + fmt_qvec(j.iota.row(i));
        rep.check("jacobian", true,
                  {{"betti", j.rank},
                   {"cycles", std::move(cycles)},
                   {"gram", trop::qmat_to_json(j.iota)},
                   {"covolume", trop::rat_to_json(j.covolume)}},
                  "betti " + std::to_string(j.rank) +
                      (j.rank ? ", rows " + rows + ", covolume " + trop::rat_str(j.covolume)
                              : ""));
    } else if (mode == "abel-jacobi") {
        if (base >= g.nv) throw trop::input_error("abel-jacobi: base vertex out of range");
        trop::JacobianDesc j = trop::jacobian(g);
        Json verts = Json::array();
        for (std::size_t v = 0; v < g.nv; ++v) {
            auto aj = trop::abel_jacobi(g, j, base, trop::vertex_point(v));
            verts.push_back({{"vertex", v},
                             {"raw", trop::qvec_to_json(aj.raw)},
                             {"reduced", trop::qvec_to_json(aj.reduced)}});
            rep.line("vertex " + std::to_string(v) + ": " + fmt_qvec(aj.reduced));
        }
        rep.check("abel-jacobi", true,
                  {{"base", base}, {"betti", j.rank}, {"vertices", std::move(verts)}});
    } else if (mode == "dolbeault") {
        auto dims = trop::dolbeault_dims(g);
        Json d = Json::array({dims[0], dims[1], dims[2], dims[3]});
        rep.check("dolbeault", true, {{"dims", std::move(d)}},
                  "(" + std::to_string(dims[0]) + ", " + std::to_string(dims[1]) + ", " +
                      std::to_string(dims[2]) + ", " + std::to_string(dims[3]) + ")");
    } else {
        throw trop::input_error("unknown graph subcommand '" + mode + "'");
    }
    return rep.finish(emit);
}

std::string affine_formula(const Rat& off, const Rat& slope) {
    if (slope == 0) return trop::rat_str(off);
    std::string t = slope == 1 || slope == -1 ? "t" : trop::rat_str(abs(slope)) + "*t";
    if (off == 0) return (slope < 0 ? "-" : "") + t;
    return trop::rat_str(off) + (slope < 0 ? " - " : " + ") + t;
}

int run_theta_demo(const std::string& la_s, const std::string& lb_s, const std::string& lc_s,
                   const Emit& emit) {
    Report rep("theta-demo");
    Rat la = trop::parse_rat(la_s), lb = trop::parse_rat(lb_s), lc = trop::parse_rat(lc_s);
    rep.input_arg("lengths", Json::array({trop::rat_str(la), trop::rat_str(lb), trop::rat_str(lc)}));
    rep.line("lengths (" + trop::rat_str(la) + ", " + trop::rat_str(lb) + ", " +
             trop::rat_str(lc) + ")");
    auto t = trop::theta_coordinates(la, lb, lc);
    rep.check("betti", true, {{"value", t.jac.rank}}, std::to_string(t.jac.rank));
    std::string rows;
    for (std::size_t i = 0; i < t.jac.iota.nr; ++i)
        rows += (i ? ", " : "") + fmt_qvec(t.jac.iota.row(i));
    rep.check("lattice", true,
              {{"gram", trop::qmat_to_json(t.jac.iota)},
               {"covolume", trop::rat_to_json(t.jac.covolume)}},
              "rows " + rows + ", covolume " + trop::rat_str(t.jac.covolume));
    static const char* names[3] = {"a", "b", "c"};
    Json edges = Json::array();
    for (const auto& img : t.images) {
        Json e = Json::object();
        e["edge"] = names[img.edge];
        e["length"] = trop::rat_to_json(t.graph.edges[img.edge].length);
        e["offset"] = trop::qvec_to_json(img.offset);
        e["slope"] = trop::qvec_to_json(img.slope);
        edges.push_back(std::move(e));
        rep.line(std::string("edge ") + names[img.edge] + ": t -> (" +
                 affine_formula(img.offset[0], img.slope[0]) + ", " +
                 affine_formula(img.offset[1], img.slope[1]) + ")  for t in [0, " +
                 trop::rat_str(t.graph.edges[img.edge].length) + "]");
    }
    rep.check("abel-jacobi", true, {{"edges", std::move(edges)}});
    auto dims = trop::dolbeault_dims(t.graph);
    rep.check("dolbeault", true, {{"dims", Json::array({dims[0], dims[1], dims[2], dims[3]})}},
              "(" + std::to_string(dims[0]) + ", " + std::to_string(dims[1]) + ", " +
                  std::to_string(dims[2]) + ", " + std::to_string(dims[3]) + ")");
    return rep.finish(emit);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact computations on tropical cycles, Lagerberg forms, and metric graphs"};
    app.require_subcommand(1);

    Emit emit;
    auto add_io = [&](CLI::App* s) {
        s->add_option("--out", emit.out_path, "write the JSON report to this path");
        s->add_flag("--json", emit.as_json, "print the JSON report instead of the table");
        s->add_flag("--quiet", emit.quiet, "print nothing; the exit code still reports");
    };

    std::string complex_file, data_file, graph_file, mode;
    std::string la, lb, lc;
    std::size_t base = 0;

    auto* balance = app.add_subcommand("balance", "verify the balancing condition face by face");
    balance->add_option("complex", complex_file, "weighted complex JSON")->required();
    add_io(balance);

    auto* divisor = app.add_subcommand("divisor", "corner locus of a PL function on a cycle");
    divisor->add_option("complex", complex_file, "weighted complex JSON")->required();
    divisor->add_option("function", data_file, "PL function JSON")->required();
    add_io(divisor);

    auto* pushf = app.add_subcommand("pushforward", "image cycle under a PL map");
    pushf->add_option("complex", complex_file, "weighted complex JSON")->required();
    pushf->add_option("map", data_file, "PL map JSON")->required();
    add_io(pushf);

    auto* stokes = app.add_subcommand("stokes", "volume integral of the derivative against the boundary pairing");
    stokes->add_option("complex", complex_file, "weighted complex JSON")->required();
    stokes->add_option("form", data_file, "Lagerberg form or form field JSON")->required();
    add_io(stokes);

    auto* green = app.add_subcommand("green", "symmetric Green identity for a pair of forms");
    green->add_option("complex", complex_file, "weighted complex JSON")->required();
    green->add_option("forms", data_file, "JSON with omega and eta")->required();
    add_io(green);

    auto* pl = app.add_subcommand("poincare-lelong", "corner current against a symmetric form");
    pl->add_option("complex", complex_file, "weighted complex JSON")->required();
    pl->add_option("data", data_file, "JSON with function and eta")->required();
    add_io(pl);

    auto* graph = app.add_subcommand("graph", "metric graph computations");
    graph->add_option("graph", graph_file, "metric graph JSON")->required();
    graph->add_option("mode", mode, "harmonic-check, dirichlet, jacobian, abel-jacobi, dolbeault")
        ->required()
        ->check(CLI::IsMember({"harmonic-check", "dirichlet", "jacobian", "abel-jacobi",
                               "dolbeault"}));
    graph->add_option("data", data_file, "function or boundary value JSON, when the mode needs one");
    graph->add_option("--base", base, "base vertex for abel-jacobi (default 0)");
    add_io(graph);

    auto* theta = app.add_subcommand("theta-demo", "the theta graph worked end to end");
    theta->add_option("la", la, "length of edge a")->required();
    theta->add_option("lb", lb, "length of edge b")->required();
    theta->add_option("lc", lc, "length of edge c")->required();
    add_io(theta);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*balance) return run_balance(complex_file, emit);
        if (*divisor) return run_divisor(complex_file, data_file, emit);
        if (*pushf) return run_pushforward(complex_file, data_file, emit);
        if (*stokes) return run_stokes(complex_file, data_file, emit);
        if (*green) return run_green(complex_file, data_file, emit);
        if (*pl) return run_poincare_lelong(complex_file, data_file, emit);
        if (*graph) return run_graph(graph_file, mode, data_file, base, emit);
        if (*theta) return run_theta_demo(la, lb, lc, emit);
    } catch (const trop::input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
