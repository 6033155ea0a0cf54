#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "kgroth/kgroth.hpp"

using namespace kgroth;

namespace {

enum Exit { kOk = 0, kError = 1, kUncomputable = 2, kFinding = 3 };

struct Common {
    std::string inv, perm, lambda, route, engine, format = "text";
    int vars = -1, maxdeg = -1, jobs = 1;
};

struct UserError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Permutation require_involution(const std::string& text, bool fpf) {
    if (text.empty()) throw UserError("--inv is required");
    Permutation z = parse_permutation(text);
    if (!z.is_involution()) throw UserError("not an involution: " + text);
    if (fpf && !z.is_fpf_involution()) {
        for (int i = 1; i <= z.size(); ++i)
            if (z(i) == i) throw UserError("fixed point " + std::to_string(i) + " in " + text + "; a fixed-point-free involution is required");
        throw UserError("odd size: a fixed-point-free involution needs an even number of letters: " + text);
    }
    return z;
}

Permutation require_permutation(const std::string& text) {
    if (text.empty()) throw UserError("--perm is required");
    Permutation w = parse_permutation(text);
    return w;
}

Partition require_partition(const std::string& text, bool strict) {
    Partition lam = parse_partition(text);
    if (strict && !is_strict(lam)) throw UserError("strict partition required: " + text);
    return lam;
}

void require_series_bounds(const Common& c, const std::string& family) {
    if (c.vars < 1) throw UserError(family + " is a symmetric series: --vars is required");
    if (c.maxdeg < 0) throw UserError(family + " is a symmetric series: --maxdeg is required");
    if (c.vars > kMaxVars) throw UserError("--vars exceeds " + std::to_string(kMaxVars));
}

// Optional on-disk cache of computed polynomials, keyed by the request.
std::optional<std::filesystem::path> cache_path(const std::string& key) {
    const char* dir = std::getenv("KGROTH_CACHE_DIR");
    if (dir == nullptr || *dir == '\0') return std::nullopt;
    std::string name;
    for (char ch : key) name += std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_';
    return std::filesystem::path(dir) / (name + ".json");
}

std::optional<BetaPoly> cache_get(const std::string& key) {
    auto p = cache_path(key);
    if (!p || !std::filesystem::exists(*p)) return std::nullopt;
    std::ifstream in(*p);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.contains("key") || j["key"] != key) return std::nullopt;
    return poly_from_json(j["poly"]);
}

void cache_put(const std::string& key, const BetaPoly& poly) {
    auto p = cache_path(key);
    if (!p) return;
    std::filesystem::create_directories(p->parent_path());
    std::ofstream out(*p);
    out << json{{"key", key}, {"poly", poly_to_json(poly)}}.dump() << "\n";
}

struct Result {
    std::string status = "ok";
    BetaPoly poly;
    std::string factored_latex, factored_text;  // dominant product form, when detected
    json extra = json::object();
};

Result compute(const std::string& family, const Common& c) {
    Result r;
    if (family == "typeA") {
        Permutation w = require_permutation(c.perm);
        std::string route = c.route.empty() ? "dd" : c.route;
        if (route == "dd") r.poly = grothendieck(w);
        else if (route == "pipedream") {
            int cap = c.maxdeg >= 0 ? c.maxdeg : grothendieck(w).max_degree();
            bool trunc = false;
            r.poly = groth_via_pipedreams(w, cap, &trunc);
            if (c.maxdeg >= 0) r.status = "truncated";
        } else throw UserError("unknown typeA route: " + route);
    } else if (family == "sp") {
        Permutation z = require_involution(c.inv, true);
        r.poly = sp_groth(z, parse_sp_route(c.route.empty() ? "dd" : c.route), c.maxdeg);
        if (classify(z).sp_dominant) {
            r.factored_latex = oplus_product_latex(sp_diagram(z));
            r.factored_text = oplus_product_text(sp_diagram(z));
        }
    } else if (family == "o") {
        Permutation z = require_involution(c.inv, false);
        ORoute route = parse_o_route(c.route.empty() ? "auto" : c.route);
        OEngine engine = parse_o_engine(c.engine.empty() ? "e1" : c.engine);
        Classification cl = classify(z);
        if (route == ORoute::hilbert) {
            HilbertClass h = o_hilbert_monomial(z);
            r.poly = h.poly;
            std::string a = h.a_class.str();
            for (auto& ch : a)
                if (ch == 'x') ch = 'a';
            r.extra["equivariant_class"] = a;
            r.extra["codim"] = h.codim;
        } else if (c.maxdeg >= 0 && (route == ORoute::pfaffian || (route == ORoute::automatic && !cl.o_dominant))) {
            OVexResult v = o_vexillary(z, engine, c.maxdeg, c.jobs);
            r.poly = v.poly;
            r.status = "truncated";
        } else {
            r.poly = o_groth(z, route, engine, c.jobs);
        }
        if (cl.o_dominant) {
            r.factored_latex = oplus_product_latex(o_diagram(z));
            r.factored_text = oplus_product_text(o_diagram(z));
        }
    } else if (family == "G") {
        require_series_bounds(c, family);
        if (!c.perm.empty()) r.poly = stable_G(require_permutation(c.perm), c.vars, c.maxdeg).poly;
        else r.poly = G_lambda(require_partition(c.lambda, false), c.vars, c.maxdeg, c.jobs).poly;
        r.status = "truncated";
    } else if (family == "GP" || family == "GQ") {
        require_series_bounds(c, family);
        Partition lam = require_partition(c.lambda, true);
        std::string route = c.route.empty() ? "tableau" : c.route;
        if (route == "tableau") r.poly = (family == "GP" ? GP(lam, c.vars, c.maxdeg, c.jobs) : GQ(lam, c.vars, c.maxdeg, c.jobs)).poly;
        else if (family == "GQ" && route == "pfaffian") r.poly = GQ_pfaffian(lam, c.vars, c.maxdeg).poly;
        else if (family == "GQ" && route == "two-row") {
            if (lam.size() > 2) throw UserError("two-row route needs at most two parts");
            r.poly = GQ_two_row(lam.empty() ? 0 : lam[0], lam.size() < 2 ? 0 : lam[1], c.vars, c.maxdeg).poly;
        } else throw UserError("unknown " + family + " route: " + route);
        r.status = "truncated";
    } else if (family == "GQO") {
        require_series_bounds(c, family);
        Permutation z = require_involution(c.inv, false);
        if (!classify(z).vexillary) throw Uncomputable("GQO: " + z.str() + " is not vexillary");
        std::string route = c.route.empty() ? "stable" : c.route;
        if (route == "stable") r.poly = GQ_o_stable_vexillary(z, c.vars, c.maxdeg).poly;
        else if (route == "limit") r.poly = GQ_o_limit(z, c.vars, c.maxdeg).poly;
        else throw UserError("unknown GQO route: " + route);
        r.extra["lambda"] = o_code_and_shape(z).shape;
        r.status = "truncated";
    } else if (family == "GPSp") {
        require_series_bounds(c, family);
        Permutation z = require_involution(c.inv, true);
        std::string route = c.route.empty() ? "atoms" : c.route;
        SpStableRoute sr = route == "atoms" ? SpStableRoute::atoms : route == "limit" ? SpStableRoute::limit : throw UserError("unknown GPSp route: " + route);
        r.poly = GP_sp_stable(z, c.vars, c.maxdeg, sr).poly;
        r.status = "truncated";
    } else {
        throw UserError("unknown family: " + family + " (typeA, sp, o, G, GP, GQ, GQO, GPSp)");
    }
    return r;
}

std::string request_key(const std::string& family, const Common& c) {
    std::ostringstream s;
    s << family << "|" << c.inv << "|" << c.perm << "|" << c.lambda << "|" << c.route << "|" << c.engine << "|" << c.vars << "|" << c.maxdeg;
    return s.str();
}

int emit_uncomputable(const std::string& family, const std::string& index, const std::string& why, const std::string& format) {
    if (format == "json")
        std::cout << json{{"schema", kReportSchema}, {"status", "uncomputable"}, {"family", family}, {"index", index}, {"reason", why}}.dump(2) << "\n";
    else
        std::cout << "uncomputable: " << why << "\n";
    return kUncomputable;
}

int run_compute(const std::string& family, const Common& c) {
    std::string index = !c.inv.empty() ? c.inv : !c.perm.empty() ? c.perm : c.lambda;
    Result r;
    std::string key = request_key(family, c);
    try {
        if (auto hit = cache_get(key); hit && c.format == "text") {
            r.poly = *hit;
        } else {
            r = compute(family, c);
            cache_put(key, r.poly);
        }
    } catch (const Uncomputable& e) {
        return emit_uncomputable(family, index, e.what(), c.format);
    }
    if (c.format == "json") {
        json j = {{"schema", kReportSchema}, {"status", r.status}, {"family", family}, {"index", index}};
        if (c.vars > 0) j["vars"] = c.vars;
        if (c.maxdeg >= 0) j["maxdeg"] = c.maxdeg;
        for (auto& [k, v] : r.extra.items()) j[k] = v;
        if (!r.factored_text.empty()) j["factored"] = r.factored_text;
        j["poly"] = poly_to_json(r.poly);
        std::cout << j.dump(2) << "\n";
    } else if (c.format == "latex") {
        std::cout << (r.factored_latex.empty() ? poly_latex(r.poly) : r.factored_latex) << "\n";
    } else if (c.format == "text") {
        std::cout << r.poly.str() << "\n";
    } else {
        throw UserError("unknown format: " + c.format);
    }
    return kOk;
}

// "GQ:1*GQ:1", "GPSp:4,3,2,1", "Gw:1,3,2", "o:3,4,1,2", ...
BetaPoly target_poly(const std::string& spec, int k, int maxdeg, int jobs) {
    BetaPoly acc;
    bool first = true;
    std::stringstream ss(spec);
    std::string factor;
    while (std::getline(ss, factor, '*')) {
        auto colon = factor.find(':');
        if (colon == std::string::npos) throw UserError("target factor needs family:index, got " + factor);
        std::string fam = factor.substr(0, colon), idx = factor.substr(colon + 1);
        Common c;
        c.vars = k;
        c.maxdeg = maxdeg;
        c.jobs = jobs;
        std::string cf = fam;
        if (fam == "Gw") {
            c.perm = idx;
            cf = "G";
        } else if (fam == "typeA") {
            c.perm = idx;
            c.maxdeg = -1;
        } else if (fam == "G" || fam == "GP" || fam == "GQ") {
            c.lambda = idx;
        } else {
            c.inv = idx;
            if (fam == "sp" || fam == "o") c.maxdeg = -1;
        }
        BetaPoly p = compute(cf, c).poly;
        acc = first ? p : (maxdeg >= 0 ? BetaPoly::mul_trunc(acc, p, maxdeg) : acc * p);
        first = false;
    }
    if (first) throw UserError("empty target");
    return acc;
}

int run_expand(const std::string& target, const std::string& basis, const Common& c, bool report) {
    if (c.maxdeg < 0) throw UserError("expand: --maxdeg is required");
    json out = {{"schema", kReportSchema}, {"target", target}, {"basis", basis}, {"maxdeg", c.maxdeg}};
    bool flagged = false;
    std::vector<std::string> lines;
    if (basis == "groth") {
        BetaPoly f;
        try {
            f = target_poly(target, std::max(c.vars, 1), -1, c.jobs);
        } catch (const Uncomputable& e) {
            return emit_uncomputable("expand", target, e.what(), c.format);
        }
        Expansion<Permutation> e = expand_in_grothendieck_basis(f, c.maxdeg);
        json coeffs = json::array();
        for (const auto& [w, s] : e.coefficients) {
            coeffs.push_back({{"index", w.compact()}, {"coeff", scalar_to_json(s)}});
            lines.push_back("(" + s.str() + ") G_" + w.compact());
            if (!s.in_N_beta()) flagged = true;
        }
        flagged = flagged || !e.complete;
        out["coefficients"] = coeffs;
        out["complete"] = e.complete;
        out["cap_hit"] = e.cap_hit;
        out["remainder"] = poly_to_json(e.remainder);
    } else {
        SymBasis b = parse_sym_basis(basis);
        int k = c.vars > 0 ? c.vars : c.maxdeg;
        SymSeries s;
        try {
            s = SymSeries{target_poly(target, k, c.maxdeg, c.jobs), k, c.maxdeg};
        } catch (const Uncomputable& e) {
            return emit_uncomputable("expand", target, e.what(), c.format);
        }
        PositivityReport r = positivity_report(s, b, c.maxdeg, c.jobs);
        out["vars"] = k;
        out["symmetric"] = r.symmetric;
        out["faithful"] = r.faithful;
        out["attempted"] = r.attempted;
        if (!r.attempted) {
            lines.push_back(std::string("expansion not attempted: ") + (r.symmetric ? "need --vars >= --maxdeg" : "target is not symmetric"));
            flagged = true;
        } else {
            json coeffs = json::array();
            for (const auto& [lam, sc] : r.expansion.coefficients) {
                coeffs.push_back({{"index", lam}, {"coeff", scalar_to_json(sc)}});
                lines.push_back("(" + sc.str() + ") " + sym_basis_name(b) + "_" + partition_str(lam));
            }
            out["coefficients"] = coeffs;
            out["complete"] = r.expansion.complete;
            out["nonnegative"] = r.nonnegative;
            out["not_in_span"] = r.expansion.not_in_span;
            out["cap_hit"] = r.expansion.cap_hit;
            flagged = !r.nonnegative || !r.expansion.complete;
        }
    }
    bool finding = report && flagged;
    out["status"] = finding ? "finding" : "ok";
    if (c.format == "json") {
        std::cout << out.dump(2) << "\n";
    } else {
        for (const auto& l : lines) std::cout << l << "\n";
        if (report) std::cout << (flagged ? "flagged: coefficient outside N[beta] or incomplete expansion" : "all coefficients in N[beta], zero remainder") << "\n";
    }
    return finding ? kFinding : kOk;
}

int run_atoms(const Common& c) {
    Permutation z = require_involution(c.inv, true);
    AtomSets a = hecke_atoms(z);
    auto list = [](const std::set<Permutation>& s) {
        std::vector<std::string> v;
        for (const auto& w : s) v.push_back(w.compact());
        return v;
    };
    if (c.format == "json") {
        std::cout << json{{"schema", kReportSchema}, {"status", "ok"}, {"inv", z.compact()}, {"hecke_atoms", list(a.hecke_atoms)}, {"atoms", list(a.atoms)}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "hecke atoms:";
        for (const auto& w : list(a.hecke_atoms)) std::cout << " " << w;
        std::cout << "\natoms:";
        for (const auto& w : list(a.atoms)) std::cout << " " << w;
        std::cout << "\n";
    }
    return kOk;
}

int run_diagram(const Common& c) {
    Permutation z = c.inv.empty() ? require_permutation(c.perm) : require_involution(c.inv, false);
    json j = {{"schema", kReportSchema}, {"status", "ok"}, {"index", z.compact()}, {"rothe", diagram_to_json(rothe_diagram(z))}};
    std::ostringstream t;
    t << "D:     " << diagram_str(rothe_diagram(z)) << "\n";
    if (z.is_involution()) {
        Classification cl = classify(z);
        OCodeShape cs = o_code_and_shape(z);
        j["o_diagram"] = diagram_to_json(o_diagram(z));
        j["o_essential"] = diagram_to_json(essential_set(o_diagram(z)));
        j["vexillary"] = cl.vexillary;
        j["o_dominant"] = cl.o_dominant;
        j["lambda_o"] = cs.shape;
        j["o_computable"] = cl.vexillary || cl.o_dominant;
        t << "D^O:   " << diagram_str(o_diagram(z)) << "\n";
        t << "ess:   " << diagram_str(essential_set(o_diagram(z))) << "\n";
        t << "lambda^O: " << partition_str(cs.shape) << "\n";
        t << "vexillary: " << (cl.vexillary ? "yes" : "no") << ", O-dominant: " << (cl.o_dominant ? "yes" : "no") << "\n";
        if (z.is_fpf_involution()) {
            j["sp_diagram"] = diagram_to_json(sp_diagram(z));
            j["sp_dominant"] = cl.sp_dominant;
            j["fpf_length"] = fpf_length(z);
            t << "D^Sp:  " << diagram_str(sp_diagram(z)) << "\n";
            t << "Sp-dominant: " << (cl.sp_dominant ? "yes" : "no") << ", fpf length " << fpf_length(z) << "\n";
        }
        if (cl.i_grassmannian && !cl.i_grassmannian->phi.empty()) {
            j["i_grassmannian"] = {{"n", cl.i_grassmannian->n}, {"phi", cl.i_grassmannian->phi}};
            t << "I-Grassmannian with n = " << cl.i_grassmannian->n << "\n";
        }
    }
    if (c.format == "json") std::cout << j.dump(2) << "\n";
    else std::cout << t.str();
    return kOk;
}

int run_verify(const std::vector<std::string>& suites, const Common& c) {
    VerifyOptions o{c.vars, c.maxdeg, c.jobs};
    bool fail = false, finding = false;
    json all = json::array();
    for (const auto& name : suites) {
        SuiteReport r = run_suite(name, o);
        fail = fail || !r.pass();
        finding = finding || r.finding();
        if (c.format == "json") {
            all.push_back(suite_to_json(r));
            continue;
        }
        for (const auto& cs : r.cases) {
            std::cout << (cs.pass ? (cs.finding ? "FLAG " : "pass ") : "FAIL ") << name << " :: " << cs.name;
            if (!cs.detail.empty() && (!cs.pass || cs.finding)) std::cout << " -- " << cs.detail;
            std::cout << "\n";
        }
        std::cout << (r.pass() ? "PASS " : "FAIL ") << name << " (" << r.cases.size() << " cases)\n";
    }
    if (c.format == "json") std::cout << (all.size() == 1 ? all[0] : all).dump(2) << "\n";
    if (fail) return kError;
    return finding ? kFinding : kOk;
}

int run_trace(const Common& c) {
    Permutation z = require_involution(c.inv, false);
    if (!classify(z).vexillary) throw Uncomputable("pfaffian-trace: " + z.str() + " is not vexillary");
    PfaffianPlan p = pfaffian_plan(z);
    int D = c.maxdeg >= 0 ? c.maxdeg : o_vexillary(z, OEngine::e1, -1, c.jobs).degree_bound;
    std::cout << "z = " << z.compact() << "\nlambda = " << partition_str(p.lambda) << (p.padded ? " (padded)" : "") << "\nS = {";
    bool first = true;
    for (int s : p.S) {
        std::cout << (first ? "" : ",") << s;
        first = false;
    }
    std::cout << "}\nr = " << p.r << ", degree bound " << D << "\n";
    for (int i = 1; i <= p.r; ++i) {
        std::cout << "c^(" << i << "): " << p.series[i - 1].str();
        if (i <= p.length) std::cout << "  [cell (" << p.row_cell[i - 1].row << "," << p.row_cell[i - 1].col << ")]";
        std::cout << "\n";
    }
    for (int i = 1; i <= p.r; ++i)
        for (int j = i + 1; j <= p.r; ++j) {
            std::cout << "M" << i << j << " = " << plan_entry_str(p, i, j) << "\n";
            std::cout << "  Phi: " << plan_entry_dexpr(p, i, j).str({"D" + std::to_string(i), "D" + std::to_string(j)}) << "\n";
            std::cout << "  E1:  " << evaluate(plan_entry_expr(p, i, j, D), p.series, D).str() << "\n";
        }
    std::cout << "pf = " << plan_pfaffian_e1(p, D, c.jobs).str() << "\n";
    return kOk;
}

void add_common(CLI::App* app, Common& c, bool index = true) {
    if (index) {
        app->add_option("--inv", c.inv, "involution, one-line (3,4,1,2 or 3412) or cycles ((1,3)(2,4))");
        app->add_option("--perm", c.perm, "permutation in one-line notation");
        app->add_option("--lambda", c.lambda, "partition, comma separated");
        app->add_option("--route", c.route, "computation route");
        app->add_option("--engine", c.engine, "orthogonal Pfaffian engine: e1 or e2");
    }
    app->add_option("--vars", c.vars, "number of x variables for symmetric series");
    app->add_option("--maxdeg", c.maxdeg, "degree bound (auto for Pfaffian routes when omitted)");
    app->add_option("--format", c.format, "text, latex or json")->check(CLI::IsMember({"text", "latex", "json"}));
    app->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Orthogonal and symplectic Grothendieck polynomials"};
    app.require_subcommand(1);
    Common c;

    std::string family;
    auto* compute_cmd = app.add_subcommand("compute", "compute one polynomial or truncated series");
    compute_cmd->add_option("family", family, "typeA, sp, o, G, GP, GQ, GQO or GPSp")->required();
    add_common(compute_cmd, c);

    std::string target, basis = "GP";
    bool report = false;
    auto* expand_cmd = app.add_subcommand("expand", "expand a target in G, GP, GQ or the Grothendieck basis");
    expand_cmd->add_option("--target", target, "product of family:index factors, e.g. GQ:1*GQ:1")->required();
    expand_cmd->add_option("--basis", basis, "G, GP, GQ or groth");
    expand_cmd->add_flag("--report-positivity", report, "exit 3 if a coefficient leaves N[beta]");
    add_common(expand_cmd, c, false);

    auto* atoms_cmd = app.add_subcommand("atoms", "Hecke atoms and atoms of a fixed-point-free involution");
    add_common(atoms_cmd, c);
    auto* diagram_cmd = app.add_subcommand("diagram", "diagrams, essential set and classification");
    add_common(diagram_cmd, c);

    std::vector<std::string> suites;
    bool all = false, list = false;
    auto* verify_cmd = app.add_subcommand("verify", "run named verification suites");
    verify_cmd->add_option("--suite", suites, "suite name (repeatable)");
    verify_cmd->add_flag("--all", all, "run every registered suite");
    verify_cmd->add_flag("--list", list, "list suite names");
    add_common(verify_cmd, c, false);

    auto* trace_cmd = app.add_subcommand("pfaffian-trace", "dump the Pfaffian entries of a vexillary involution");
    add_common(trace_cmd, c);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*compute_cmd) return run_compute(family, c);
        if (*expand_cmd) return run_expand(target, basis, c, report);
        if (*atoms_cmd) return run_atoms(c);
        if (*diagram_cmd) return run_diagram(c);
        if (*verify_cmd) {
            if (list) {
                for (const auto& s : suite_names()) std::cout << s << "\n";
                for (const auto& s : report_suite_names()) std::cout << s << " (report)\n";
                return kOk;
            }
            if (all) suites = suite_names();
            if (suites.empty()) throw UserError("verify: give --suite NAME, --all or --list");
            return run_verify(suites, c);
        }
        if (*trace_cmd) return run_trace(c);
    } catch (const Uncomputable& e) {
        return emit_uncomputable("", c.inv, e.what(), c.format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
    return kError;
}
