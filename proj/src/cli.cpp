#include "gale/cli.hpp"

#include "gale/calculus.hpp"
#include "gale/io.hpp"
#include "gale/reproduce.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>

namespace gale {

namespace {

constexpr int kInternal = 3;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    bool json = false;
    std::uint64_t seed = 1;
    double tol = 1e-7;
    std::string spec = "gale";
};

DemandSpec load_spec(const std::string& s) {
    if (s == "gale") return DemandSpec::gale();
    if (s == "symmetric") return DemandSpec::symmetric_control();
    return DemandSpec::from_matrix(read_matrix_file(s));
}

Rational literal(const std::string& s, const char* what) {
    try {
        return parse_rational(s);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string(what) + ": " + e.what());
    }
}

Vec3q vec3q(const std::vector<std::string>& v, std::size_t at, const char* what) {
    return Vec3q(literal(v.at(at), what), literal(v.at(at + 1), what), literal(v.at(at + 2), what));
}

Vec3d positive3(const std::vector<std::string>& v, std::size_t at, const char* what) {
    Vec3d out = to_double(vec3q(v, at, what));
    if (!(out.array() > 0).all()) throw UsageError(std::string(what) + " must be strictly positive");
    return out;
}

Json one_based(const std::vector<int>& idx) {
    Json j = Json::array();
    for (int i : idx) j.push_back(i + 1);
    return j;
}

Json strings(const std::vector<std::string>& v) {
    Json j = Json::array();
    for (const auto& s : v) j.push_back(s);
    return j;
}

void emit(const Report& r, const Globals& g, std::ostream& out) {
    if (g.json)
        out << r.to_json().dump(2) << '\n';
    else
        out << r.to_text();
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream f(path);
    if (!f) throw UsageError("cannot write " + path);
    body(f);
}

int cmd_demand(const Globals& g, const std::vector<std::string>& prices, const std::string& income, std::ostream& out) {
    Vec3q p = vec3q(prices, 0, "price");
    Rational m = literal(income, "income");
    if (!(p.array() > Rational(0)).all()) throw UsageError("prices must be strictly positive");
    if (!(m > 0)) throw UsageError("income must be positive");
    DemandSpec spec = load_spec(g.spec);
    Report r;
    r.command = "demand";
    r.inputs = {{"p", strings(prices)}, {"income", income}, {"spec", spec.name()}};
    auto ev = trace_demand(spec, PriceSystem<Rational>(p), m);
    r.add("bundle", encode(ev.bundle));
    r.add("normalized price", encode(ev.normalized_price));
    if (ev.price_case) r.add("case", to_string(*ev.price_case));
    r.add("walras residual", encode(ev.walras_residual));
    r.add("cost at p", encode(Rational(p.dot(ev.bundle))));
    r.check("Walras' law on the normalized price", ev.walras_residual == 0);
    r.check("budget feasibility p.x <= m", p.dot(ev.bundle) <= m);
    emit(r, g, out);
    return 0;
}

int cmd_axioms(const Globals& g, const std::string& file, const std::string& check, std::ostream& out) {
    Dataset<Rational> data = read_observations_file(file);
    RevealedRelation rel = direct_revealed(data);
    Report r;
    r.command = "axioms";
    r.inputs = {{"file", file}, {"check", check}};
    r.add("observations", data.size());
    Json edges = Json::array();
    for (auto [i, j] : rel.edges()) edges.push_back({i + 1, j + 1});
    r.add("revealed edges", edges);
    bool pass = true;
    if (check == "warp") {
        auto v = check_warp(rel);
        pass = v.pass;
        r.add("verdict", pass ? "pass" : "violation");
        if (v.violation) r.add("witness", Json::array({v.violation->first + 1, v.violation->second + 1}));
    } else if (check == "sarp") {
        auto v = check_sarp(rel);
        pass = v.pass;
        r.add("verdict", pass ? "pass" : "cycle");
        if (!pass) {
            r.add("cycle", one_based(v.cycle));
            r.add("cycle length", v.cycle.size());
            r.add("shortest cycle", one_based(shortest_sarp_cycle(rel).cycle));
        }
    } else {
        try {
            r.add("order", one_based(extend_to_total_order(rel)));
            r.add("verdict", "pass");
        } catch (const CycleError& e) {
            pass = false;
            r.add("verdict", "cycle");
            r.add("cycle", one_based(e.cycle()));
        }
    }
    r.check(check + " holds", pass);
    emit(r, g, out);
    return pass ? 0 : 1;
}

int cmd_diagnose(const Globals& g, const std::vector<std::string>& at, const std::vector<std::string>& bundle,
                 const std::string& test, std::ostream& out) {
    DemandSpec spec = load_spec(g.spec);
    Report r;
    r.command = "diagnose";
    r.inputs = {{"test", test}, {"spec", spec.name()}};
    if (test == "slutsky") {
        if (at.size() != 4) throw UsageError("--test slutsky needs --at p1 p2 p3 m");
        Vec3q p = vec3q(at, 0, "price");
        Rational m = literal(at[3], "income");
        if (!(p.array() > Rational(0)).all() || !(m > 0)) throw UsageError("--at values must be positive");
        r.inputs["at"] = strings(at);
        auto s = slutsky_analytic(spec, PriceSystem<Rational>(p), m);
        r.add("slutsky", encode(s.s));
        r.add("s12", encode(s.s(0, 1)));
        r.add("s21", encode(s.s(1, 0)));
        r.add("S p", encode(Vec3q(s.s * p)));
        auto fd = slutsky_numeric(spec, PriceSystem<double>(to_double(p)), to_double(m));
        r.add("finite-difference slutsky", encode(fd.s), 1e-5);
        bool sym = s.s == s.s.transpose();
        r.add("verdict", sym ? "SYMMETRIC" : "ASYMMETRIC");
        r.check("S p = 0", (s.s * p).isZero());
    } else {
        if (bundle.size() != 3) throw UsageError("--test " + test + " needs --bundle x1 x2 x3");
        Vec3q x = vec3q(bundle, 0, "bundle");
        if (!(x.array() > Rational(0)).all()) throw UsageError("bundle must be strictly positive");
        r.inputs["bundle"] = strings(bundle);
        Rational d = spec.b_denominator();
        Mat3q h = spec.b() * d;
        if (test == "jacobi") {
            Rational rh = jacobi_residual<Rational>(Vec3q(h * x), h, {0, 1, 2});
            Rational rg = jacobi_residual<Rational>(inverse_demand_value<Rational>(spec.b(), x),
                                                    inverse_demand_jacobian<Rational>(spec.b(), x), {0, 1, 2});
            Rational lambda = d * x.dot(spec.b() * x);
            r.add("scale d", encode(d));
            r.add("residual of h = dBx", encode(rh));
            r.add("residual of g", encode(rg));
            r.add("lambda = d x'Bx", encode(lambda));
            r.add("verdict", rh == 0 ? "INTEGRABLE" : "VIOLATED");
            r.check("residual_h = lambda^2 residual_g", rh == lambda * lambda * rg);
        } else if (test == "definiteness") {
            auto dets = bordered_determinants<Rational>(h, Vec3q(h * x));
            r.add("bordered determinant (order 3) of h", encode(dets.order3));
            r.add("bordered determinant (order 4) of h", encode(dets.order4));
            std::mt19937_64 rng(g.seed);
            auto rep = tangent_definiteness(inverse_demand_field(spec), to_double(x), rng, 256);
            r.add("verdict", to_string(rep.verdict));
            r.add("sampled verdict", to_string(rep.sampled));
            r.add("max sampled w'Dg w", rep.max_sampled_form, 1e-12);
            r.check("determinant and sampling verdicts agree", rep.agree);
        } else if (test == "lemma6") {
            auto l = antonelli_inverse_check(spec, to_double(x));
            r.add("inverse antonelli", encode(l.antonelli_inverse), 1e-6);
            r.add("truncated slutsky", encode(l.slutsky_truncated), 1e-6);
            r.add("residual", l.residual, 1e-6);
            r.check("residual <= 1e-6", l.residual <= 1e-6);
        } else {
            throw UsageError("unknown test '" + test + "'");
        }
    }
    emit(r, g, out);
    return 0;
}

struct PathArgs {
    std::vector<std::string> trace, tower;
    bool search = false;
    std::string ville;
    std::string out_file;
    int samples = 1000;
};

int cmd_paths(const Globals& g, const PathArgs& a, std::ostream& out) {
    DemandSpec spec = load_spec(g.spec);
    Field field = inverse_demand_field(spec);
    Report r;
    r.command = "paths";
    r.inputs["spec"] = spec.name();
    int code = 0;
    if (!a.trace.empty()) {
        r.inputs["trace"] = strings(a.trace);
        Vec3d x = positive3(a.trace, 0, "x"), v = positive3(a.trace, 3, "v");
        auto p = trace_path(field, x, v);
        r.add("u", p.u_value, 1e-10);
        r.add("t_stop", p.t_stop, 1e-12);
        r.add("terminal", encode(p.terminal), 1e-10);
        r.add("samples", p.samples.size());
        r.add("preference", to_string(prefers(field, x, v, g.tol)));
        if (!a.out_file.empty()) write_file(a.out_file, [&](std::ostream& f) { write_curve(f, p.samples); });
    } else if (!a.tower.empty() || a.search) {
        Triple t;
        Tower tw;
        if (a.search) {
            SearchOptions so;
            so.samples = a.samples;
            so.seed = g.seed;
            auto rep = find_intransitivity(field, so);
            r.inputs["search samples"] = a.samples;
            if (!rep.triple) throw UsageError("search budget produced no triple");
            t = *rep.triple;
            tw = rep.tower;
            r.add("x", encode(t.x));
            r.add("y", encode(t.y));
            r.add("z", encode(t.z));
        } else {
            r.inputs["tower"] = strings(a.tower);
            t = {positive3(a.tower, 0, "x"), positive3(a.tower, 3, "y"), positive3(a.tower, 6, "z")};
            tw = samuelson_tower(field, t.x, t.y, t.z);
        }
        r.add("a", tw.a, 1e-9);
        r.add("b", tw.b, 1e-9);
        r.add("c", tw.c, 1e-9);
        r.add("|c - 1|", std::abs(tw.c - 1), 1e-9);
        r.add("verdict", std::abs(tw.c - 1) > 1e-5 ? "OPEN" : "CLOSED");
    } else if (!a.ville.empty()) {
        if (a.ville != "auto") throw UsageError("--ville only supports 'auto'");
        SearchOptions so;
        so.samples = a.samples;
        so.seed = g.seed;
        auto rep = find_intransitivity(field, so);
        r.add("|c - 1|", rep.deviation, 1e-9);
        try {
            if (!rep.triple) throw DomainError("no candidate triple");
            Triple w = witness_from_tower(*rep.triple, rep.tower);
            auto vc = ville_cycle(field, w, {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}, g.tol);
            r.add("x", encode(w.x));
            r.add("y", encode(w.y));
            r.add("z", encode(w.z));
            r.add("epsilon", vc.epsilon);
            r.add("alpha", vc.alpha, 1e-9);
            r.add("beta", vc.beta, 1e-9);
            r.add("gamma", vc.gamma, 1e-9);
            r.add("min g(x(t)).x'(t)", vc.min_certificate, 1e-9);
            r.add("closure error", vc.closure_error, 1e-8);
            r.add("samples", vc.curve.size());
            r.check("certificate positive along the curve", vc.min_certificate > 0);
            if (!a.out_file.empty()) write_file(a.out_file, [&](std::ostream& f) { write_curve(f, vc.curve); });
        } catch (const DomainError& e) {
            r.add("verdict", "REJECTED");
            r.check("intransitive witness found", false, e.what());
            code = 1;
        }
    } else {
        throw UsageError("paths needs one of --trace, --tower, --search, --ville");
    }
    emit(r, g, out);
    return code;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gale's demand example: revealed preference, integrability and recovered preferences"};
    app.require_subcommand(1);
    Globals g;
    app.add_flag("--json", g.json, "Emit the report as JSON");
    app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
    app.add_option("--tol", g.tol, "Indifference tolerance")->capture_default_str();
    app.add_option("--spec", g.spec, "gale, symmetric, or a matrix file for A")->capture_default_str();

    auto* demand = app.add_subcommand("demand", "Evaluate Gale's demand at (p, m)");
    std::vector<std::string> prices;
    std::string income;
    demand->add_option("prices", prices, "p1 p2 p3")->expected(3)->required();
    demand->add_option("--income,-m", income, "Income m")->required();

    auto* axioms = app.add_subcommand("axioms", "Check revealed-preference axioms on an observation CSV");
    std::string file, check = "sarp";
    axioms->add_option("file", file, "CSV with header p1,p2,p3,m,x1,x2,x3")->required();
    axioms->add_option("--check", check)->check(CLI::IsMember({"warp", "sarp", "extend"}))->capture_default_str();

    auto* diagnose = app.add_subcommand("diagnose", "Integrability diagnostics");
    std::vector<std::string> at, bundle;
    std::string test;
    auto* at_opt = diagnose->add_option("--at", at, "p1 p2 p3 m")->expected(4);
    auto* bundle_opt = diagnose->add_option("--bundle", bundle, "x1 x2 x3")->expected(3);
    at_opt->excludes(bundle_opt);
    diagnose->add_option("--test", test)
        ->check(CLI::IsMember({"slutsky", "jacobi", "definiteness", "lemma6"}))
        ->required();

    auto* paths = app.add_subcommand("paths", "Compensated paths, towers and Ville cycles");
    PathArgs pa;
    auto* trace_opt = paths->add_option("--trace", pa.trace, "x1 x2 x3 v1 v2 v3")->expected(6);
    auto* tower_opt = paths->add_option("--tower", pa.tower, "x y z (nine values)")->expected(9);
    auto* search_opt = paths->add_flag("--search", pa.search, "Search for the least closed tower");
    auto* ville_opt = paths->add_option("--ville", pa.ville, "auto");
    paths->add_option("--out", pa.out_file, "Curve CSV t,y1,y2,y3");
    paths->add_option("--samples", pa.samples, "Search budget")->capture_default_str();
    trace_opt->excludes(tower_opt)->excludes(search_opt)->excludes(ville_opt);
    tower_opt->excludes(search_opt)->excludes(ville_opt);
    search_opt->excludes(ville_opt);

    auto* repro = app.add_subcommand("reproduce", "Run the published numeric claims as one suite");
    std::string only;
    repro->add_option("--only", only, "Single group")->check(CLI::IsMember(reproduce_groups()));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kUsage;
    }

    try {
        if (demand->parsed()) return cmd_demand(g, prices, income, out);
        if (axioms->parsed()) return cmd_axioms(g, file, check, out);
        if (diagnose->parsed()) return cmd_diagnose(g, at, bundle, test, out);
        if (paths->parsed()) return cmd_paths(g, pa, out);
        ReproduceOptions ro;
        if (!only.empty()) ro.only = only;
        ro.seed = g.seed;
        ro.tol = g.tol;
        Report r = reproduce(ro);
        emit(r, g, out);
        return r.all_pass() ? 0 : 1;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kUsage;
}

} // namespace gale
