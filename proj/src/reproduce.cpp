#include "gale/reproduce.hpp"

#include "gale/calculus.hpp"
#include "gale/io.hpp"
#include "gale/paths.hpp"

#include <cmath>
#include <random>

namespace gale {

namespace {

std::string idx(int i) { return std::to_string(i + 1); }

void demand_group(Report& r) {
    const auto spec = DemandSpec::gale();
    const auto table = gale_table();
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto& o = table.rows[i];
        auto ev = trace_demand(spec, o.p, o.m);
        r.check("table row " + idx(int(i)) + ": f(p, m) = x", ev.bundle == o.x.vec(), to_string(ev.bundle(0)) + ", " +
                                                                                       to_string(ev.bundle(1)) + ", " +
                                                                                       to_string(ev.bundle(2)));
        r.check("table row " + idx(int(i)) + ": Walras' law on p_bar", ev.walras_residual == 0);
    }
    auto x1 = gale_demand(spec, PriceSystem<Rational>(18, 32, 24), Rational(18));
    r.check("homogeneity: f(2p, 2m) = f(p, m)", x1.vec() == Vec3q(1, 0, 0));
    r.check("p in C gives p_bar = p", normalize_price(spec, PriceSystem<Rational>(1, 1, 1)).vec() == Vec3q(1, 1, 1));
    Bundle<Rational> ones(1, 1, 1);
    auto g = inverse_demand(spec, ones);
    r.add("g(1,1,1)", encode(g.vec()));
    r.check("f(g(x), g(x).x) = x at x = (1,1,1)", gale_demand(spec, g, Rational(g.vec().dot(ones.vec()))) == ones);
}

void axioms_group(Report& r) {
    const auto table = gale_table();
    const auto& rows = table.rows;
    Rational d12 = rows[0].p.vec().dot(rows[1].x.vec());
    Rational d23 = rows[1].p.vec().dot(rows[2].x.vec());
    Rational d34 = rows[2].p.vec().dot(rows[3].x.vec());
    r.add("p1.x2", encode(d12));
    r.add("p2.x3", encode(d23));
    r.add("p3.x4", encode(d34));
    r.check("p1.x2 = 9, p2.x3 = 300, p3.x4 = 300", d12 == 9 && d23 == 300 && d34 == 300);
    auto rel = direct_revealed(table);
    bool chain = true;
    for (int i = 0; i + 1 < 10; ++i) chain = chain && rel.has_edge(i, i + 1);
    r.check("x^i revealed preferred to x^(i+1), i = 1..9", chain);
    auto warp = check_warp(rel);
    r.check("weak axiom holds on the table", warp.pass);
    auto sarp = check_sarp(rel);
    Json cyc = Json::array();
    for (int i : sarp.cycle) cyc.push_back(i + 1);
    r.add("sarp cycle", cyc);
    std::vector<int> all(10);
    for (int i = 0; i < 10; ++i) all[i] = i;
    r.check("strong axiom fails with a cycle through all ten rows", !sarp.pass && sarp.cycle == all);
    auto closure = transitive_closure(rel);
    r.check("(0,0,1) indirectly revealed preferred to (1,0,0) and conversely",
            closure.has_edge(3, 9) && closure.has_edge(0, 3));
}

void slutsky_group(Report& r) {
    const auto spec = DemandSpec::gale();
    auto s = slutsky_analytic(spec, PriceSystem<Rational>(1, 1, 1), Rational(3));
    r.add("slutsky", encode(s.s));
    r.add("s12", encode(s.s(0, 1)));
    r.add("s21", encode(s.s(1, 0)));
    r.check("s12 = 11/3", s.s(0, 1) == Rational(11, 3));
    r.check("s21 = -1/3", s.s(1, 0) == Rational(-1, 3));
    r.check("S p = 0", (s.s * Vec3q(1, 1, 1)).isZero());
    auto fd = slutsky_numeric(spec, PriceSystem<double>(1, 1, 1), 3.0);
    double diff = (fd.s - to_double(s.s)).cwiseAbs().maxCoeff();
    r.add("finite-difference deviation", diff, 1e-4);
    r.check("finite differences agree within 1e-4", diff <= 1e-4);
}

void jacobi_group(Report& r) {
    for (const auto& spec : {DemandSpec::gale(), DemandSpec::symmetric_control()}) {
        Mat3q h = spec.b() * spec.b_denominator();
        Vec3q x(1, 1, 1);
        Rational rh = jacobi_residual<Rational>(Vec3q(h * x), h, {0, 1, 2});
        Rational rg = jacobi_residual<Rational>(inverse_demand_value<Rational>(spec.b(), x),
                                                inverse_demand_jacobian<Rational>(spec.b(), x), {0, 1, 2});
        Rational lambda = spec.b_denominator() * x.dot(spec.b() * x);
        r.add(spec.name() + " residual of h", encode(rh));
        r.add(spec.name() + " residual of g", encode(rg));
        if (spec.is_gale()) {
            r.check("Gale: residual of the linear field is -444", rh == -444);
            r.check("Gale: residual_h = lambda^2 residual_g with lambda = 111", lambda == 111 && rh == lambda * lambda * rg);
        } else {
            r.check("symmetric control: residual vanishes", rh == 0 && rg == 0);
        }
    }
}

void antonelli_group(Report& r) {
    for (const auto& spec : {DemandSpec::gale(), DemandSpec::symmetric_control()}) {
        auto l = antonelli_inverse_check(spec, Vec3d(1, 1, 1));
        r.add(spec.name() + " inverse Antonelli minus truncated Slutsky", l.residual, 1e-6);
        r.check(spec.name() + ": A_g^-1 = truncated Slutsky at x = (1,1,1)", l.residual <= 1e-6);
    }
}

void definiteness_group(Report& r, std::uint64_t seed) {
    const auto spec = DemandSpec::gale();
    Mat3q h = spec.b() * spec.b_denominator();
    Vec3q x(1, 1, 1);
    auto dets = bordered_determinants<Rational>(h, Vec3q(h * x));
    r.add("bordered determinant (order 3)", encode(dets.order3));
    r.add("bordered determinant (order 4)", encode(dets.order4));
    r.check("order-3 bordered determinant = 37^2 * 10", dets.order3 == 13690);
    r.check("bordered signs (+, -) at (1,1,1)", dets.order3 > 0 && dets.order4 < 0);
    bool poly = true;
    for (int i = 0; i <= 1000; ++i) {
        double t = 9.0 / 16 + (4.0 / 3 - 9.0 / 16) * i / 1000;
        poly = poly && (-9 * t * t + 28 * t - 9 > 0);
    }
    r.check("-9t^2 + 28t - 9 > 0 on [9/16, 4/3]", poly);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.05, 5.0);
    Field g = inverse_demand_field(spec);
    int neg = 0, n = 200;
    for (int i = 0; i < n; ++i) {
        auto rep = tangent_definiteness(g, Vec3d(u(rng), u(rng), u(rng)), rng, 16);
        neg += rep.verdict == Definiteness::NegativeDefinite && rep.agree;
    }
    r.check("w'Dg(x)w < 0 on g(x)-perp at random x", neg == n, std::to_string(neg) + "/" + std::to_string(n));
}

void shephard_group(Report& r, std::uint64_t seed) {
    const auto spec = DemandSpec::symmetric_control();
    const Mat3d b = spec.b_double();
    Vec3d x(0.7, 1.2, 0.9);
    Vec3d g = inverse_demand_value(b, x);
    Vec3d k = g / g(2);
    double e = expenditure_numeric(spec, x, k).value;
    r.add("E^x(k(x))", e, 1e-9);
    r.check("E^x(p*) = m* when x = f(p*, m*)", std::abs(e - k.dot(x)) <= 1e-9 * k.dot(x));
    auto sh = shephard_check(spec, x, Vec3d(inverse_demand_value(b, Vec3d(1.0, 0.6, 1.3))));
    r.add("Shephard gradient residual", sh.residual, 1e-4);
    r.check("grad E^x(p) = f(p, E^x(p))", sh.residual <= 1e-4);
    std::mt19937_64 rng(seed);
    auto cc = concavity_check(spec, x, rng, 20);
    r.check("E^x is midpoint concave", cc.failures == 0, std::to_string(cc.trials) + " pairs");
    auto s = slutsky_analytic(DemandSpec::gale(), PriceSystem<Rational>(1, 1, 1), Rational(3));
    r.check("Gale: Slutsky symmetry forced by Shephard's lemma fails", s.s(0, 1) != s.s(1, 0));
}

void paths_group(Report& r, double tol) {
    Field g = inverse_demand_field(DemandSpec::gale());
    Vec3d x(1.0, 0.4, 0.7), v(0.3, 0.9, 0.6);
    double uxx = ug(g, x, x);
    r.add("u(x, x)", uxx, 1e-8);
    r.check("u(x, x) = 1", std::abs(uxx - 1) <= 1e-8);
    for (double t : {0.5, 2.0}) {
        double u = ug(g, Vec3d(t * v), v);
        r.check("u(tv, v) = t for t = " + to_string(t), std::abs(u - t) <= 1e-7);
    }
    r.check("1.1 x is preferred to x", prefers(g, x, Vec3d(1.1 * x), tol) == Preference::SecondPreferred);
    Vec3d z = 0.4 * x + 0.8 * v;
    auto tw = samuelson_tower(g, x, v, z);
    r.add("coplanar tower c", tw.c, 1e-5);
    r.check("Gale: coplanar tower closes (c = 1)", std::abs(tw.c - 1) <= 1e-5);
    Field gs = inverse_demand_field(DemandSpec::symmetric_control());
    auto ts = samuelson_tower(gs, x, v, Vec3d(0.5, 0.5, 1.2));
    r.add("symmetric tower c", ts.c, 1e-5);
    r.check("symmetric control: tower closes (c = 1)", std::abs(ts.c - 1) <= 1e-5);
}

void cycles_group(Report& r, std::uint64_t seed, double tol) {
    Field g = inverse_demand_field(DemandSpec::gale());
    SearchOptions so;
    so.seed = seed;
    auto rep = find_intransitivity(g, so);
    r.add("open-cycle coefficient c", rep.tower.c, 1e-6);
    r.check("Gale: some tower does not close (|c - 1| > 1e-3)", rep.triple && rep.deviation > 1e-3);
    if (!rep.triple) return;
    try {
        auto vc = ville_cycle(g, witness_from_tower(*rep.triple, rep.tower), {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}, tol);
        r.add("Ville epsilon", vc.epsilon);
        r.add("Ville gamma", vc.gamma, 1e-6);
        r.add("Ville min g(x(t)).x'(t)", vc.min_certificate, 1e-9);
        r.check("closed curve with g(x(t)).x'(t) > 0 exists", vc.min_certificate > 0 && vc.closure_error <= 1e-8);
    } catch (const std::exception& e) {
        r.check("closed curve with g(x(t)).x'(t) > 0 exists", false, e.what());
    }
}

} // namespace

const std::vector<std::string>& reproduce_groups() {
    static const std::vector<std::string> groups = {"demand", "axioms",       "slutsky",  "jacobi", "lemma6",
                                                    "definiteness", "shephard", "paths", "cycles"};
    return groups;
}

Report reproduce(const ReproduceOptions& opts) {
    const auto& groups = reproduce_groups();
    if (opts.only && std::find(groups.begin(), groups.end(), *opts.only) == groups.end())
        throw std::invalid_argument("unknown group '" + *opts.only + "'");
    Report r;
    r.command = "reproduce";
    r.inputs["only"] = opts.only ? Json(*opts.only) : Json(nullptr);
    r.inputs["seed"] = opts.seed;
    r.inputs["tol"] = opts.tol;
    auto want = [&](const char* g) { return !opts.only || *opts.only == g; };
    if (want("demand")) demand_group(r);
    if (want("axioms")) axioms_group(r);
    if (want("slutsky")) slutsky_group(r);
    if (want("jacobi")) jacobi_group(r);
    if (want("lemma6")) antonelli_group(r);
    if (want("definiteness")) definiteness_group(r, opts.seed);
    if (want("shephard")) shephard_group(r, opts.seed);
    if (want("paths")) paths_group(r, opts.tol);
    if (want("cycles")) cycles_group(r, opts.seed, opts.tol);
    return r;
}

} // namespace gale
