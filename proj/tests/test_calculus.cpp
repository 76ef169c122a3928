#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gale/calculus.hpp"
#include "oracles.hpp"

#include <random>

using namespace gale;

namespace {

const DemandSpec kGale = DemandSpec::gale();
const DemandSpec kSym = DemandSpec::symmetric_control();

// p = g(z) keeps Ap = z / z'Bz strictly positive.
Vec3d interior_price(const DemandSpec& spec, std::mt19937_64& rng) {
    return oracle::inverse_demand(spec.b_double(), oracle::uniform3(rng, 0.2, 2.0));
}

double max_abs(const Mat3d& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("Slutsky matrix of Gale's demand at the unit price") {
    PriceSystem<Rational> p(Rational(1), Rational(1), Rational(1));
    auto s = slutsky_analytic(kGale, p, Rational(3));
    CHECK(s.s(0, 1) == Rational(11, 3));
    CHECK(s.s(1, 0) == Rational(-1, 3));
    CHECK(Vec3q(s.s * p.vec()) == Vec3q::Zero());
    CHECK(s.s(0, 1) != s.s(1, 0));

    auto fd = slutsky_numeric(kGale, PriceSystem<double>(1.0, 1.0, 1.0), 3.0);
    CHECK(max_abs(fd.s - to_double(s.s)) <= 1e-4);
    CHECK(fd.mode == SlutskyMode::FiniteDifference);
    CHECK(s.truncated()(0, 1) == Rational(11, 3));
}

TEST_CASE("Slutsky matrix matches the closed form written out by hand") {
    // m [A/q - Ap p'A / q^2] at p = (1,1,1): q = 3, Ap = (1,1,1), p'A = (1,1,1).
    Mat3d a = to_double(oracle::gale_a());
    Mat3d expect = 3.0 * (a / 3.0 - Mat3d::Ones() / 9.0);
    auto s = slutsky_analytic(kGale, PriceSystem<double>(1.0, 1.0, 1.0), 3.0);
    CHECK(max_abs(s.s - expect) <= 1e-14);
}

TEST_CASE("analytic and finite-difference Slutsky agree at interior points") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> income(0.5, 5.0);
    for (const auto* spec : {&kGale, &kSym}) {
        for (int t = 0; t < 100; ++t) {
            PriceSystem<double> p(interior_price(*spec, rng));
            double m = income(rng);
            auto a = slutsky(*spec, p, m, SlutskyMode::Analytic);
            auto f = slutsky(*spec, p, m, SlutskyMode::FiniteDifference);
            CHECK(max_abs(a.s - f.s) <= 1e-5);
            CHECK((a.s * p.vec()).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, max_abs(a.s)));
        }
    }
}

TEST_CASE("symmetric family has a symmetric Slutsky matrix") {
    auto s = slutsky_analytic(kSym, PriceSystem<double>(1.0, 1.0, 1.0), 3.0);
    CHECK(max_abs(s.s - s.s.transpose()) <= 1e-8);
    auto q = slutsky_analytic(kSym, PriceSystem<Rational>(Rational(1), Rational(1), Rational(1)), Rational(3));
    CHECK(q.s == Mat3q(q.s.transpose()));
}

TEST_CASE("analytic mode needs the cone interior and finite differences report escaping steps") {
    CHECK_THROWS_AS(slutsky_analytic(kGale, PriceSystem<double>(8.0, 4.0, 2.0), 1.0), DomainError);
    Vec3d edge = oracle::inverse_demand(kGale.b_double(), Vec3d(1.0, 1.0, 1e-9));
    CHECK_THROWS_AS(slutsky_numeric(kGale, PriceSystem<double>(edge), 1.0), StepError);
    CHECK_NOTHROW(slutsky_numeric(kGale, PriceSystem<double>(edge), 1.0, 1e-12));
}

TEST_CASE("Jacobi residual of the scaled linear field") {
    Field h = scaled_linear_field(kGale);
    CHECK(jacobi_residual(h, Vec3d(1, 1, 1)) == doctest::Approx(-444).epsilon(1e-14));

    Mat3q m = oracle::gale_b() * Rational(37);
    Vec3q x(1, 1, 1);
    CHECK(jacobi_residual<Rational>(m * x, m, {0, 1, 2}) == -444);
    // A linear field's residual is h(x) . c with c read off the antisymmetric part.
    Vec3q c(m(1, 2) - m(2, 1), m(2, 0) - m(0, 2), m(0, 1) - m(1, 0));
    std::mt19937_64 rng(43);
    for (int t = 0; t < 50; ++t) {
        Vec3d xd = oracle::uniform3(rng, 0.1, 3.0);
        Vec3d hv = to_double(m) * xd;
        CHECK(jacobi_residual(h, xd) == doctest::Approx(hv.dot(to_double(c))).epsilon(1e-12));
    }
}

TEST_CASE("Jacobi residual vanishes with a repeated index and for symmetric fields") {
    std::mt19937_64 rng(47);
    Field g = inverse_demand_field(kGale);
    Field s = inverse_demand_field(kSym);
    Field lin = linear_field(to_double(oracle::sym_b()) * 37.0);
    CHECK(jacobi_residual(lin, Vec3d(1, 1, 1)) == 0.0);
    for (int t = 0; t < 100; ++t) {
        Vec3d x = oracle::uniform3(rng, 0.05, 4.0);
        CHECK(jacobi_residual(g, x, {0, 0, 2}) == 0.0);
        CHECK(jacobi_residual(g, x, {1, 2, 1}) == 0.0);
        CHECK(std::abs(jacobi_residual(s, x)) <= 1e-10);
        CHECK(std::abs(jacobi_residual(lin, x)) <= 1e-10);
        CHECK(jacobi_residual(g, x) < 0);
    }
}

TEST_CASE("residual is alternating in the index triple") {
    Field g = inverse_demand_field(kGale);
    Vec3d x(0.3, 1.7, 0.9);
    double r = jacobi_residual(g, x, {0, 1, 2});
    CHECK(jacobi_residual(g, x, {1, 2, 0}) == doctest::Approx(r));
    CHECK(jacobi_residual(g, x, {1, 0, 2}) == doctest::Approx(-r));
}

TEST_CASE("scaling a field multiplies its residual by lambda squared") {
    Field g = inverse_demand_field(kGale);
    const Mat3d b = kGale.b_double();
    auto lambda = [&](const Vec3d& x) { return 37.0 * x.dot(b * x); };
    auto grad = [&](const Vec3d& x) { return Vec3d(37.0 * (b + b.transpose()) * x); };
    auto r = scaling_invariance_check(g, lambda, grad, Vec3d(1, 1, 1));
    CHECK(r.lambda == doctest::Approx(111));
    CHECK(r.residual_h == doctest::Approx(-444));
    CHECK(r.residual_g == doctest::Approx(-444.0 / (111.0 * 111.0)));
    CHECK(r.consistent);

    // Brute force: same residuals from central differences of the raw maps.
    Field gn = numeric_field("g", g.value);
    Field hn = numeric_field("h", [&](const Vec3d& x) { return Vec3d(lambda(x) * g.value(x)); });
    CHECK(jacobi_residual(hn, Vec3d(1, 1, 1)) == doctest::Approx(-444).epsilon(1e-6));
    CHECK(jacobi_residual(gn, Vec3d(1, 1, 1)) == doctest::Approx(-4.0 / 111).epsilon(1e-6));

    auto one = scaling_invariance_check(g, [](const Vec3d&) { return 1.0; },
                                        [](const Vec3d&) { return Vec3d::Zero().eval(); }, Vec3d(0.4, 2, 1));
    CHECK(one.residual_h == one.residual_g);

    std::mt19937_64 rng(53);
    Field s = inverse_demand_field(kSym);
    for (int t = 0; t < 20; ++t) {
        Vec3d x = oracle::uniform3(rng, 0.1, 3.0);
        Vec3d c = oracle::uniform3(rng, -1.0, 1.0);
        auto lam = [c](const Vec3d& y) { return std::exp(c.dot(y)); };
        auto dl = [c](const Vec3d& y) { return Vec3d(std::exp(c.dot(y)) * c); };
        auto rs = scaling_invariance_check(s, lam, dl, x);
        CHECK(std::abs(rs.residual_h) <= 1e-8);
        CHECK(std::abs(rs.residual_g) <= 1e-8);
        auto rg = scaling_invariance_check(g, lam, dl, x);
        CHECK(rg.consistent);
    }
    CHECK_THROWS_AS(scaling_invariance_check(g, [](const Vec3d&) { return -1.0; },
                                             [](const Vec3d&) { return Vec3d::Zero().eval(); }, Vec3d(1, 1, 1)),
                    DomainError);
}

TEST_CASE("normalized fields reduce the condition to triples through the last good") {
    std::mt19937_64 rng(59);
    for (const auto* spec : {&kGale, &kSym}) {
        Field k = normalized_field(inverse_demand_field(*spec));
        for (int t = 0; t < 50; ++t) {
            Vec3d x = oracle::uniform3(rng, 0.1, 3.0);
            CHECK(k.value(x)(2) == doctest::Approx(1.0));
            CHECK(k.jacobian(x).row(2).cwiseAbs().maxCoeff() <= 1e-12);
            double full = 0;
            for (IndexTriple tr : {IndexTriple{0, 1, 2}, IndexTriple{1, 2, 0}, IndexTriple{2, 0, 1}})
                full = std::max(full, std::abs(jacobi_residual(k, x, tr)));
            double reduced = std::abs(jacobi_residual(k, x, {0, 1, 2}));
            bool full_zero = full <= 1e-10, reduced_zero = reduced <= 1e-10;
            CHECK(full_zero == reduced_zero);
            CHECK(full_zero == spec->symmetric());
        }
    }
    // A hand-built asymmetric field with third component 1.
    Field f = numeric_field("f", [](const Vec3d& x) { return Vec3d(x(1) * x(2), 2 * x(0), 1.0); });
    CHECK(std::abs(jacobi_residual(f, Vec3d(1, 2, 3))) > 1e-3);
}

TEST_CASE("Antonelli symmetry is equivalent to the Jacobi condition") {
    Field g = inverse_demand_field(kGale);
    Field s = inverse_demand_field(kSym);
    Mat2d ag = antonelli(g, Vec3d(1, 1, 1));
    CHECK(std::abs(ag(0, 1) - ag(1, 0)) > 1e-3);
    Mat2d as = antonelli(s, Vec3d(1, 1, 1));
    CHECK(std::abs(as(0, 1) - as(1, 0)) <= 1e-8);

    std::mt19937_64 rng(61);
    const double tol = 1e-9;
    for (const auto* spec : {&kGale, &kSym}) {
        Field f = inverse_demand_field(*spec);
        for (int t = 0; t < 100; ++t) {
            Vec3d x = oracle::uniform3(rng, 0.1, 3.0);
            Mat2d a = antonelli(f, x);
            Vec3d gv = f.value(x);
            double r = jacobi_residual(f, x);
            // a_12 - a_21 = r / g_3^2
            double lhs = a(0, 1) - a(1, 0), rhs = r / (gv(2) * gv(2));
            CHECK(std::abs(lhs - rhs) <= 1e-12 + 1e-8 * std::abs(rhs));
            double scale = gv(2) * gv(2);
            CHECK((std::abs(a(0, 1) - a(1, 0)) <= tol) == (std::abs(r) <= tol * scale));
        }
    }
    CHECK_THROWS_AS(antonelli<double>(Vec3d(1, 1, 0), Mat3d::Identity()), DomainError);
}

TEST_CASE("inverse Antonelli matrix equals the truncated Slutsky matrix") {
    auto unit = antonelli_inverse_check(kGale, Vec3d(1, 1, 1));
    CHECK(unit.residual <= 1e-6);
    CHECK(unit.p.isApprox(Vec3d(1, 1, 1)));
    CHECK(unit.m == doctest::Approx(3));

    std::mt19937_64 rng(67);
    for (const auto* spec : {&kGale, &kSym})
        for (int t = 0; t < 100; ++t) {
            auto r = antonelli_inverse_check(*spec, oracle::uniform3(rng, 0.05, 5.0));
            CHECK(r.residual <= 1e-6 * std::max(1.0, r.slutsky_truncated.cwiseAbs().maxCoeff()));
        }
    CHECK_THROWS_AS(antonelli_inverse_check(kGale, Vec3d(1, 0, 1)), DomainError);
}

TEST_CASE("Slutsky asymmetry tracks Jacobi violations") {
    std::mt19937_64 rng(71);
    for (const auto* spec : {&kGale, &kSym}) {
        Field g = inverse_demand_field(*spec);
        for (int t = 0; t < 100; ++t) {
            Vec3d x = oracle::uniform3(rng, 0.1, 3.0);
            Vec3d k = g.value(x) / g.value(x)(2);
            auto s = slutsky_analytic(*spec, PriceSystem<double>(k), k.dot(x));
            bool asym = max_abs(s.s - s.s.transpose()) > 1e-9 * std::max(1.0, max_abs(s.s));
            bool violated = std::abs(jacobi_residual(g, x)) > 1e-10;
            CHECK(asym == violated);
        }
    }
}

TEST_CASE("bordered determinants at the unit bundle") {
    Mat3q m = oracle::gale_b() * Rational(37);
    Vec3q h = m * Vec3q(1, 1, 1);
    auto d = bordered_determinants<Rational>(m, h);
    CHECK(d.order3 == 37 * 37 * 10);
    CHECK(d.order3 == 13690);
    CHECK(d.order4 < 0);
    // (h_2)^2 (-9t^2 + 28t - 9) at t = 1.
    CHECK(Rational(-9 + 28 - 9) * h(1) * h(1) == d.order3);

    std::mt19937_64 rng(73);
    auto r = tangent_definiteness(inverse_demand_field(kGale), Vec3d(1, 1, 1), rng);
    CHECK(r.verdict == Definiteness::NegativeDefinite);
    CHECK(r.agree);
}

TEST_CASE("Gale's inverse demand is negative definite on the tangent plane") {
    std::mt19937_64 rng(79);
    Field g = inverse_demand_field(kGale);
    int bad = 0;
    for (int t = 0; t < 1000; ++t) {
        auto r = tangent_definiteness(g, oracle::uniform3(rng, 0.01, 10.0), rng, 32);
        bad += !(r.verdict == Definiteness::NegativeDefinite && r.agree);
    }
    CHECK(bad == 0);
    std::uniform_real_distribution<double> t(9.0 / 16, 4.0 / 3);
    for (int i = 0; i < 1000; ++i) {
        double s = t(rng);
        CHECK(-9 * s * s + 28 * s - 9 > 0);
    }
}

TEST_CASE("identity Jacobian is indefinite and a flat field is degenerate") {
    std::mt19937_64 rng(83);
    Field id = affine_field(Mat3d::Identity(), Vec3d(1, 1, 1) / 3.0 - Vec3d(1, 1, 1));
    auto r = tangent_definiteness(id, Vec3d(1, 1, 1), rng);
    CHECK(id.value(Vec3d(1, 1, 1)).isApprox(Vec3d(1, 1, 1) / 3.0));
    CHECK(r.verdict == Definiteness::Indefinite);
    CHECK(r.sampled == Definiteness::Indefinite);
    Field flat = affine_field(Mat3d::Zero(), Vec3d(1, 1, 1));
    CHECK(tangent_definiteness(flat, Vec3d(1, 1, 1), rng).verdict == Definiteness::Degenerate);
    CHECK(to_string(Definiteness::NegativeDefinite) == "negative-definite");
}

TEST_CASE("expenditure function of the symmetric family") {
    const Mat3d b = kSym.b_double();
    auto unit = expenditure_numeric(kSym, Vec3d(1, 1, 1), Vec3d(1, 1, 1) / 3.0);
    CHECK(unit.value == doctest::Approx(1).epsilon(1e-9));
    CHECK(unit.minimizer.isApprox(Vec3d(1, 1, 1), 1e-5));

    std::mt19937_64 rng(89);
    for (int t = 0; t < 20; ++t) {
        Vec3d x = oracle::uniform3(rng, 0.2, 3.0);
        Vec3d p = interior_price(kSym, rng);
        double e = expenditure_numeric(kSym, x, p).value;
        CHECK(e == doctest::Approx(oracle::quadric_expenditure(b, x, p)).epsilon(1e-8));
        CHECK(expenditure_numeric(kSym, x, Vec3d(2 * p)).value == doctest::Approx(2 * e).epsilon(1e-8));
        Vec3d k = oracle::inverse_demand(b, x);
        k /= k(2);
        CHECK(expenditure_numeric(kSym, x, k).value == doctest::Approx(k.dot(x)).epsilon(1e-8));
    }
    CHECK_THROWS_AS(expenditure_numeric(kGale, Vec3d(1, 1, 1), Vec3d(1, 1, 1)), DomainError);
    ExpenditureOptions starved;
    starved.max_iterations = 1;
    starved.restarts = 1;
    CHECK_THROWS_AS(expenditure_numeric(kSym, Vec3d(1, 2, 3), Vec3d(0.5, 0.2, 0.3), starved), ConvergenceError);
}

TEST_CASE("expenditure survives starts far from the minimizer") {
    const Mat3d b = kSym.b_double();
    std::mt19937_64 rng(12);
    for (int t = 0; t < 200; ++t) {
        Vec3d x = oracle::uniform3(rng, 0.3, 2.0);
        Vec3d p = interior_price(kSym, rng);
        ExpenditureOptions o;
        o.seed = t;
        CHECK(expenditure_numeric(kSym, x, p, o).value ==
              doctest::Approx(oracle::quadric_expenditure(b, x, p)).epsilon(1e-9));
    }
}

TEST_CASE("Shephard identity and concavity on the symmetric family") {
    auto unit = shephard_check(kSym, Vec3d(1, 1, 1), Vec3d(1, 1, 1) / 3.0);
    CHECK(unit.residual <= 1e-4);
    std::mt19937_64 rng(97);
    for (int t = 0; t < 10; ++t) {
        Vec3d x = oracle::uniform3(rng, 0.3, 2.0);
        auto r = shephard_check(kSym, x, interior_price(kSym, rng));
        CHECK(r.residual <= 1e-4);
    }
    auto c = concavity_check(kSym, Vec3d(1, 2, 0.5), rng, 100);
    CHECK(c.trials == 100);
    CHECK(c.failures == 0);
}
