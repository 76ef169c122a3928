#include "gale/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gale {

template <class T> SlutskyMatrix<T> slutsky_analytic(const DemandSpec& spec, const PriceSystem<T>& p, const T& m) {
    if (!cone_interior(spec, p)) throw DomainError("analytic Slutsky matrix needs Ap >> 0");
    const Mat3<T> a = spec.a_as<T>();
    const Vec3<T>& pv = p.vec();
    Vec3<T> ap = a * pv;
    T q = pv.dot(ap);
    Eigen::Matrix<T, 1, 3> pa = pv.transpose() * a;
    Mat3<T> s = (a / q - ap * pa / T(q * q)) * m;
    return {s, pv, m, SlutskyMode::Analytic};
}

SlutskyMatrix<double> slutsky_numeric(const DemandSpec& spec, const PriceSystem<double>& p, double m,
                                      double rel_step) {
    auto demand = [&](const Vec3d& pv, double mm) {
        PriceSystem<double> q(pv);
        if (!cone_interior(spec, q))
            throw StepError("finite-difference stencil leaves the cone interior; use a smaller step");
        return Vec3d(evaluate_demand(spec, q, mm).vec());
    };
    Mat3d dp;
    for (int j = 0; j < 3; ++j) {
        double h = rel_step * std::max(1.0, std::abs(p[j]));
        Vec3d up = p.vec(), down = p.vec();
        up(j) += h;
        down(j) -= h;
        if (down(j) <= 0) throw StepError("finite-difference step makes a price nonpositive");
        dp.col(j) = (demand(up, m) - demand(down, m)) / (up(j) - down(j));
    }
    double hm = rel_step * std::max(1.0, std::abs(m));
    Vec3d dm = (demand(p.vec(), m + hm) - demand(p.vec(), m - hm)) / (2 * hm);
    Vec3d f = demand(p.vec(), m);
    Mat3d s = dp + dm * f.transpose();
    return {s, p.vec(), m, SlutskyMode::FiniteDifference};
}

SlutskyMatrix<double> slutsky(const DemandSpec& spec, const PriceSystem<double>& p, double m, SlutskyMode mode) {
    return mode == SlutskyMode::Analytic ? slutsky_analytic(spec, p, m) : slutsky_numeric(spec, p, m);
}

double jacobi_residual(const Field& g, const Vec3d& x, IndexTriple t) {
    return jacobi_residual(g.value(x), g.jacobian(x), t);
}

Mat2d antonelli(const Field& g, const Vec3d& x) { return antonelli(g.value(x), g.jacobian(x)); }

AntonelliInverseReport antonelli_inverse_check(const DemandSpec& spec, const Vec3d& x) {
    if (!((x.array() > 0).all())) throw DomainError("Antonelli inverse check needs x >> 0");
    Field g = inverse_demand_field(spec);
    Vec3d gv = g.value(x);
    Mat2d a = antonelli(gv, g.jacobian(x));
    Vec3d k = gv / gv(2);
    double m = k.dot(x);
    auto s = slutsky_analytic(spec, PriceSystem<double>(k), m);
    AntonelliInverseReport r{a.inverse(), s.truncated(), k, m, 0.0};
    r.residual = (r.antonelli_inverse - r.slutsky_truncated).cwiseAbs().maxCoeff();
    return r;
}

std::string to_string(Definiteness d) {
    switch (d) {
    case Definiteness::NegativeDefinite: return "negative-definite";
    case Definiteness::Indefinite: return "indefinite";
    case Definiteness::Degenerate: return "degenerate";
    }
    return "?";
}

DefinitenessReport tangent_definiteness(const Field& g, const Vec3d& x, std::mt19937_64& rng, int samples) {
    Vec3d gv = g.value(x);
    Mat3d jac = g.jacobian(x);
    DefinitenessReport r{};
    r.dets = bordered_determinants(jac, gv);
    double scale = std::max(jac.cwiseAbs().maxCoeff(), gv.cwiseAbs().maxCoeff());
    double tol3 = 1e-10 * std::pow(scale, 3), tol4 = 1e-10 * std::pow(scale, 4);
    if (std::abs(r.dets.order3) <= tol3 || std::abs(r.dets.order4) <= tol4)
        r.verdict = Definiteness::Degenerate;
    else if (r.dets.order3 > 0 && r.dets.order4 < 0)
        r.verdict = Definiteness::NegativeDefinite;
    else
        r.verdict = Definiteness::Indefinite;

    Vec3d n = gv.normalized();
    Vec3d seed = std::abs(n(0)) < 0.9 ? Vec3d::UnitX() : Vec3d::UnitY();
    Vec3d t1 = (seed - seed.dot(n) * n).normalized();
    Vec3d t2 = n.cross(t1);
    std::uniform_real_distribution<double> angle(0.0, 2 * M_PI);
    r.max_sampled_form = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        double th = angle(rng);
        Vec3d w = std::cos(th) * t1 + std::sin(th) * t2;
        r.max_sampled_form = std::max(r.max_sampled_form, double(w.dot(jac * w)));
    }
    double ftol = 1e-12 * std::max(1.0, scale);
    if (r.max_sampled_form < -ftol)
        r.sampled = Definiteness::NegativeDefinite;
    else if (r.max_sampled_form > ftol)
        r.sampled = Definiteness::Indefinite;
    else
        r.sampled = Definiteness::Degenerate;
    r.agree = r.verdict == r.sampled;
    return r;
}

ScalingReport scaling_invariance_check(const Field& g, const std::function<double(const Vec3d&)>& lambda,
                                       const std::function<Vec3d(const Vec3d&)>& lambda_gradient, const Vec3d& x,
                                       IndexTriple t, double tol) {
    Field h = scaled_field(g, lambda, lambda_gradient);
    ScalingReport r{};
    r.lambda = lambda(x);
    if (!(r.lambda > 0)) throw DomainError("scaling function must be positive");
    r.residual_h = jacobi_residual(h, x, t);
    r.residual_g = jacobi_residual(g, x, t);
    r.defect = std::abs(r.residual_h - r.lambda * r.lambda * r.residual_g);
    r.consistent = r.defect <= tol * std::max(1.0, std::abs(r.residual_h));
    return r;
}

namespace {

void require_rationalizable(const DemandSpec& spec) {
    if (!spec.symmetric()) throw DomainError("expenditure function needs a symmetric (rationalizable) family");
}

// phi(xi) = sqrt(c) (p.d) / sqrt(d'Bd) with d = (e^xi1, e^xi2, 1): the cost of the
// point of the level set y'By = c on the ray through d.
struct LevelSetCost {
    Mat3d b;
    Vec3d p;
    double c;

    // phi is homogeneous of degree 0 in d; dividing by the largest entry keeps
    // d'Bd finite for large xi.
    Vec3d direction(const Eigen::Vector2d& xi) const {
        double top = std::max({xi(0), xi(1), 0.0});
        return Vec3d(std::exp(xi(0) - top), std::exp(xi(1) - top), std::exp(-top));
    }

    double value(const Eigen::Vector2d& xi, Eigen::Vector2d* grad) const {
        Vec3d d = direction(xi);
        Vec3d bd = b * d;
        double q = d.dot(bd), l = p.dot(d), rq = std::sqrt(q);
        if (grad)
            for (int i = 0; i < 2; ++i) (*grad)(i) = std::sqrt(c) * d(i) * (p(i) / rq - l * bd(i) / (q * rq));
        return std::sqrt(c) * l / rq;
    }

    Vec3d point(const Eigen::Vector2d& xi) const {
        Vec3d d = direction(xi);
        return d * std::sqrt(c / d.dot(b * d));
    }
};

struct LocalResult {
    Eigen::Vector2d xi;
    double value;
    int iterations;
    bool converged;
};

LocalResult bfgs(const LevelSetCost& f, Eigen::Vector2d xi, const ExpenditureOptions& opts) {
    Eigen::Vector2d grad;
    double val = f.value(xi, &grad);
    Eigen::Matrix2d hinv = Eigen::Matrix2d::Identity();
    for (int it = 0; it < opts.max_iterations; ++it) {
        if (grad.lpNorm<Eigen::Infinity>() <= opts.gradient_tol * std::max(1.0, std::abs(val)))
            return {xi, val, it, true};
        Eigen::Vector2d dir = -hinv * grad;
        if (dir.dot(grad) >= 0) {
            hinv.setIdentity();
            dir = -grad;
        }
        double step = 1.0, slope = dir.dot(grad);
        Eigen::Vector2d next, next_grad;
        double next_val = val;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            next = xi + step * dir;
            next_val = f.value(next, &next_grad);
            if (std::isfinite(next_val) && next_val <= val + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) return {xi, val, it, grad.lpNorm<Eigen::Infinity>() <= 1e-8 * std::max(1.0, std::abs(val))};
        Eigen::Vector2d s = next - xi, y = next_grad - grad;
        double sy = s.dot(y);
        if (sy > 1e-300) {
            double rho = 1.0 / sy;
            Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
            hinv = (id - rho * s * y.transpose()) * hinv * (id - rho * y * s.transpose()) + rho * s * s.transpose();
        }
        xi = next;
        val = next_val;
        grad = next_grad;
    }
    return {xi, val, opts.max_iterations, false};
}

} // namespace

ExpenditureResult expenditure_numeric(const DemandSpec& control, const Vec3d& x, const Vec3d& p,
                                      const ExpenditureOptions& opts) {
    require_rationalizable(control);
    if (!((x.array() > 0).all()) || !((p.array() > 0).all()))
        throw DomainError("expenditure needs x >> 0 and p >> 0");
    LevelSetCost f{control.b_double(), p, x.dot(control.b_double() * x)};

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> start(-3.0, 3.0);
    std::optional<LocalResult> best;
    double best_any = std::numeric_limits<double>::infinity();
    int total = 0;
    for (int r = 0; r < std::max(1, opts.restarts); ++r) {
        Eigen::Vector2d xi0 = r == 0 ? Eigen::Vector2d(std::log(x(0) / x(2)), std::log(x(1) / x(2)))
                                     : Eigen::Vector2d(start(rng), start(rng));
        LocalResult res = bfgs(f, xi0, opts);
        total += res.iterations;
        best_any = std::min(best_any, res.value);
        if (res.converged && (!best || res.value < best->value)) best = res;
    }
    if (!best) throw ConvergenceError("expenditure minimization did not converge", best_any);
    return {best->value, f.point(best->xi), total};
}

ShephardReport shephard_check(const DemandSpec& control, const Vec3d& x, const Vec3d& p, double step,
                              const ExpenditureOptions& opts) {
    ShephardReport r{};
    r.expenditure = expenditure_numeric(control, x, p, opts).value;
    for (int j = 0; j < 3; ++j) {
        double h = step * std::max(1.0, std::abs(p(j)));
        Vec3d up = p, down = p;
        up(j) += h;
        down(j) -= h;
        r.gradient(j) =
            (expenditure_numeric(control, x, up, opts).value - expenditure_numeric(control, x, down, opts).value) /
            (2 * h);
    }
    r.demand = family_demand(control, PriceSystem<double>(p), r.expenditure).vec();
    r.residual = (r.gradient - r.demand).norm();
    return r;
}

ConcavityReport concavity_check(const DemandSpec& control, const Vec3d& x, std::mt19937_64& rng, int trials,
                                double tol) {
    std::uniform_real_distribution<double> u(0.2, 2.0);
    const Mat3d b = control.b_double();
    ConcavityReport r;
    for (int t = 0; t < trials; ++t) {
        Vec3d z1(u(rng), u(rng), u(rng)), z2(u(rng), u(rng), u(rng));
        Vec3d p = inverse_demand_value(b, z1), q = inverse_demand_value(b, z2);
        double ep = expenditure_numeric(control, x, p).value;
        double eq = expenditure_numeric(control, x, q).value;
        double em = expenditure_numeric(control, x, Vec3d((p + q) / 2)).value;
        double gap = em - (ep + eq) / 2;
        ++r.trials;
        r.worst_gap = t == 0 ? gap : std::min(r.worst_gap, gap);
        if (gap < -tol * std::max(1.0, std::abs(em))) ++r.failures;
    }
    return r;
}

template SlutskyMatrix<double> slutsky_analytic(const DemandSpec&, const PriceSystem<double>&, const double&);
template SlutskyMatrix<Rational> slutsky_analytic(const DemandSpec&, const PriceSystem<Rational>&, const Rational&);

} // namespace gale
