#include "gale/paths.hpp"

#include <cmath>

namespace gale {

namespace {

Vec3d plane_point(const PlaneFrame& f, double c1, double c2) { return c1 * f.a1 + c2 * f.a2; }

Vec3d rk4_step(const std::function<Vec3d(const Vec3d&)>& f, const Vec3d& y, double h) {
    Vec3d k1 = f(y);
    Vec3d k2 = f(y + 0.5 * h * k1);
    Vec3d k3 = f(y + 0.5 * h * k2);
    Vec3d k4 = f(y + h * k3);
    return y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
}

bool positive(const Vec3d& y) { return (y.array() > 0).all() && y.allFinite(); }

} // namespace

bool proportional(const Vec3d& x, const Vec3d& v) {
    double c = x.dot(v);
    return 1.0 - c * c / (x.squaredNorm() * v.squaredNorm()) <= 1e-12;
}

bool PlaneFrame::in_triangle(const Vec3d& w, double tol) const {
    double scale = x.norm() + v.norm();
    if ((w - project(w)).norm() > tol * scale) return false;
    if (degenerate) return (w - x).norm() <= tol * scale;
    return w.dot(rotate(v)) <= tol * scale * scale && w.dot(v1) >= x.dot(v1) - tol * scale &&
           w.dot(v2) <= x.dot(v2) + tol * scale;
}

PlaneFrame plane_frame(const Vec3d& x, const Vec3d& v) {
    PlaneFrame f;
    f.x = x;
    f.v = v;
    f.a1 = x / x.norm();
    Vec3d resid = v - v.dot(f.a1) * f.a1;
    f.degenerate = proportional(x, v);
    f.a2 = f.degenerate ? Vec3d::Zero() : Vec3d(resid / resid.norm());
    f.c_scale = f.degenerate ? 0.0 : x.norm() * resid.norm();
    f.w_star = v.dot(x) * v - v.dot(v) * x;
    if (f.degenerate) {
        f.v1 = f.v2 = f.a1;
        f.y1 = f.y2 = x;
        return f;
    }
    // Projected orthant is spanned by P e_i; its extreme rays bound the angles seen from a1.
    double hi = 0, lo = 0;
    for (int i = 0; i < 3; ++i) {
        double c1 = f.a1(i), c2 = f.a2(i);
        if (c1 == 0 && c2 == 0) continue;
        double th = std::atan2(c2, c1);
        hi = std::max(hi, th);
        lo = std::min(lo, th);
    }
    f.v1 = plane_point(f, std::cos(hi), std::sin(hi));
    f.v2 = plane_point(f, std::cos(lo), std::sin(lo));
    auto corner = [&](const Vec3d& vi) {
        // s1 v - s2 R vi = x in plane coordinates
        Vec3d r = f.rotate(vi);
        Eigen::Matrix2d m;
        m << v.dot(f.a1), -r.dot(f.a1), v.dot(f.a2), -r.dot(f.a2);
        Eigen::Vector2d rhs(x.dot(f.a1), x.dot(f.a2));
        Eigen::Vector2d s = m.partialPivLu().solve(rhs);
        return Vec3d(s(0) * v);
    };
    f.y1 = corner(f.v1);
    f.y2 = corner(f.v2);
    return f;
}

Vec3d compensated_rhs(const Field& g, const Vec3d& y, const Vec3d& x, const Vec3d& v, double a) {
    Vec3d gy = g.value(y);
    return gy.dot(x) * v - gy.dot(v) * x + a * v;
}

CompensatedPath trace_path(const Field& g, const Vec3d& x, const Vec3d& v, const PathOptions& opts,
                           double perturbation) {
    if (!positive(x) || !positive(v)) throw DomainError("compensated paths need x >> 0 and v >> 0");
    CompensatedPath path;
    path.x = x;
    path.v = v;
    path.frame = plane_frame(x, v);
    path.perturbation = perturbation;
    path.options = opts;
    if (path.frame.degenerate) {
        path.samples.push_back({0.0, x});
        path.terminal = x;
        path.u_value = x.norm() / v.norm();
        return path;
    }
    const Vec3d w = path.frame.w_star;
    Vec3d r0 = compensated_rhs(g, x, x, v, perturbation);
    const double sigma = x.norm() / r0.norm();
    path.time_scale = sigma;
    auto f = [&](const Vec3d& y) { return Vec3d(sigma * compensated_rhs(g, y, x, v, perturbation)); };

    const double h = 1.0 / opts.steps_per_unit;
    Vec3d y = x;
    double t = 0;
    if (opts.keep_samples) path.samples.push_back({0.0, x});
    for (long n = 0;; ++n) {
        if (n >= opts.max_steps) throw EventError("stopping event not reached within the step cap");
        Vec3d next = rk4_step(f, y, h);
        if (!positive(next)) throw EventError("compensated path left the positive orthant");
        if (next.dot(w) >= 0) {
            double lo = 0, hi = h;
            for (int it = 0; it < opts.bisection_iterations; ++it) {
                double mid = 0.5 * (lo + hi);
                (rk4_step(f, y, mid).dot(w) >= 0 ? hi : lo) = mid;
            }
            y = rk4_step(f, y, hi);
            t += hi;
            if (opts.keep_samples) path.samples.push_back({t, y});
            break;
        }
        y = next;
        t += h;
        if (opts.keep_samples) path.samples.push_back({t, y});
    }
    path.t_stop = t;
    path.t_unscaled = sigma * t;
    path.terminal = y;
    path.u_value = y.norm() / v.norm();
    return path;
}

double ug(const Field& g, const Vec3d& x, const Vec3d& v, const PathOptions& opts) {
    PathOptions o = opts;
    o.keep_samples = false;
    return trace_path(g, x, v, o).u_value;
}

std::string to_string(Preference p) {
    switch (p) {
    case Preference::FirstPreferred: return "first";
    case Preference::SecondPreferred: return "second";
    case Preference::Indifferent: return "indifferent";
    }
    return "?";
}

Preference prefers(const Field& g, const Vec3d& x, const Vec3d& v, double tol, const PathOptions& opts) {
    double u = ug(g, x, v, opts);
    if (std::abs(u - 1) <= tol) return Preference::Indifferent;
    return u > 1 ? Preference::FirstPreferred : Preference::SecondPreferred;
}

Tower samuelson_tower(const Field& g, const Vec3d& x, const Vec3d& y, const Vec3d& z, const PathOptions& opts) {
    Tower t;
    t.a = ug(g, x, y, opts);
    t.b = ug(g, Vec3d(t.a * y), z, opts);
    t.c = ug(g, Vec3d(t.b * z), x, opts);
    return t;
}

namespace {

bool independent(const Vec3d& x, const Vec3d& y, const Vec3d& z) {
    Mat3d m;
    m << x, y, z;
    return std::abs(m.determinant()) >= 0.05 * x.norm() * y.norm() * z.norm();
}

std::optional<Tower> try_tower(const Field& g, const Triple& t, const PathOptions& opts) {
    try {
        return samuelson_tower(g, t.x, t.y, t.z, opts);
    } catch (const EventError&) {
        return std::nullopt;
    }
}

} // namespace

IntransitivityReport find_intransitivity(const Field& g, const SearchOptions& opts) {
    IntransitivityReport rep;
    if (opts.samples <= 0) return rep;
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    auto draw = [&] { return Vec3d(u(rng), u(rng), u(rng)); };
    for (int s = 0; s < opts.samples; ++s) {
        Triple t{draw(), draw(), draw()};
        if (!independent(t.x, t.y, t.z)) continue;
        ++rep.samples;
        auto tw = try_tower(g, t, opts.path);
        if (!tw) continue;
        double dev = std::abs(tw->c - 1);
        if (!rep.triple || dev > rep.deviation) {
            rep.triple = t;
            rep.tower = *tw;
            rep.deviation = dev;
        }
    }
    if (!rep.triple) return rep;
    std::normal_distribution<double> noise(0.0, 1.0);
    double scale = 0.1;
    for (int it = 0; it < opts.refinement_steps; ++it) {
        Triple t = *rep.triple;
        for (Vec3d* p : {&t.x, &t.y, &t.z})
            for (int i = 0; i < 3; ++i) (*p)(i) = std::max(0.05, (*p)(i) + scale * noise(rng));
        if (!independent(t.x, t.y, t.z)) continue;
        auto tw = try_tower(g, t, opts.path);
        if (tw && std::abs(tw->c - 1) > rep.deviation) {
            rep.triple = t;
            rep.tower = *tw;
            rep.deviation = std::abs(tw->c - 1);
        } else {
            scale *= 0.85;
        }
    }
    return rep;
}

Triple witness_from_tower(const Triple& t, const Tower& tower) {
    Vec3d ay = tower.a * t.y, bz = tower.b * t.z;
    if (tower.c > 1) return {t.x, ay, bz};
    return {bz, ay, t.x};
}

namespace {

struct Arc {
    std::vector<CurvePoint> points;
    double coefficient;
};

Arc perturbed_arc(const Field& g, const Vec3d& s, const Vec3d& e, double a, double t0, const PathOptions& opts) {
    CompensatedPath p = trace_path(g, s, e, opts, a);
    Arc arc;
    for (const auto& smp : p.samples) {
        Vec3d rhs = compensated_rhs(g, smp.y, s, e, a);
        arc.points.push_back({t0 + p.time_scale * smp.t, smp.y, g.value(smp.y).dot(rhs)});
    }
    arc.coefficient = p.u_value;
    return arc;
}

} // namespace

VilleCycle ville_cycle(const Field& g, const Triple& w, const std::vector<double>& eps_grid, double tol,
                       const PathOptions& opts) {
    if (ug(g, w.x, w.y, opts) < 1 - tol || ug(g, w.y, w.z, opts) < 1 - tol || !(ug(g, w.x, w.z, opts) < 1 - tol))
        throw DomainError("triple does not witness intransitivity: need x >= y, y >= z and z > x");
    bool gamma_failed = false;
    for (double eps : eps_grid) {
        try {
            VilleCycle vc{};
            vc.epsilon = eps;
            Arc a1 = perturbed_arc(g, w.x, w.z, eps, 0.0, opts);
            vc.alpha = a1.coefficient;
            if (!(vc.alpha > 0 && vc.alpha < 1)) continue;
            Vec3d p1 = vc.alpha * w.z;
            Arc a2 = perturbed_arc(g, p1, w.y, eps, a1.points.back().t, opts);
            vc.beta = a2.coefficient;
            if (!(vc.beta > 0 && vc.beta < 1)) continue;
            Vec3d p2 = vc.beta * w.y;
            Arc a3 = perturbed_arc(g, p2, w.x, eps, a2.points.back().t, opts);
            vc.gamma = a3.coefficient;
            if (!(vc.gamma > 0 && vc.gamma < 1)) {
                gamma_failed = gamma_failed || vc.gamma >= 1;
                continue;
            }
            for (Arc* arc : {&a1, &a2, &a3}) vc.curve.insert(vc.curve.end(), arc->points.begin(), arc->points.end());
            const double t3 = a3.points.back().t;
            const int radial = 64;
            for (int i = 0; i <= radial; ++i) {
                double tau = double(i) / radial;
                Vec3d y = ((1 - tau) * vc.gamma + tau) * w.x;
                vc.curve.push_back({t3 + tau, y, (1 - vc.gamma) * g.value(y).dot(w.x)});
            }
            vc.min_certificate = vc.curve.front().certificate;
            for (const auto& c : vc.curve) vc.min_certificate = std::min(vc.min_certificate, c.certificate);
            if (!(vc.min_certificate > 0)) continue;
            vc.closure_error = (vc.curve.back().y - vc.curve.front().y).norm();
            return vc;
        } catch (const EventError&) {
            continue;
        }
    }
    if (gamma_failed) throw DomainError("returning arc ends at gamma >= 1; witness not strong enough");
    throw EventError("no perturbation in the grid closes the cycle; try smaller epsilon");
}

EulerResult euler_compensated(const Field& g, const Vec3d& x, const Vec3d& v, int m, const PathOptions& opts) {
    if (m < 1) throw DomainError("Euler scheme needs m >= 1");
    PathOptions o = opts;
    o.keep_samples = false;
    CompensatedPath ref = trace_path(g, x, v, o);
    EulerResult r;
    r.t_unscaled = ref.t_unscaled;
    const double h = r.t_unscaled / m;
    Vec3d y = x;
    r.polyline.push_back(y);
    for (int i = 0; i < m; ++i) {
        y = y + h * compensated_rhs(g, y, x, v);
        r.polyline.push_back(y);
    }
    r.endpoint = y;
    return r;
}

} // namespace gale
