#pragma once

#include "gale/fields.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace gale {

/// Orthonormal frame of span{x, v} and the derived objects used by the
/// compensated-path equation.
struct PlaneFrame {
    Vec3d x, v;
    Vec3d a1, a2;     // a2 = 0 when v is proportional to x
    double c_scale;   // |x| |v - (v.a1) a1|
    Vec3d w_star;     // (v.x) v - (v.v) x
    bool degenerate;
    Vec3d v1, v2;     // extreme unit rays of the projected orthant, upper and lower half
    Vec3d y1, y2;     // corners of the triangle co{x, y1, y2} on the ray of v

    Vec3d project(const Vec3d& y) const { return (y.dot(a1)) * a1 + (y.dot(a2)) * a2; }
    /// Quarter turn on the plane: a1 -> a2, a2 -> -a1.
    Vec3d rotate(const Vec3d& w) const { return (w.dot(a1)) * a2 - (w.dot(a2)) * a1; }
    bool in_triangle(const Vec3d& w, double tol = 1e-9) const;
};

/// 1 - cos^2(x, v) <= 1e-12.
bool proportional(const Vec3d& x, const Vec3d& v);

PlaneFrame plane_frame(const Vec3d& x, const Vec3d& v);

struct PathOptions {
    int steps_per_unit = 1024;     // RK4 steps per unit of rescaled time
    int bisection_iterations = 60; // event refinement on the crossing step
    long max_steps = 1L << 20;
    bool keep_samples = true;
};

/// Raised when the stopping event is not reached or the path leaves the orthant.
class EventError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PathSample {
    double t; // rescaled time
    Vec3d y;
};

struct CompensatedPath {
    Vec3d x, v;
    PlaneFrame frame;
    std::vector<PathSample> samples;
    double t_stop = 0;       // rescaled time
    double time_scale = 1;   // sigma with t_unscaled = sigma * t_stop
    double t_unscaled = 0;
    Vec3d terminal;
    double u_value = 0;      // |terminal| / |v|
    double perturbation = 0;
    PathOptions options;
};

/// Right side of the compensated equation, (g(y).x) v - (g(y).v) x + a v.
Vec3d compensated_rhs(const Field& g, const Vec3d& y, const Vec3d& x, const Vec3d& v, double a = 0);

/// Integrates y' = sigma * compensated_rhs from y(0) = x with sigma = |x| / |rhs(x)|
/// until y . w_star >= 0.
CompensatedPath trace_path(const Field& g, const Vec3d& x, const Vec3d& v, const PathOptions& opts = {},
                           double perturbation = 0);

double ug(const Field& g, const Vec3d& x, const Vec3d& v, const PathOptions& opts = {});

enum class Preference { FirstPreferred, SecondPreferred, Indifferent };

std::string to_string(Preference p);

/// Compares x with v through u^g(x, v); |u - 1| <= tol is indifference.
Preference prefers(const Field& g, const Vec3d& x, const Vec3d& v, double tol = 1e-7, const PathOptions& opts = {});

struct Tower {
    double a, b, c;
};

/// a = u(x, y), b = u(a y, z), c = u(b z, x).
Tower samuelson_tower(const Field& g, const Vec3d& x, const Vec3d& y, const Vec3d& z, const PathOptions& opts = {});

struct Triple {
    Vec3d x, y, z;
};

struct IntransitivityReport {
    std::optional<Triple> triple;
    Tower tower{1, 1, 1};
    double deviation = 0; // |c - 1|
    int samples = 0;
};

struct SearchOptions {
    int samples = 1000;
    int refinement_steps = 60;
    std::uint64_t seed = 20240601;
    PathOptions path;
};

/// Random linearly independent triples in [0.1, 1]^3 plus hill climbing on |c - 1|.
IntransitivityReport find_intransitivity(const Field& g, const SearchOptions& opts = {});

/// Reorders a tower triple into (x, y, z) with x >= y, y >= z and z > x.
Triple witness_from_tower(const Triple& t, const Tower& tower);

struct CurvePoint {
    double t;
    Vec3d y;
    double certificate; // g(y) . y'
};

struct VilleCycle {
    std::vector<CurvePoint> curve;
    double epsilon;
    double alpha, beta, gamma;
    double min_certificate;
    double closure_error;
};

/// Closed curve along which g(x(t)) . x'(t) > 0, built from three perturbed
/// compensated arcs x -> ray z -> ray y -> ray x and a radial segment back to x.
/// Requires u(x, y) >= 1 - tol, u(y, z) >= 1 - tol and u(x, z) < 1 - tol.
VilleCycle ville_cycle(const Field& g, const Triple& w, const std::vector<double>& eps_grid = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6},
                       double tol = 1e-7, const PathOptions& opts = {});

struct EulerResult {
    Vec3d endpoint;
    double t_unscaled;
    std::vector<Vec3d> polyline;
};

/// Explicit Euler with m steps of length t(x, v) / m on the unscaled right side.
EulerResult euler_compensated(const Field& g, const Vec3d& x, const Vec3d& v, int m, const PathOptions& opts = {});

} // namespace gale
