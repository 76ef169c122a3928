#pragma once

#include "gale/fields.hpp"

#include <array>
#include <cstdint>
#include <random>

namespace gale {

enum class SlutskyMode { Analytic, FiniteDifference };

template <class T> struct SlutskyMatrix {
    Mat3<T> s;
    Vec3<T> p;
    T m;
    SlutskyMode mode;

    /// Top-left 2x2 block.
    Mat2<T> truncated() const { return s.template topLeftCorner<2, 2>(); }
};

/// Raised when a finite-difference stencil leaves the differentiable region.
class StepError : public DomainError {
public:
    using DomainError::DomainError;
};

/// s = m [A/q - Ap p'A / q^2] with q = p'Ap; requires Ap >> 0.
template <class T> SlutskyMatrix<T> slutsky_analytic(const DemandSpec& spec, const PriceSystem<T>& p, const T& m);

/// Central differences of evaluate_demand with step rel_step * max(1, |p_j|) (and likewise for m).
SlutskyMatrix<double> slutsky_numeric(const DemandSpec& spec, const PriceSystem<double>& p, double m,
                                      double rel_step = 1e-5);

SlutskyMatrix<double> slutsky(const DemandSpec& spec, const PriceSystem<double>& p, double m, SlutskyMode mode);

using IndexTriple = std::array<int, 3>;

/// g_i (D_k g_j - D_j g_k) + g_j (D_i g_k - D_k g_i) + g_k (D_j g_i - D_i g_j), 0-based indices.
template <class T> T jacobi_residual(const Vec3<T>& g, const Mat3<T>& jac, IndexTriple t) {
    auto [i, j, k] = t;
    return g(i) * (jac(j, k) - jac(k, j)) + g(j) * (jac(k, i) - jac(i, k)) + g(k) * (jac(i, j) - jac(j, i));
}

double jacobi_residual(const Field& g, const Vec3d& x, IndexTriple t = {0, 1, 2});

/// a_ij = D_j k_i - D_3 k_i * k_j for the normalization k = g / g_3, i, j in {1, 2}.
template <class T> Mat2<T> antonelli(const Vec3<T>& g, const Mat3<T>& jac) {
    if (g(2) == T(0)) throw DomainError("Antonelli matrix needs g_3(x) != 0");
    Vec3<T> k = g / g(2);
    Mat3<T> dk = jac / g(2) - g * jac.row(2) / T(g(2) * g(2));
    Mat2<T> a;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) a(i, j) = dk(i, j) - dk(i, 2) * k(j);
    return a;
}

Mat2d antonelli(const Field& g, const Vec3d& x);

struct AntonelliInverseReport {
    Mat2d antonelli_inverse;
    Mat2d slutsky_truncated;
    Vec3d p; // k(x)
    double m; // k(x) . x
    double residual; // max-entry norm of the difference
};

/// Compares A_g(x)^{-1} with the truncated Slutsky matrix at (k(x), k(x) . x).
AntonelliInverseReport antonelli_inverse_check(const DemandSpec& spec, const Vec3d& x);

enum class Definiteness { NegativeDefinite, Indefinite, Degenerate };

std::string to_string(Definiteness d);

template <class T> struct BorderedDeterminants {
    T order3; // [[H_11, H_12, b_1], [H_21, H_22, b_2], [b_1, b_2, 0]]
    T order4; // full 3x3 block bordered by b
};

/// H = (J + J') / 2 bordered by b.
template <class T> BorderedDeterminants<T> bordered_determinants(const Mat3<T>& jac, const Vec3<T>& border) {
    Mat3<T> h = (jac + jac.transpose()) / T(2);
    Eigen::Matrix<T, 4, 4> full;
    full.template topLeftCorner<3, 3>() = h;
    full.template block<3, 1>(0, 3) = border;
    full.template block<1, 3>(3, 0) = border.transpose();
    full(3, 3) = T(0);
    Mat3<T> small;
    const int idx[3] = {0, 1, 3};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) small(a, b) = full(idx[a], idx[b]);
    return {small.determinant(), full.determinant()};
}

struct DefinitenessReport {
    Definiteness verdict;           // from the bordered determinants
    BorderedDeterminants<double> dets;
    Definiteness sampled;           // from random tangent vectors
    double max_sampled_form;        // max of w'Dg w over unit tangent samples
    bool agree;
};

/// Classifies Dg(x) on the tangent space g(x)^perp. A determinant within
/// 1e-10 * scale^order of zero is reported as degenerate.
DefinitenessReport tangent_definiteness(const Field& g, const Vec3d& x, std::mt19937_64& rng, int samples = 64);

struct ScalingReport {
    double residual_h;
    double residual_g;
    double lambda;
    double defect; // |residual_h - lambda^2 residual_g|
    bool consistent;
};

/// Jacobi residuals of g and h = lambda g at x, and the identity residual_h = lambda^2 residual_g.
ScalingReport scaling_invariance_check(const Field& g, const std::function<double(const Vec3d&)>& lambda,
                                       const std::function<Vec3d(const Vec3d&)>& lambda_gradient, const Vec3d& x,
                                       IndexTriple t = {0, 1, 2}, double tol = 1e-8);

struct ExpenditureOptions {
    int restarts = 16;
    int max_iterations = 400;
    double gradient_tol = 1e-12;
    std::uint64_t seed = 7;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double best) : std::runtime_error(what), best_(best) {}
    double best() const { return best_; }

private:
    double best_;
};

struct ExpenditureResult {
    double value;
    Vec3d minimizer;
    int iterations;
};

/// min p.y over {y >> 0 : y'By = x'Bx} for a symmetric B, by quasi-Newton descent
/// in y = exp(xi) coordinates with multistart.
ExpenditureResult expenditure_numeric(const DemandSpec& control, const Vec3d& x, const Vec3d& p,
                                      const ExpenditureOptions& opts = {});

struct ShephardReport {
    double expenditure;
    Vec3d gradient; // central differences of E^x at p
    Vec3d demand;   // f(p, E^x(p))
    double residual;
};

ShephardReport shephard_check(const DemandSpec& control, const Vec3d& x, const Vec3d& p, double step = 1e-4,
                              const ExpenditureOptions& opts = {});

struct ConcavityReport {
    int trials = 0;
    int failures = 0;
    double worst_gap = 0; // most negative E((p+q)/2) - (E(p)+E(q))/2
};

/// Midpoint concavity of E^x at random price pairs drawn as g(z) for z >> 0.
ConcavityReport concavity_check(const DemandSpec& control, const Vec3d& x, std::mt19937_64& rng, int trials,
                                double tol = 1e-9);

} // namespace gale
