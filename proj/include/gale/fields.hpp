#pragma once

#include "gale/demand.hpp"

#include <functional>
#include <string>

namespace gale {

/// Vector field on the positive orthant together with its Jacobian,
/// jacobian(x)(a, b) = d value_a / d x_b.
struct Field {
    std::string name;
    std::function<Vec3d(const Vec3d&)> value;
    std::function<Mat3d(const Vec3d&)> jacobian;
};

/// x -> Mx.
Field linear_field(const Mat3d& m, std::string name = "linear");

/// x -> Mx + c.
Field affine_field(const Mat3d& m, const Vec3d& c, std::string name = "affine");

/// g(x) = Bx / (x'Bx) with its analytic Jacobian.
Field inverse_demand_field(const DemandSpec& spec);

/// h = d * Bx where d is the common denominator of B (integer entries).
Field scaled_linear_field(const DemandSpec& spec);

/// x -> lambda(x) g(x), product rule for the Jacobian.
Field scaled_field(const Field& g, std::function<double(const Vec3d&)> lambda,
                   std::function<Vec3d(const Vec3d&)> lambda_gradient);

/// k(x) = g(x) / g_3(x).
Field normalized_field(const Field& g);

/// Central differences with step rel_step * max(1, |x_b|).
Mat3d central_jacobian(const std::function<Vec3d(const Vec3d&)>& f, const Vec3d& x, double rel_step = 1e-5);

/// Field whose Jacobian is always taken by central differences.
Field numeric_field(std::string name, std::function<Vec3d(const Vec3d&)> f, double rel_step = 1e-5);

template <class T> Vec3<T> inverse_demand_value(const Mat3<T>& b, const Vec3<T>& x) {
    Vec3<T> bx = b * x;
    T q = x.dot(bx);
    return bx / q;
}

// Dg = B/q - Bx x'(B + B')/q^2.
template <class T> Mat3<T> inverse_demand_jacobian(const Mat3<T>& b, const Vec3<T>& x) {
    Vec3<T> bx = b * x;
    T q = x.dot(bx);
    Mat3<T> bs = b + b.transpose();
    Eigen::Matrix<T, 1, 3> grad = x.transpose() * bs;
    Mat3<T> outer = bx * grad;
    return Mat3<T>(b / q - outer / T(q * q));
}

} // namespace gale
