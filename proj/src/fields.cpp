#include "gale/fields.hpp"

#include <cmath>

namespace gale {

Field linear_field(const Mat3d& m, std::string name) {
    return {std::move(name), [m](const Vec3d& x) { return Vec3d(m * x); }, [m](const Vec3d&) { return m; }};
}

Field affine_field(const Mat3d& m, const Vec3d& c, std::string name) {
    return {std::move(name), [m, c](const Vec3d& x) { return Vec3d(m * x + c); }, [m](const Vec3d&) { return m; }};
}

Field inverse_demand_field(const DemandSpec& spec) {
    Mat3d b = spec.b_double();
    return {"g[" + spec.name() + "]", [b](const Vec3d& x) { return inverse_demand_value(b, x); },
            [b](const Vec3d& x) { return inverse_demand_jacobian(b, x); }};
}

Field scaled_linear_field(const DemandSpec& spec) {
    Rational d = spec.b_denominator();
    Mat3d m = to_double(Mat3q(spec.b() * d));
    return linear_field(m, "h[" + spec.name() + "]");
}

Field scaled_field(const Field& g, std::function<double(const Vec3d&)> lambda,
                   std::function<Vec3d(const Vec3d&)> lambda_gradient) {
    auto value = [g, lambda](const Vec3d& x) { return Vec3d(lambda(x) * g.value(x)); };
    auto jac = [g, lambda, lambda_gradient](const Vec3d& x) {
        return Mat3d(lambda(x) * g.jacobian(x) + g.value(x) * lambda_gradient(x).transpose());
    };
    return {"scaled " + g.name, value, jac};
}

Field normalized_field(const Field& g) {
    auto value = [g](const Vec3d& x) {
        Vec3d v = g.value(x);
        if (v(2) == 0) throw DomainError("normalization needs g_3(x) != 0");
        return Vec3d(v / v(2));
    };
    auto jac = [g](const Vec3d& x) {
        Vec3d v = g.value(x);
        if (v(2) == 0) throw DomainError("normalization needs g_3(x) != 0");
        Mat3d d = g.jacobian(x);
        return Mat3d(d / v(2) - v * d.row(2) / (v(2) * v(2)));
    };
    return {"normalized " + g.name, value, jac};
}

Mat3d central_jacobian(const std::function<Vec3d(const Vec3d&)>& f, const Vec3d& x, double rel_step) {
    Mat3d out;
    for (int b = 0; b < 3; ++b) {
        double h = rel_step * std::max(1.0, std::abs(x(b)));
        Vec3d up = x, down = x;
        up(b) += h;
        down(b) -= h;
        out.col(b) = (f(up) - f(down)) / (up(b) - down(b));
    }
    return out;
}

Field numeric_field(std::string name, std::function<Vec3d(const Vec3d&)> f, double rel_step) {
    auto jac = [f, rel_step](const Vec3d& x) { return central_jacobian(f, x, rel_step); };
    return {std::move(name), f, jac};
}

} // namespace gale
