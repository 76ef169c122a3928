#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <string_view>

namespace gale {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;

template <class T> using Vec3 = Eigen::Matrix<T, 3, 1>;
template <class T> using Mat3 = Eigen::Matrix<T, 3, 3>;
template <class T> using Mat2 = Eigen::Matrix<T, 2, 2>;

using Vec3d = Vec3<double>;
using Mat3d = Mat3<double>;
using Mat2d = Mat2<double>;
using Vec3q = Vec3<Rational>;
using Mat3q = Mat3<Rational>;

/// Raised when an input lies outside the domain an operation is defined on.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return v.convert_to<double>(); }

template <class T> Vec3d to_double(const Vec3<T>& v) {
    return Vec3d(to_double(v(0)), to_double(v(1)), to_double(v(2)));
}

template <class T> Mat3d to_double(const Mat3<T>& m) {
    Mat3d out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out(i, j) = to_double(m(i, j));
    return out;
}

/// Converts an exact value into the working scalar type.
template <class T> T from_rational(const Rational& q) {
    if constexpr (std::is_same_v<T, Rational>)
        return q;
    else
        return q.convert_to<T>();
}

template <class T> Vec3<T> from_rational(const Vec3q& v) {
    return Vec3<T>(from_rational<T>(v(0)), from_rational<T>(v(1)), from_rational<T>(v(2)));
}

template <class T> Mat3<T> from_rational(const Mat3q& m) {
    Mat3<T> out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out(i, j) = from_rational<T>(m(i, j));
    return out;
}

/// Parses an integer, a decimal ("0.6", "-1.25e-3") or a fraction ("11/3")
/// into an exact rational. Throws std::invalid_argument on malformed text.
Rational parse_rational(std::string_view text);

/// True when the literal is written as a fraction `a/b`.
bool is_fraction_literal(std::string_view text);

std::string to_string(const Rational& q);

/// Shortest decimal that round-trips the double.
std::string to_string(double v);

} // namespace gale
