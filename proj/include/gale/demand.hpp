#pragma once

#include "gale/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gale {

/// Strictly positive price vector.
template <class T> class PriceSystem {
public:
    explicit PriceSystem(Vec3<T> p);
    PriceSystem(T p1, T p2, T p3) : PriceSystem(Vec3<T>(p1, p2, p3)) {}

    const Vec3<T>& vec() const { return p_; }
    const T& operator[](int i) const { return p_(i); }

    PriceSystem scaled(const T& a) const { return PriceSystem(Vec3<T>(p_ * a)); }

    friend bool operator==(const PriceSystem& a, const PriceSystem& b) { return a.p_ == b.p_; }

private:
    Vec3<T> p_;
};

/// Nonnegative consumption bundle.
template <class T> class Bundle {
public:
    explicit Bundle(Vec3<T> x);
    Bundle(T x1, T x2, T x3) : Bundle(Vec3<T>(x1, x2, x3)) {}

    const Vec3<T>& vec() const { return x_; }
    const T& operator[](int i) const { return x_(i); }

    bool is_zero() const { return x_.isZero(); }
    bool strictly_positive() const { return (x_.array() > T(0)).all(); }

    friend bool operator==(const Bundle& a, const Bundle& b) { return a.x_ == b.x_; }

private:
    Vec3<T> x_;
};

enum class SpecKind { Gale, SymmetricControl, Custom };

/// Matrix A of the demand family h_A(p) = Ap / (p'Ap), with B = A^{-1} held exactly.
class DemandSpec {
public:
    /// A with rows (-3,4,0), (0,-3,4), (4,0,-3).
    static DemandSpec gale();

    /// Rationalizable control: B = C/37 with C rows (9,14,14), (14,9,14), (14,14,9).
    static DemandSpec symmetric_control();

    /// Any invertible A. Throws DomainError when A is singular.
    static DemandSpec from_matrix(const Mat3q& a);

    /// Family given through its inverse-demand matrix B.
    static DemandSpec from_inverse(const Mat3q& b);

    const Mat3q& a() const { return a_; }
    const Mat3q& b() const { return b_; }
    const Mat3d& a_double() const { return a_d_; }
    const Mat3d& b_double() const { return b_d_; }

    template <class T> Mat3<T> a_as() const;
    template <class T> Mat3<T> b_as() const;

    bool symmetric() const { return symmetric_; }
    SpecKind kind() const { return kind_; }
    bool is_gale() const { return kind_ == SpecKind::Gale; }
    std::string name() const;

    /// Smallest positive integer d with d*B integral (37 for both built-in families).
    Rational b_denominator() const;

private:
    DemandSpec(Mat3q a, Mat3q b, SpecKind kind);

    Mat3q a_, b_;
    Mat3d a_d_, b_d_;
    SpecKind kind_;
    bool symmetric_;
};

template <> inline Mat3<Rational> DemandSpec::a_as<Rational>() const { return a_; }
template <> inline Mat3<double> DemandSpec::a_as<double>() const { return a_d_; }
template <> inline Mat3<Rational> DemandSpec::b_as<Rational>() const { return b_; }
template <> inline Mat3<double> DemandSpec::b_as<double>() const { return b_d_; }

/// True iff Ap >= 0 componentwise.
template <class T> bool cone_contains(const DemandSpec& spec, const PriceSystem<T>& p);

/// True iff Ap >> 0, i.e. p lies in the interior of the cone.
template <class T> bool cone_interior(const DemandSpec& spec, const PriceSystem<T>& p);

// Normalization cases for Gale's matrix. Each non-trivial case is tried over
// the cyclic index triples (0,1,2), (1,2,0), (2,0,1).
// InCone: p already in the cone. TwoConstraints: two adjacent rows of Ap are
// nonpositive. OneConstraint / OneConstraintClamped: exactly one row binds; the
// clamped variant also lowers p_k.
enum class PriceCase { InCone, TwoConstraints, OneConstraint, OneConstraintClamped };

struct CyclicTriple {
    int i, j, k;
};

inline constexpr CyclicTriple kCyclicTriples[3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};

template <class T> struct CaseResult {
    PriceCase which;
    CyclicTriple triple;
    Vec3<T> value;
};

/// Every case formula whose applicability conditions hold at p, in dispatch order.
template <class T> std::vector<CaseResult<T>> applicable_cases(const PriceSystem<T>& p);

/// Maps p onto a price p_bar <= p in the cone. Only defined for Gale's A.
template <class T> PriceSystem<T> normalize_price(const DemandSpec& spec, const PriceSystem<T>& p);

/// Gale's demand h_A(p_bar) * m.
template <class T> Bundle<T> gale_demand(const DemandSpec& spec, const PriceSystem<T>& p, const T& m);

/// g(x) = Bx / (x'Bx). Rejects x = 0.
template <class T> PriceSystem<T> inverse_demand(const DemandSpec& spec, const Bundle<T>& x);

/// h_A(p) * m without normalization; p must lie in the cone.
template <class T> Bundle<T> family_demand(const DemandSpec& spec, const PriceSystem<T>& p, const T& m);

/// Dispatches to gale_demand for Gale's matrix and to family_demand otherwise.
template <class T> Bundle<T> evaluate_demand(const DemandSpec& spec, const PriceSystem<T>& p, const T& m);

/// Structured trace of a single demand evaluation.
template <class T> struct DemandEvaluation {
    Vec3<T> normalized_price;
    Vec3<T> bundle;
    T walras_residual; // p_bar . x - m
    std::optional<PriceCase> price_case;
};

template <class T>
DemandEvaluation<T> trace_demand(const DemandSpec& spec, const PriceSystem<T>& p, const T& m);

std::string to_string(PriceCase c);

} // namespace gale
