#include "gale/demand.hpp"

#include <cmath>

namespace gale {

namespace {

template <class T> bool finite(const T& v) {
    if constexpr (std::is_same_v<T, double>)
        return std::isfinite(v);
    else
        return true;
}

Mat3q integer_matrix(std::initializer_list<std::initializer_list<int>> rows) {
    Mat3q m;
    int i = 0;
    for (auto& row : rows) {
        int j = 0;
        for (int v : row) m(i, j++) = Rational(v);
        ++i;
    }
    return m;
}

Mat3q gale_a() { return integer_matrix({{-3, 4, 0}, {0, -3, 4}, {4, 0, -3}}); }

Mat3q symmetric_b() {
    Mat3q c = integer_matrix({{9, 14, 14}, {14, 9, 14}, {14, 14, 9}});
    return c / Rational(37);
}

Mat3q exact_inverse(const Mat3q& m) {
    Rational det = m.determinant();
    if (det == 0) throw DomainError("matrix is singular");
    return m.inverse();
}

// -3 p_a + 4 p_b, the row of Gale's Ap that starts at index a.
template <class T> T row(const Vec3<T>& p, int a, int b) { return T(-3) * p(a) + T(4) * p(b); }

template <class T> std::optional<Vec3<T>> case_value(PriceCase c, CyclicTriple t, const Vec3<T>& p) {
    const auto [i, j, k] = t;
    Vec3<T> out;
    switch (c) {
    case PriceCase::InCone:
        if (row(p, 0, 1) >= 0 && row(p, 1, 2) >= 0 && row(p, 2, 0) >= 0) return p;
        return std::nullopt;
    case PriceCase::TwoConstraints:
        if (!(row(p, i, j) <= 0 && row(p, j, k) <= 0)) return std::nullopt;
        out(i) = T(16) / T(9) * p(k);
        out(j) = T(4) / T(3) * p(k);
        out(k) = p(k);
        return out;
    case PriceCase::OneConstraint:
    case PriceCase::OneConstraintClamped: {
        if (!(row(p, i, j) <= 0 && row(p, j, k) >= 0 && row(p, k, i) >= 0)) return std::nullopt;
        T split = T(16) * p(j) - T(9) * p(k);
        bool clamped = c == PriceCase::OneConstraintClamped;
        if (clamped ? !(split <= 0) : !(split >= 0)) return std::nullopt;
        out(i) = T(4) / T(3) * p(j);
        out(j) = p(j);
        out(k) = clamped ? T(T(16) / T(9) * p(j)) : p(k);
        return out;
    }
    }
    return std::nullopt;
}

constexpr PriceCase kDispatch[] = {PriceCase::InCone, PriceCase::TwoConstraints, PriceCase::OneConstraint,
                                   PriceCase::OneConstraintClamped};

template <class T> void require_gale(const DemandSpec& spec) {
    if (!spec.is_gale()) throw DomainError("price normalization is only defined for Gale's matrix");
}

template <class T> std::optional<CaseResult<T>> first_case(const Vec3<T>& p) {
    for (PriceCase c : kDispatch) {
        if (c == PriceCase::InCone) {
            if (auto v = case_value(c, kCyclicTriples[0], p)) return CaseResult<T>{c, kCyclicTriples[0], *v};
            continue;
        }
        for (const auto& t : kCyclicTriples)
            if (auto v = case_value(c, t, p)) return CaseResult<T>{c, t, *v};
    }
    return std::nullopt;
}

} // namespace

template <class T> PriceSystem<T>::PriceSystem(Vec3<T> p) : p_(std::move(p)) {
    for (int i = 0; i < 3; ++i)
        if (!finite(p_(i)) || !(p_(i) > 0)) throw DomainError("prices must be strictly positive");
}

template <class T> Bundle<T>::Bundle(Vec3<T> x) : x_(std::move(x)) {
    for (int i = 0; i < 3; ++i)
        if (!finite(x_(i)) || x_(i) < 0) throw DomainError("bundle components must be nonnegative");
}

DemandSpec::DemandSpec(Mat3q a, Mat3q b, SpecKind kind)
    : a_(std::move(a)), b_(std::move(b)), a_d_(to_double(a_)), b_d_(to_double(b_)), kind_(kind),
      symmetric_(a_ == a_.transpose()) {}

DemandSpec DemandSpec::gale() {
    Mat3q a = gale_a();
    return DemandSpec(a, exact_inverse(a), SpecKind::Gale);
}

DemandSpec DemandSpec::symmetric_control() {
    Mat3q b = symmetric_b();
    return DemandSpec(exact_inverse(b), b, SpecKind::SymmetricControl);
}

DemandSpec DemandSpec::from_matrix(const Mat3q& a) {
    Mat3q b = exact_inverse(a);
    SpecKind kind = SpecKind::Custom;
    if (a == gale_a())
        kind = SpecKind::Gale;
    else if (b == symmetric_b())
        kind = SpecKind::SymmetricControl;
    return DemandSpec(a, b, kind);
}

DemandSpec DemandSpec::from_inverse(const Mat3q& b) { return from_matrix(exact_inverse(b)); }

std::string DemandSpec::name() const {
    switch (kind_) {
    case SpecKind::Gale: return "gale";
    case SpecKind::SymmetricControl: return "symmetric";
    case SpecKind::Custom: return "custom";
    }
    return "custom";
}

Rational DemandSpec::b_denominator() const {
    Integer d = 1;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) d = boost::multiprecision::lcm(d, denominator(b_(i, j)));
    return Rational(d);
}

template <class T> bool cone_contains(const DemandSpec& spec, const PriceSystem<T>& p) {
    Vec3<T> ap = spec.a_as<T>() * p.vec();
    return (ap.array() >= T(0)).all();
}

template <class T> bool cone_interior(const DemandSpec& spec, const PriceSystem<T>& p) {
    Vec3<T> ap = spec.a_as<T>() * p.vec();
    return (ap.array() > T(0)).all();
}

template <class T> std::vector<CaseResult<T>> applicable_cases(const PriceSystem<T>& p) {
    std::vector<CaseResult<T>> out;
    for (PriceCase c : kDispatch) {
        if (c == PriceCase::InCone) {
            if (auto v = case_value(c, kCyclicTriples[0], p.vec())) out.push_back({c, kCyclicTriples[0], *v});
            continue;
        }
        for (const auto& t : kCyclicTriples)
            if (auto v = case_value(c, t, p.vec())) out.push_back({c, t, *v});
    }
    return out;
}

template <class T> PriceSystem<T> normalize_price(const DemandSpec& spec, const PriceSystem<T>& p) {
    require_gale<T>(spec);
    auto hit = first_case(p.vec());
    if (!hit) throw std::logic_error("no normalization case applies");
    return PriceSystem<T>(hit->value);
}

template <class T> Bundle<T> family_demand(const DemandSpec& spec, const PriceSystem<T>& p, const T& m) {
    if (!(m > 0)) throw DomainError("income must be positive");
    Vec3<T> ap = spec.a_as<T>() * p.vec();
    if (!(ap.array() >= T(0)).all()) throw DomainError("price lies outside the cone Ap >= 0");
    T q = p.vec().dot(ap);
    if (!(q > 0)) throw DomainError("quadratic form p'Ap is not positive");
    Vec3<T> x = ap * T(m / q);
    return Bundle<T>(x);
}

template <class T> Bundle<T> gale_demand(const DemandSpec& spec, const PriceSystem<T>& p, const T& m) {
    PriceSystem<T> bar = normalize_price(spec, p);
    if constexpr (std::is_same_v<T, double>) {
        // p_bar sits on the cone boundary by construction; rounding can push a
        // binding row of A p_bar just below zero.
        if (!(m > 0)) throw DomainError("income must be positive");
        Vec3d ap = spec.a_double() * bar.vec();
        const double slack = 1e-12 * spec.a_double().cwiseAbs().maxCoeff() * bar.vec().norm();
        for (int i = 0; i < 3; ++i)
            if (ap(i) < 0 && ap(i) >= -slack) ap(i) = 0;
        double q = bar.vec().dot(ap);
        if (!((ap.array() >= 0).all() && q > 0)) throw std::logic_error("normalized price left the cone");
        return Bundle<double>(Vec3d(ap * (m / q)));
    } else {
        return family_demand(spec, bar, m);
    }
}

template <class T> Bundle<T> evaluate_demand(const DemandSpec& spec, const PriceSystem<T>& p, const T& m) {
    return spec.is_gale() ? gale_demand(spec, p, m) : family_demand(spec, p, m);
}

template <class T> PriceSystem<T> inverse_demand(const DemandSpec& spec, const Bundle<T>& x) {
    if (x.is_zero()) throw DomainError("inverse demand is undefined at x = 0");
    Vec3<T> bx = spec.b_as<T>() * x.vec();
    T q = x.vec().dot(bx);
    if (!(q > 0)) throw DomainError("quadratic form x'Bx is not positive");
    return PriceSystem<T>(Vec3<T>(bx / q));
}

template <class T>
DemandEvaluation<T> trace_demand(const DemandSpec& spec, const PriceSystem<T>& p, const T& m) {
    DemandEvaluation<T> ev;
    if (spec.is_gale()) {
        auto hit = first_case(p.vec());
        if (!hit) throw std::logic_error("no normalization case applies");
        ev.normalized_price = hit->value;
        ev.price_case = hit->which;
    } else {
        ev.normalized_price = p.vec();
    }
    Bundle<T> x = family_demand(spec, PriceSystem<T>(ev.normalized_price), m);
    ev.bundle = x.vec();
    ev.walras_residual = ev.normalized_price.dot(ev.bundle) - m;
    return ev;
}

std::string to_string(PriceCase c) {
    switch (c) {
    case PriceCase::InCone: return "I";
    case PriceCase::TwoConstraints: return "II";
    case PriceCase::OneConstraint: return "III-i";
    case PriceCase::OneConstraintClamped: return "III-ii";
    }
    return "?";
}

#define GALE_INSTANTIATE(T)                                                                            \
    template class PriceSystem<T>;                                                                     \
    template class Bundle<T>;                                                                          \
    template bool cone_contains(const DemandSpec&, const PriceSystem<T>&);                             \
    template bool cone_interior(const DemandSpec&, const PriceSystem<T>&);                             \
    template std::vector<CaseResult<T>> applicable_cases(const PriceSystem<T>&);                       \
    template PriceSystem<T> normalize_price(const DemandSpec&, const PriceSystem<T>&);                 \
    template Bundle<T> gale_demand(const DemandSpec&, const PriceSystem<T>&, const T&);                \
    template PriceSystem<T> inverse_demand(const DemandSpec&, const Bundle<T>&);                       \
    template Bundle<T> family_demand(const DemandSpec&, const PriceSystem<T>&, const T&);              \
    template Bundle<T> evaluate_demand(const DemandSpec&, const PriceSystem<T>&, const T&);            \
    template DemandEvaluation<T> trace_demand(const DemandSpec&, const PriceSystem<T>&, const T&);

GALE_INSTANTIATE(double)
GALE_INSTANTIATE(Rational)

#undef GALE_INSTANTIATE

} // namespace gale
