#pragma once

// Forward-mode automatic differentiation via nested dual numbers.
//
// A Dual<T> carries one directional-derivative slot on top of T. Nesting
// stacks slots: Dual<Dual<cx>> propagates a value plus two independent
// first-order seeds, whose cross term is an exact mixed second derivative
// (hyper-dual evaluation, no truncation error beyond roundoff).
//
// Everything is complex-backed so the same tower serves real geometry and
// complex wavefunctions. Real consumers read .real() at the end.

#include <cmath>
#include <complex>

namespace gf {

using cx = std::complex<double>;

template <class T>
struct Dual {
    T a{};  // value
    T b{};  // derivative slot

    Dual() = default;
    Dual(T value) : a(std::move(value)) {}
    Dual(T value, T deriv) : a(std::move(value)), b(std::move(deriv)) {}
};

using d1 = Dual<cx>;
using d2 = Dual<d1>;
using d3 = Dual<d2>;
using d4 = Dual<d3>;

// Unit/lift helpers that cross all nesting levels in one constructor call
// (a chain of implicit conversions would be illegal beyond one level).
template <class T>
struct ad;

template <>
struct ad<cx> {
    static cx one() { return cx{1.0, 0.0}; }
    static cx lift(double v) { return cx{v, 0.0}; }
    static cx lift(cx v) { return v; }
    static cx value(const cx& v) { return v; }
};

template <class T>
struct ad<Dual<T>> {
    static Dual<T> one() { return Dual<T>{ad<T>::one()}; }
    static Dual<T> lift(double v) { return Dual<T>{ad<T>::lift(v)}; }
    static Dual<T> lift(cx v) { return Dual<T>{ad<T>::lift(v)}; }
    static cx value(const Dual<T>& v) { return ad<T>::value(v.a); }
};

// arithmetic

template <class T>
Dual<T> operator+(const Dual<T>& x, const Dual<T>& y) { return {x.a + y.a, x.b + y.b}; }
template <class T>
Dual<T> operator-(const Dual<T>& x, const Dual<T>& y) { return {x.a - y.a, x.b - y.b}; }
template <class T>
Dual<T> operator-(const Dual<T>& x) { return {-x.a, -x.b}; }

template <class T>
Dual<T> operator*(const Dual<T>& x, const Dual<T>& y) {
    return {x.a * y.a, x.a * y.b + x.b * y.a};
}

template <class T>
Dual<T> operator/(const Dual<T>& x, const Dual<T>& y) {
    T inv = y.a * y.a;
    return {x.a / y.a, (x.b * y.a - x.a * y.b) / inv};
}

// scalar interop (double and cx enter at any level without re-seeding)

template <class T>
Dual<T> operator+(const Dual<T>& x, double s) { return {x.a + ad<T>::lift(s), x.b}; }
template <class T>
Dual<T> operator+(double s, const Dual<T>& x) { return x + s; }
template <class T>
Dual<T> operator-(const Dual<T>& x, double s) { return {x.a - ad<T>::lift(s), x.b}; }
template <class T>
Dual<T> operator-(double s, const Dual<T>& x) { return {ad<T>::lift(s) - x.a, -x.b}; }
template <class T>
Dual<T> operator*(const Dual<T>& x, double s) { T f = ad<T>::lift(s); return {x.a * f, x.b * f}; }
template <class T>
Dual<T> operator*(double s, const Dual<T>& x) { return x * s; }
template <class T>
Dual<T> operator/(const Dual<T>& x, double s) { T f = ad<T>::lift(s); return {x.a / f, x.b / f}; }
template <class T>
Dual<T> operator/(double s, const Dual<T>& x) { return Dual<T>{ad<T>::lift(s)} / x; }

template <class T>
Dual<T> operator+(const Dual<T>& x, const cx& s) { return {x.a + ad<T>::lift(s), x.b}; }
template <class T>
Dual<T> operator+(const cx& s, const Dual<T>& x) { return x + s; }
template <class T>
Dual<T> operator-(const Dual<T>& x, const cx& s) { return {x.a - ad<T>::lift(s), x.b}; }
template <class T>
Dual<T> operator-(const cx& s, const Dual<T>& x) { return {ad<T>::lift(s) - x.a, -x.b}; }
template <class T>
Dual<T> operator*(const Dual<T>& x, const cx& s) { T f = ad<T>::lift(s); return {x.a * f, x.b * f}; }
template <class T>
Dual<T> operator*(const cx& s, const Dual<T>& x) { return x * s; }
template <class T>
Dual<T> operator/(const Dual<T>& x, const cx& s) { T f = ad<T>::lift(s); return {x.a / f, x.b / f}; }
template <class T>
Dual<T> operator/(const cx& s, const Dual<T>& x) { return Dual<T>{ad<T>::lift(s)} / x; }

// transcendentals (chain rule recurses down to std:: on complex)

template <class T>
Dual<T> sin(const Dual<T>& x) {
    using std::sin; using std::cos;
    return {sin(x.a), cos(x.a) * x.b};
}

template <class T>
Dual<T> cos(const Dual<T>& x) {
    using std::sin; using std::cos;
    return {cos(x.a), -(sin(x.a) * x.b)};
}

template <class T>
Dual<T> exp(const Dual<T>& x) {
    using std::exp;
    T e = exp(x.a);
    return {e, e * x.b};
}

template <class T>
Dual<T> sqrt(const Dual<T>& x) {
    using std::sqrt;
    T s = sqrt(x.a);
    return {s, x.b / (s * 2.0)};
}

template <class T>
Dual<T> log(const Dual<T>& x) {
    using std::log;
    return {log(x.a), x.b / x.a};
}

template <class T>
Dual<T> pow(const Dual<T>& x, double p) {
    using std::pow;
    return {pow(x.a, p), (pow(x.a, p - 1.0) * p) * x.b};
}

}  // namespace gf
