#pragma once
#include <cmath>

namespace llf {

// Double-double scalar: an unevaluated sum hi + lo with |lo| <= ulp(hi)/2,
// giving ~31 significant digits. Classic error-free transforms
// (Dekker/Knuth two-sum, fma-based two-prod). Used by the shooting and
// radiation paths where quantities of size exp(+-pi/2b) multiply.
struct dd {
    double hi = 0.0;
    double lo = 0.0;

    constexpr dd() = default;
    constexpr dd(double h) : hi(h), lo(0.0) {}
    constexpr dd(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi; }
};

namespace detail {
inline dd quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}
inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}
inline dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}
} // namespace detail

inline dd operator+(dd a, dd b) {
    dd s = detail::two_sum(a.hi, b.hi);
    dd t = detail::two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = detail::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return detail::quick_two_sum(s.hi, s.lo);
}
inline dd operator-(dd a) { return {-a.hi, -a.lo}; }
inline dd operator-(dd a, dd b) { return a + (-b); }

inline dd operator*(dd a, dd b) {
    dd p = detail::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return detail::quick_two_sum(p.hi, p.lo);
}

inline dd operator/(dd a, dd b) {
    double q1 = a.hi / b.hi;
    dd r = a - dd(q1) * b;
    double q2 = r.hi / b.hi;
    r = r - dd(q2) * b;
    double q3 = r.hi / b.hi;
    dd q = detail::quick_two_sum(q1, q2);
    return q + dd(q3);
}

inline dd& operator+=(dd& a, dd b) { a = a + b; return a; }
inline dd& operator-=(dd& a, dd b) { a = a - b; return a; }
inline dd& operator*=(dd& a, dd b) { a = a * b; return a; }
inline dd& operator/=(dd& a, dd b) { a = a / b; return a; }

inline dd operator+(dd a, double b) { return a + dd(b); }
inline dd operator+(double a, dd b) { return dd(a) + b; }
inline dd operator-(dd a, double b) { return a - dd(b); }
inline dd operator-(double a, dd b) { return dd(a) - b; }
inline dd operator*(dd a, double b) { return a * dd(b); }
inline dd operator*(double a, dd b) { return dd(a) * b; }
inline dd operator/(dd a, double b) { return a / dd(b); }
inline dd operator/(double a, dd b) { return dd(a) / b; }

inline bool operator<(dd a, dd b)  { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(dd a, dd b)  { return b < a; }
inline bool operator<=(dd a, dd b) { return !(b < a); }
inline bool operator>=(dd a, dd b) { return !(a < b); }
inline bool operator==(dd a, dd b) { return a.hi == b.hi && a.lo == b.lo; }

inline double to_double(dd a) { return a.hi; }
inline double to_double(double a) { return a; }

inline dd fabs(dd a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }

inline dd sqrt(dd a) {
    if (a.hi == 0.0) return {0.0, 0.0};
    // one Newton step on x = sqrt(a) starting from the double estimate
    double x = std::sqrt(a.hi);
    dd x2 = dd(x) * dd(x);
    dd err = (a - x2) / (2.0 * x);
    return dd(x) + err;
}

inline dd exp(dd a) {
    // range-reduce by ln 2, Taylor on the remainder
    static const dd ln2(6.93147180559945286e-01, 2.31904681384629956e-17);
    double n = std::floor(a.hi / ln2.hi + 0.5);
    dd r = a - ln2 * n;
    dd term(1.0), sum(1.0);
    for (int k = 1; k < 40; ++k) {
        term = term * r / static_cast<double>(k);
        sum += term;
        if (std::fabs(term.hi) < 1e-36 * std::fabs(sum.hi)) break;
    }
    return sum * std::ldexp(1.0, static_cast<int>(n));
}

// numeric-ish traits used by the templated steppers
template <class S> struct scalar_traits;
template <> struct scalar_traits<double> {
    static double from(double v) { return v; }
};
template <> struct scalar_traits<dd> {
    static dd from(double v) { return dd(v); }
};

} // namespace llf
