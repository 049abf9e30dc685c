#include "llf/airy.hpp"

#include <cmath>

#include "llf/dd.hpp"
#include "llf/errors.hpp"

namespace llf::airy {

namespace {

const double kSqrt3 = 1.7320508075688772935;

struct Basis {
    dd f, fp, g, gp;
};

// Maclaurin basis of Y'' = tY: f(0)=1, f'(0)=0; g(0)=0, g'(0)=1, in dd.
Basis maclaurin_basis(double t) {
    Basis out;
    dd td(t);
    dd t2 = td * td;
    dd t3 = t2 * td;
    out.f = dd(1.0);
    out.fp = dd(0.0);
    out.g = td;
    out.gp = dd(1.0);
    dd term_f(1.0); // c_{3k} t^{3k}
    dd term_g = td; // c_{3k+1} t^{3k+1}
    for (int k = 0; k < 160; ++k) {
        double n3 = 3.0 * static_cast<double>(k);
        dd next_f = term_f * t3 / ((n3 + 2.0) * (n3 + 3.0));
        dd next_g = term_g * t3 / ((n3 + 3.0) * (n3 + 4.0));
        // derivative terms advance with one power less: (n+3) c_{n+3} t^{n+2}
        dd next_df = term_f * t2 / (n3 + 2.0);
        dd next_dg = term_g * t2 / (n3 + 3.0);
        out.f += next_f;
        out.g += next_g;
        out.fp += next_df;
        out.gp += next_dg;
        term_f = next_f;
        term_g = next_g;
        if (std::fabs(to_double(next_f)) < 1e-40 && std::fabs(to_double(next_g)) < 1e-40)
            break;
    }
    return out;
}

// u_k / v_k ladders summed in dd at fixed positive zeta (used for the
// startup constants only)
void uv_sums_dd(dd zeta, bool alternate, dd& su, dd& sv) {
    dd u(1.0), v(1.0);
    su = dd(1.0);
    sv = dd(1.0);
    dd zp(1.0);
    double prev = 1.0;
    for (int k = 1; k < 60; ++k) {
        double kk = static_cast<double>(k);
        // numerators/denominators are exact in double; divide in dd
        u = u * ((6.0 * kk - 5.0) * (6.0 * kk - 3.0) * (6.0 * kk - 1.0)) /
            (216.0 * kk * (2.0 * kk - 1.0));
        v = u * (6.0 * kk + 1.0) / (1.0 - 6.0 * kk);
        zp = zp * zeta;
        dd tu = u / zp;
        if (std::fabs(to_double(tu)) > prev) break; // asymptotic tail turned
        prev = std::fabs(to_double(tu));
        double sgn = alternate && (k % 2 == 1) ? -1.0 : 1.0;
        su += tu * sgn;
        sv += (v / zp) * sgn;
        if (prev < 1e-34) break;
    }
}

// Ai(0) and -Ai'(0), fixed at startup by matching the dd Maclaurin basis to
// the dd asymptotic expansion at T = 12 (W(f, g) = 1 makes the solve exact).
struct AiryConstants {
    dd c1, c2;
};

const AiryConstants& constants() {
    static const AiryConstants k = [] {
        const double T = 12.0;
        dd Td(T);
        dd sqT = llf::sqrt(Td);
        dd zeta = dd(2.0) / dd(3.0) * Td * sqT;
        dd t14 = llf::sqrt(sqT);
        static const dd pi_dd(3.141592653589793116e+00, 1.224646799147353207e-16);
        dd spi = llf::sqrt(pi_dd);
        dd sa, sva;
        uv_sums_dd(zeta, true, sa, sva);
        dd emz = llf::exp(-zeta);
        dd Ai = emz / (2.0 * spi * t14) * sa;
        dd Aip = -(t14 * emz / (2.0 * spi)) * sva;
        Basis b = maclaurin_basis(T);
        AiryConstants c;
        c.c1 = Ai * b.gp - Aip * b.g;
        c.c2 = Ai * b.fp - Aip * b.f;
        return c;
    }();
    return k;
}

// Ai = c1 f - c2 g, Bi = sqrt3 (c1 f + c2 g).
Values maclaurin(double t) {
    Basis b = maclaurin_basis(t);
    const auto& k = constants();
    Values v;
    v.Ai = to_double(k.c1 * b.f - k.c2 * b.g);
    v.Aip = to_double(k.c1 * b.fp - k.c2 * b.gp);
    v.Bi = kSqrt3 * to_double(k.c1 * b.f + k.c2 * b.g);
    v.Bip = kSqrt3 * to_double(k.c1 * b.fp + k.c2 * b.gp);
    return v;
}

// u_k, v_k coefficient ladders of the asymptotic expansions
void uv_sums(double zeta, bool alternate, double& su, double& sv) {
    double u = 1.0, v = 1.0;
    su = 1.0;
    sv = 1.0;
    double prev = 1.0;
    for (int k = 1; k < 60; ++k) {
        double kk = static_cast<double>(k);
        u *= (6.0 * kk - 5.0) * (6.0 * kk - 3.0) * (6.0 * kk - 1.0) /
             (216.0 * kk * (2.0 * kk - 1.0));
        v = u * (6.0 * kk + 1.0) / (1.0 - 6.0 * kk);
        double tu = u / std::pow(zeta, kk);
        if (std::fabs(tu) > prev) break; // asymptotic tail started growing
        prev = std::fabs(tu);
        double sgn = alternate && (k % 2 == 1) ? -1.0 : 1.0;
        su += sgn * tu;
        sv += sgn * (v / std::pow(zeta, kk));
        if (std::fabs(tu) < 1e-18) break;
    }
}

// same ladders split into even/odd parts, for the oscillatory side
void uv_sums_oscillatory(double zeta, double& ue, double& uo, double& ve, double& vo) {
    double u = 1.0, v = 1.0;
    ue = 1.0;
    uo = 0.0;
    ve = 1.0;
    vo = 0.0;
    double zp = 1.0;
    double prev = 1.0;
    for (int k = 1; k < 60; ++k) {
        double kk = static_cast<double>(k);
        u *= (6.0 * kk - 5.0) * (6.0 * kk - 3.0) * (6.0 * kk - 1.0) /
             (216.0 * kk * (2.0 * kk - 1.0));
        v = u * (6.0 * kk + 1.0) / (1.0 - 6.0 * kk);
        zp *= zeta;
        double tu = u / zp, tv = v / zp;
        if (std::fabs(tu) > prev) break;
        prev = std::fabs(tu);
        double sgn = (k / 2) % 2 == 1 ? -1.0 : 1.0; // (-1)^{floor(k/2)}
        if (k % 2 == 0) {
            ue += sgn * tu;
            ve += sgn * tv;
        } else {
            uo += sgn * tu;
            vo += sgn * tv;
        }
        if (std::fabs(tu) < 1e-18) break;
    }
}

Values asymptotic_pos(double t) {
    double sq = std::sqrt(t);
    double zeta = 2.0 / 3.0 * t * sq;
    double t14 = std::sqrt(std::sqrt(t));
    double spi = std::sqrt(M_PI);
    double sa, sva, sb, svb;
    uv_sums(zeta, true, sa, sva);
    uv_sums(zeta, false, sb, svb);
    Values v;
    v.Ai = std::exp(-zeta) / (2.0 * spi * t14) * sa;
    v.Aip = -t14 * std::exp(-zeta) / (2.0 * spi) * sva;
    v.Bi = std::exp(zeta) / (spi * t14) * sb;
    v.Bip = t14 * std::exp(zeta) / spi * svb;
    return v;
}

Values asymptotic_neg(double t) {
    double x = -t;
    double sq = std::sqrt(x);
    double zeta = 2.0 / 3.0 * x * sq;
    double x14 = std::sqrt(std::sqrt(x));
    double spi = std::sqrt(M_PI);
    double th = zeta - 0.25 * M_PI;
    double c = std::cos(th), s = std::sin(th);
    double ue, uo, ve, vo;
    uv_sums_oscillatory(zeta, ue, uo, ve, vo);
    Values v;
    v.Ai = (c * ue + s * uo) / (spi * x14);
    v.Bi = (-s * ue + c * uo) / (spi * x14);
    v.Aip = (s * ve - c * vo) * x14 / spi;
    v.Bip = (c * ve + s * vo) * x14 / spi;
    return v;
}

} // namespace

Values airy(double t) {
    require(std::fabs(t) <= 250.0, "parameter-out-of-range",
            "airy evaluated outside [-250, 250]");
    if (t >= 7.0) return asymptotic_pos(t);
    if (t <= -7.0) return asymptotic_neg(t);
    return maclaurin(t);
}

std::complex<double> pair_A(double t) {
    Values v = airy(t);
    return {v.Bi, v.Ai};
}

std::complex<double> pair_Aprime(double t) {
    Values v = airy(t);
    return {v.Bip, v.Aip};
}

// ---------------------------------------------------------------- Langer map

namespace {
// I(x) = ∫_0^x sqrt(ξ) h(ξ) dξ for x in [0, 2]:  ξ = 4 sin²θ gives
// I = 2θ - sin(4θ)/2 at θ = asin(sqrt(x)/2).
double langer_I_pos(double x) {
    double th = std::asin(0.5 * std::sqrt(x));
    return 2.0 * th - 0.5 * std::sin(4.0 * th);
}
// J(x) = ∫_x^0 sqrt|ξ| h dξ for x <= 0:  ξ = -4 sinh²φ gives
// J = sinh(4φ)/2 - 2φ at φ = asinh(sqrt(-x)/2).
double langer_J_neg(double x) {
    double ph = std::asinh(0.5 * std::sqrt(-x));
    return 0.5 * std::sinh(4.0 * ph) - 2.0 * ph;
}
} // namespace

double langer_s(double x) {
    require(x <= 2.0, "parameter-out-of-range", "langer map defined for x <= 2");
    if (x == 0.0) return 0.0;
    if (x > 0.0) return std::pow(1.5 * langer_I_pos(x), 2.0 / 3.0);
    return -std::pow(1.5 * langer_J_neg(x), 2.0 / 3.0);
}

double langer_s_prime(double x) {
    require(x <= 2.0, "parameter-out-of-range", "langer map defined for x <= 2");
    // s (s')² = x h²(x) along both branches; near 0, s = x - x²/20 + O(x³)
    if (std::fabs(x) < 1e-5) return 1.0 - x / 10.0;
    double s = langer_s(x);
    double h2 = 1.0 - 0.25 * x;
    return std::sqrt(std::fabs(x) * h2 / std::fabs(s));
}

double langer_s_second(double x) {
    double e = 1e-5;
    if (x + e > 2.0) // one-sided at the domain edge x = 2
        return (3.0 * langer_s_prime(x) - 4.0 * langer_s_prime(x - e) +
                langer_s_prime(x - 2.0 * e)) /
               (2.0 * e);
    return (langer_s_prime(x + e) - langer_s_prime(x - e)) / (2.0 * e);
}

} // namespace llf::airy
