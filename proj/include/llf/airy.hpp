#pragma once
#include <complex>

namespace llf::airy {

// Standard Airy pair. Maclaurin series in double-double for |t| <= 7 (the
// cancellation in Ai for t > 0 needs the extra digits), asymptotic series
// beyond. Relative accuracy ~1e-9 or better on [-200, 200].
struct Values {
    double Ai, Aip, Bi, Bip;
};
Values airy(double t);

// The oscillatory-at--inf, growing-at-+inf combination A = Bi + i Ai used by
// the radiation construction: |A| never vanishes on the real line and
// W(A, conj A) = 2i/pi.
std::complex<double> pair_A(double t);
std::complex<double> pair_Aprime(double t);

// Langer variable for the turning-point equation b² y'' = x h²(x) y with
// h(x) = sqrt(1 - x/4): s(x) = ±((3/2)|∫_0^x sqrt|ξ| h dξ|)^{2/3}, in closed
// form. Strictly increasing, s(0) = 0, (2/3) s(2)^{3/2} = π/2.
double langer_s(double x);
double langer_s_prime(double x);
double langer_s_second(double x);

} // namespace llf::airy
