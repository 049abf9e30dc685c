#pragma once
#include <complex>
#include <vector>

#include "llf/dd.hpp"

namespace llf::prof {

using cplx = std::complex<double>;

// Self-similar profile Q_b solved through its real form
//   P'' - P + (b² y²/4) P + P⁵ = 0,  P'(0) = 0,  first zero of P at R_b,
// by bisection shooting on P(0). Integration and bisection run in
// double-double so the e^{π/2b} shooting sensitivity does not eat the
// P(R_b) tolerance at small b.
struct SelfSimilarProfile {
    double b = 0.0;
    double eta = 0.0;
    double R_b = 0.0;        // 2 sqrt(1-eta)/|b|
    double R_b_minus = 0.0;  // 2 (1-eta)/|b|
    double shoot_value = 0.0;

    // dense tables on y_k = k*dy, k = 0..n-1, covering [0, R_b + margin]
    double dy = 0.0;
    std::vector<double> P;
    std::vector<double> Pp;
    std::vector<dd> P_dd;   // kept for the radiation module
    std::vector<dd> Pp_dd;

    double p_at(double y) const;   // quintic interpolation
    double pp_at(double y) const;
};

enum class ShootPrecision { DoubleDouble, Double };

SelfSimilarProfile solve_profile(double b, double eta,
                                 ShootPrecision prec = ShootPrecision::DoubleDouble);

// C² quintic-polynomial smoothstep cutoff: 1 on [0, R_b^-], 0 beyond R_b.
struct Cutoff {
    double r_lo = 0.0, r_hi = 0.0;
    double phi(double y) const;
    double dphi(double y) const;
    double d2phi(double y) const;
};

struct TruncatedProfile {
    SelfSimilarProfile base;
    Cutoff phi_spec;
    double dy = 0.0;
    double y_max = 0.0;           // grid is symmetric: y in [-y_max, y_max]
    std::vector<double> y;
    std::vector<cplx> Qtilde;     // φ_b Q_b = φ P e^{-i b y²/4}
    std::vector<cplx> dQtilde;    // analytic ∂_y Q̃_b
    std::vector<cplx> d2Qtilde;   // analytic ∂_y² Q̃_b (via the profile ODE)
    std::vector<cplx> Psi;        // remainder Ψ_b
    std::vector<double> Sigma;    // Re Q̃_b
    std::vector<double> Theta;    // Im Q̃_b

    cplx qtilde_at(double y) const;
    cplx dqtilde_at(double y) const;
    cplx d2qtilde_at(double y) const;
    cplx psi_at(double y) const;
};

TruncatedProfile truncate(const SelfSimilarProfile& p, double dy = 1e-3);

struct ProfileInvariants {
    double mass_excess = 0.0;  // ∫|Q̃_b|² - ∫Q²
    double energy_1d = 0.0;    // ½∫|∂_y Q̃|² - (1/6)∫|Q̃|⁶
    double momentum = 0.0;     // Im ∫ ∂_y Q̃ conj(Q̃)
    double closeness = 0.0;    // sup e^{(1-10η)π|y|/4} |Q̃_b - Q|
};

ProfileInvariants profile_invariants(const TruncatedProfile& tp);

// Least-squares slope of mass_excess against b²; must come out positive.
double d0_estimate(const std::vector<double>& bs, double eta = 0.01);

} // namespace llf::prof
