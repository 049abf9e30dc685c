#pragma once
#include <complex>
#include <string>
#include <vector>

#include "llf/profiles.hpp"

namespace llf::rad {

using cplx = std::complex<double>;

// Linear radiation ζ_b: unique radial solution of
//   ∂_y²ζ − ζ + i b Λ ζ = Ψ_b,   ζ'(0) = 0,  ζ ∈ Ḣ¹,
// solved through Z(r) = ζ(r) e^{i b r²/4}:
//   Z'' − Z + (b² r²/4) Z = Ψ̂_b,   Ψ̂_b real and supported in [R_b⁻, R_b].
// Direct BVP route: Z₁ forward from (1, 0); the outgoing Z backward from
// Y_max = 8/b seeded with the exact-phase WKB form; Z̃ by variation of
// constants. All integration and quadrature in double-double.
struct RadiationSolution {
    double b = 0.0;
    double Gamma_b = 0.0;           // plateau average of the flux estimator
    double plateau_variation = 0.0; // (max - min)/mean over the window
    double plateau_lo = 0.0, plateau_hi = 0.0;
    std::string method = "direct-bvp";
    double zeta_grad_sq = 0.0;      // ∫ |∂_y ζ_b|²
    double ztilde_prime_at_0 = 0.0;
    cplx wronskian{0.0, 0.0};
    double wronskian_consistency = 0.0; // relative spread across eval points
    double basis_residual_sup = 0.0;    // sup |Z'' - Z + (b²r²/4)Z| / (1 + |Z|)

    // dump samples over [0, Y_max]
    std::vector<double> r;
    std::vector<cplx> Ztilde;
    std::vector<cplx> zeta;
    // plateau window samples: raw r|Z̃|² and the flux estimator (2k/b)|Z̃|²,
    // which shares its r→∞ limit and is flat where the raw series still
    // carries the 1/k(r) WKB amplitude drift
    std::vector<double> plateau_r, plateau_raw, plateau_comp;
};

struct SolveOptions {
    double seed_perturbation = 0.0; // relative kick on the backward seed
    bool check_plateau = true;
};

RadiationSolution solve_zeta(const prof::SelfSimilarProfile& profile,
                             const SolveOptions& opt = {});

// Semiclassical cross-check: Γ_b = D |∫ Z₁ Ψ̂_b|² / (|Wr(Z, Z₁)|² b^{2/3})
// with Z the leading Langer/Airy form, Wr evaluated at r = 0 and D = 2/π.
double gamma_semiclassical(const prof::SelfSimilarProfile& profile);

struct SlopeReport {
    double slope = 0.0;      // of log(b Γ_b) against 1/b; law predicts −π
    double intercept = 0.0;  // log D of the fitted prefactor
    std::vector<double> residuals;
};

SlopeReport gamma_slope_fit(const std::vector<std::pair<double, double>>& points);

} // namespace llf::rad
