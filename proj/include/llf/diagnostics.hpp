#pragma once
#include <string>
#include <vector>

#include "llf/geometry.hpp"
#include "llf/modulation.hpp"

namespace llf::diag {

struct ConservedReport {
    double mass = 0.0;
    double energy = 0.0;       // ½∫|∇u|² − (1/6)∫|u|⁶
    double momentum_loc = 0.0; // Im ∫ ∇ψ·∇u conj(u)
    double E2 = 0.0;           // ∫|Δu|² − 3∫|∇u|²|u|⁴ − 2Re∫(∇u)²|u|²ū²
};

// plateau cutoff of A4: 1 on [1/2, 3/2], 0 off [1/4, 2], C² smoothsteps between
double psi_cutoff(double r);
double psi_cutoff_prime(double r);

ConservedReport conserved_report(const geom::RadialField& u);

// rescaled clock s(t) = s₀ + ∫₀^t λ(τ)^{-2} dτ, s₀ = e^{3π/(4 b₀)}
std::vector<double> s_clock(const std::vector<double>& times,
                            const std::vector<double>& lambdas, double b0);
double s0_of(double b0);

struct LawReport {
    std::vector<double> s, b, b_log_s, lambda, log_lambda_bound;
    std::vector<double> bs_smoothed, E_local, gamma_proxy, virial_rhs;
    std::vector<char> band_ok, virial_ok, lambda_bound_ok;
    double band_fraction = 0.0;   // over the final tracked decade of s
    double virial_fraction = 0.0;
    std::size_t decade_begin = 0; // first index of the final decade window
};

// Band check slack_lo·3π/4 ≤ b·log s ≤ slack_hi·4π/3, the λ-bound comparison
// in log form, and the virial pair b_s ≥ δ·ℰ − Γ_b (proxy e^{-π/b} unless a
// radiation value is supplied per sample).
LawReport law_monitor(const std::vector<double>& s, const std::vector<double>& b,
                      const std::vector<double>& lambda,
                      const std::vector<double>& E_local, double lambda0, double delta,
                      double slack_lo = 0.5, double slack_hi = 2.0,
                      const std::vector<double>* gamma_table = nullptr);

struct LogLogFit {
    double T_hat = 0.0;
    double exponent = 0.0;   // d log‖∇u‖ / d log(1/(T̂−t)) on the tail
    double ratio_lo = 0.0;   // band of ‖∇u‖ / sqrt(log|log(T̂−t)|/(T̂−t))
    double ratio_hi = 0.0;
    bool loglog_correction = false; // true when the log-log factor improves the fit
};

LogLogFit loglog_fit(const std::vector<double>& t, const std::vector<double>& grad_norm);

struct ConcentrationPoint {
    double window_mass = 0.0;
    double total_mass = 0.0;
    double remainder = 0.0;          // total − window
    double eps_side_remainder = 0.0; // same integral done in (y, ε) variables
    double R = 0.0;                  // window radius λ·A
    double A = 0.0;
};

// Window rule R(t) = λ(t)·A(t) with A = e^{a/(π b(t))}.
ConcentrationPoint concentration_point(const geom::RadialField& u,
                                       const mod::ModulationState& st,
                                       const mod::EpsilonField& eps,
                                       const mod::ProfileFamily& fam, double a_param);

// limiting value 2π h(r_c) ‖Q‖²_{L²(ℝ)}
double concentration_target(const mod::ModulationState& st);

} // namespace llf::diag
