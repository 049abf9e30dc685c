#pragma once
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "llf/geometry.hpp"
#include "llf/modulation.hpp"

namespace llf::evo {

using cplx = std::complex<double>;

// Strang splitting for i∂_t u + Δu = σ|u|⁴u (σ = −1 focusing): exact
// nonlinear phase half-steps around a Crank–Nicolson solve of the tridiagonal
// radial Laplacian. Unconditionally stable, mass-conserving, time-symmetric.
geom::RadialField step(const geom::RadialField& u, double dt, double sign = -1.0);

// same but with a preassembled operator (used by run())
geom::RadialField step_with(const geom::TridiagonalOp& lap, const geom::RadialField& u,
                            double dt, double sign);

struct SimConfig {
    geom::RadialGrid grid;
    double c_dt = 0.01;        // dt = c_dt · λ_est²
    double dt_max = 5e-4;
    double max_time = 1.0;
    double lambda_floor_cells = 4.0; // stop when λ_est < cells·dr
    double grad_ceiling = 1e12;
    std::size_t max_steps = 20'000'000;
    std::size_t record_every = 5;   // monitor cadence in steps
    std::size_t snapshot_every = 0; // field snapshots every k-th record; 0 = off
    bool track_modulation = false;
    double b0 = 0.25;               // sets s₀ for the rescaled clock
    double sign = -1.0;             // −1 focusing, +1 defocusing
    mod::ProfileFamily family;      // required when tracking
    std::optional<mod::ModulationState> initial_guess;
};

struct TrajectoryRecord {
    std::vector<double> t, s;
    std::vector<double> mass, energy, momentum_loc, E2, grad_norm, lambda_est;
    std::vector<char> tracked;
    std::vector<mod::ModulationState> states; // valid where tracked
    std::vector<double> E_local;              // ℰ(t) where tracked, else 0
    std::vector<mod::EpsilonField> eps;       // kept only at snapshot records
    std::vector<std::size_t> snapshot_index;  // record index of each snapshot
    std::vector<geom::RadialField> snapshots;
    std::string stop_reason;
    bool tracking_lost = false;
    std::string tracking_lost_reason;
};

TrajectoryRecord run(const SimConfig& cfg, const geom::RadialField& u0);

// gradient-ratio scale estimate ‖Q'‖ √(2π h(r_peak)) / ‖∂_r u‖
double lambda_estimate(const geom::RadialField& u);

struct Eps0Spec {
    enum class Kind { None, GaussianEven } kind = Kind::GaussianEven;
    double width = 1.0;
    // amplitude: NaN means tune so that the conserved energy vanishes
    double amplitude = std::numeric_limits<double>::quiet_NaN();
};

// Initial data u₀ = λ₀^{-1/2} Q̃_{b₀}((r−r₀)/λ₀) e^{iγ₀} + ũ₀ with an even,
// well-localized, orthogonality-projected ε₀. strict_loglog gates the
// A1/A2/A5 window preconditions (A5 excludes every representable λ₀ unless
// b₀ ≳ 0.43, so trend runs pass false and get 𝒫(α*)-style data).
geom::RadialField synthesize_initial(const geom::RadialGrid& grid,
                                     const mod::ProfileFamily& fam, double lambda0,
                                     double r0, double gamma0, double b0,
                                     const Eps0Spec& spec, double alpha_star,
                                     bool strict_loglog = true);

} // namespace llf::evo
