#pragma once
#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace llf::geom {

using cplx = std::complex<double>;

enum class MetricKind { EuclideanPlane, RoundSphere, HyperbolicPlane, Custom };

// Rotationally symmetric surface g = dr² + h²(r) g_{S¹}. rho is the domain
// radius (π for the sphere, +inf otherwise unless custom says so).
struct SurfaceMetric {
    MetricKind kind = MetricKind::EuclideanPlane;
    std::function<double(double)> h;
    std::function<double(double)> h_prime;
    double rho = std::numeric_limits<double>::infinity();
    double growth_C = 2.0;

    bool compact() const { return std::isfinite(rho); }
    // reference radius standing in for rho on noncompact surfaces
    double rho_eff() const { return compact() ? rho : 100.0; }
};

// make_metric validates the admissibility invariants by sampling and throws
// Error("admissibility-violation", ...) naming the failed invariant.
SurfaceMetric make_metric(MetricKind kind,
                          std::function<double(double)> custom_h = nullptr,
                          std::function<double(double)> custom_h_prime = nullptr,
                          double rho = std::numeric_limits<double>::infinity());

// Uniform cell-centered grid on [r_lo, r_hi] ⊂ [0, rho]: nodes sit at
// r_lo + (i+1/2)·dr, so 1/h is never evaluated at a pole.
struct RadialGrid {
    SurfaceMetric metric;
    double r_lo = 0.0;
    double r_hi = 1.0;
    std::size_t n = 16;

    double dr() const { return (r_hi - r_lo) / static_cast<double>(n); }
    double node(std::size_t i) const { return r_lo + (static_cast<double>(i) + 0.5) * dr(); }
    std::vector<double> nodes() const;
    // quadrature weights 2π h(r_i) dr (midpoint rule in the surface measure)
    std::vector<double> weights() const;
    bool touches_origin_pole() const { return r_lo <= 1e-14; }
    bool touches_far_pole() const {
        return metric.compact() && r_hi >= metric.rho - 1e-14;
    }
    bool same_layout(const RadialGrid& o) const {
        return r_lo == o.r_lo && r_hi == o.r_hi && n == o.n;
    }
};

RadialGrid make_grid(const SurfaceMetric& m, double r_lo, double r_hi, std::size_t n);

struct RadialField {
    RadialGrid grid;
    std::vector<cplx> values;
};

RadialField make_field(const RadialGrid& g, const std::vector<cplx>& values);
RadialField make_field(const RadialGrid& g, const std::function<cplx(double)>& f);

// Tridiagonal action of the radial Laplace–Beltrami operator assembled in
// conservative form (1/h)(h f')', half-cell offset grid. Zero flux at pole
// faces (h vanishes there, which encodes f'(pole)=0); Dirichlet at interior
// window faces. Exactly self-adjoint in the h-weighted inner product.
struct TridiagonalOp {
    std::vector<double> sub, diag, sup;
    std::vector<cplx> apply(const std::vector<cplx>& f) const;
    std::vector<double> apply(const std::vector<double>& f) const;
};

TridiagonalOp assemble_laplacian(const RadialGrid& g);

RadialField laplacian_apply(const RadialField& f);

// 2π ∫ |f|^power h dr, power ∈ {2, 4, 6, 8}.
double integrate(const RadialField& f, int power);

// ∫ |∂_r f|² dx (centered differences, one-sided at the window ends).
double grad_sq(const RadialField& f);
std::vector<cplx> radial_derivative(const RadialField& f);

// Spectral fractional norms of the discretized radial (I−Δ) on the field's
// grid (dense symmetric-tridiagonal eigendecomposition, h-weighted).
class HsCalculator {
public:
    explicit HsCalculator(const RadialGrid& g);
    // ‖(I−Δ)^{s/2} f‖_{L²(M)}
    double norm(const std::vector<cplx>& values, double s) const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

struct SobolevReport {
    double lp = 0.0;
    double hs = 0.0;
    double ratio = 0.0;
    double p = 0.0;
};

// ‖f‖_{L^p(M)} / ‖f‖_{H^s(M)} with p = 2/(1−2s); f must be supported inside
// support_window = (lo, hi) strictly away from the poles.
SobolevReport radial_sobolev_check(const RadialField& f, double s,
                                   double window_lo, double window_hi);

} // namespace llf::geom
