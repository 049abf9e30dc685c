#include "llf/geometry.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "llf/errors.hpp"

namespace llf::geom {

namespace {

void check_admissible(const SurfaceMetric& m) {
    auto fail = [](const std::string& what, double r) {
        throw Error("admissibility-violation",
                    what + " (at r = " + std::to_string(r) + ")");
    };
    const double eps = 1e-7;
    if (std::fabs(m.h(0.0)) > 1e-10) fail("h(0) != 0", 0.0);
    // finite-difference consistency for h'(0) = 1
    double d0 = (m.h(eps) - m.h(0.0)) / eps;
    if (std::fabs(d0 - 1.0) > 1e-5) fail("h'(0) != 1", 0.0);
    if (std::fabs(m.h_prime(0.0) - 1.0) > 1e-6) fail("h_prime(0) != 1", 0.0);
    if (m.compact()) {
        if (std::fabs(m.h(m.rho)) > 1e-6) fail("h(rho) != 0", m.rho);
        double dr = (m.h(m.rho) - m.h(m.rho - eps)) / eps;
        if (std::fabs(dr + 1.0) > 1e-5) fail("h'(rho) != -1", m.rho);
        if (std::fabs(m.h_prime(m.rho) + 1.0) > 1e-6) fail("h_prime(rho) != -1", m.rho);
    }
    // positivity on (0, rho)
    double re = m.rho_eff();
    for (int i = 1; i < 400; ++i) {
        double r = re * static_cast<double>(i) / 400.0;
        if (m.compact() && r >= m.rho) break;
        if (m.h(r) <= 0.0) fail("h <= 0 inside (0, rho)", r);
    }
    // sampled growth check away from the poles (h' <= C h fails pointwise at
    // any pole since h ~ r there; the condition is about volume growth)
    double lo = re / 100.0, hi = 0.99 * re;
    for (int i = 0; i <= 200; ++i) {
        double r = lo + (hi - lo) * static_cast<double>(i) / 200.0;
        if (m.h_prime(r) > m.growth_C * m.h(r) + 1e-12)
            fail("growth condition h' <= C h violated", r);
    }
}

double default_growth_constant(const SurfaceMetric& m) {
    double re = m.rho_eff();
    double lo = re / 100.0, hi = 0.99 * re;
    double sup = 0.0;
    for (int i = 0; i <= 400; ++i) {
        double r = lo + (hi - lo) * static_cast<double>(i) / 400.0;
        double h = m.h(r);
        if (h > 0) sup = std::max(sup, m.h_prime(r) / h);
    }
    return 2.0 * std::max(sup, 1e-6);
}

} // namespace

SurfaceMetric make_metric(MetricKind kind, std::function<double(double)> custom_h,
                          std::function<double(double)> custom_h_prime, double rho) {
    SurfaceMetric m;
    m.kind = kind;
    switch (kind) {
    case MetricKind::EuclideanPlane:
        m.h = [](double r) { return r; };
        m.h_prime = [](double) { return 1.0; };
        m.rho = std::numeric_limits<double>::infinity();
        break;
    case MetricKind::RoundSphere:
        m.h = [](double r) { return std::sin(r); };
        m.h_prime = [](double r) { return std::cos(r); };
        m.rho = M_PI;
        break;
    case MetricKind::HyperbolicPlane:
        m.h = [](double r) { return std::sinh(r); };
        m.h_prime = [](double r) { return std::cosh(r); };
        m.rho = std::numeric_limits<double>::infinity();
        break;
    case MetricKind::Custom:
        require(static_cast<bool>(custom_h), "admissibility-violation",
                "custom metric requires h");
        m.h = custom_h;
        if (custom_h_prime) {
            m.h_prime = custom_h_prime;
        } else {
            auto h = custom_h;
            m.h_prime = [h](double r) {
                double e = 1e-6 * std::max(1.0, std::fabs(r));
                if (r - e < 0) return (h(r + e) - h(r)) / e;
                return (h(r + e) - h(r - e)) / (2 * e);
            };
        }
        m.rho = rho;
        break;
    }
    m.growth_C = default_growth_constant(m);
    check_admissible(m);
    return m;
}

std::vector<double> RadialGrid::nodes() const {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = node(i);
    return r;
}

std::vector<double> RadialGrid::weights() const {
    std::vector<double> w(n);
    double d = dr();
    for (std::size_t i = 0; i < n; ++i) w[i] = 2.0 * M_PI * metric.h(node(i)) * d;
    return w;
}

RadialGrid make_grid(const SurfaceMetric& m, double r_lo, double r_hi, std::size_t n) {
    require(n >= 16, "grid-too-coarse", "RadialGrid needs at least 16 nodes");
    require(r_lo >= 0.0 && r_hi > r_lo, "parameter-out-of-range", "bad grid window");
    require(!m.compact() || r_hi <= m.rho + 1e-12, "parameter-out-of-range",
            "grid window exceeds rho");
    RadialGrid g;
    g.metric = m;
    g.r_lo = r_lo;
    g.r_hi = std::min(r_hi, m.compact() ? m.rho : r_hi);
    g.n = n;
    return g;
}

RadialField make_field(const RadialGrid& g, const std::vector<cplx>& values) {
    require(values.size() == g.n, "grid-mismatch", "value count != node count");
    for (const cplx& v : values)
        require(std::isfinite(v.real()) && std::isfinite(v.imag()), "non-finite-field",
                "field contains NaN/Inf");
    return RadialField{g, values};
}

RadialField make_field(const RadialGrid& g, const std::function<cplx(double)>& f) {
    std::vector<cplx> v(g.n);
    for (std::size_t i = 0; i < g.n; ++i) v[i] = f(g.node(i));
    return make_field(g, v);
}

std::vector<cplx> TridiagonalOp::apply(const std::vector<cplx>& f) const {
    std::size_t n = diag.size();
    std::vector<cplx> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx acc = diag[i] * f[i];
        if (i > 0) acc += sub[i] * f[i - 1];
        if (i + 1 < n) acc += sup[i] * f[i + 1];
        out[i] = acc;
    }
    return out;
}

std::vector<double> TridiagonalOp::apply(const std::vector<double>& f) const {
    std::size_t n = diag.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = diag[i] * f[i];
        if (i > 0) acc += sub[i] * f[i - 1];
        if (i + 1 < n) acc += sup[i] * f[i + 1];
        out[i] = acc;
    }
    return out;
}

TridiagonalOp assemble_laplacian(const RadialGrid& g) {
    require(g.n >= 3, "grid-too-coarse", "laplacian needs at least 3 nodes");
    std::size_t n = g.n;
    double d = g.dr();
    TridiagonalOp op;
    op.sub.assign(n, 0.0);
    op.diag.assign(n, 0.0);
    op.sup.assign(n, 0.0);
    const auto& h = g.metric.h;
    for (std::size_t i = 0; i < n; ++i) {
        double ri = g.node(i);
        double hi = h(ri);
        double f_lo = h(ri - 0.5 * d); // face values of h
        double f_hi = h(ri + 0.5 * d);
        double c = 1.0 / (hi * d * d);
        // pole faces carry h = 0, killing the flux; clamp tiny negatives from
        // evaluating h just past a pole
        if (i == 0 && g.touches_origin_pole()) f_lo = 0.0;
        if (i + 1 == n && g.touches_far_pole()) f_hi = 0.0;
        double left = f_lo * c, right = f_hi * c;
        if (i > 0) op.sub[i] = left;
        if (i + 1 < n) op.sup[i] = right;
        op.diag[i] = -(left + right);
        // mirror ghost (value -f) across non-pole window faces => Dirichlet
        if (i == 0 && !g.touches_origin_pole()) op.diag[i] -= left;
        if (i + 1 == n && !g.touches_far_pole()) op.diag[i] -= right;
        if (i == 0 && g.touches_origin_pole()) op.diag[i] = -right;
        if (i + 1 == n && g.touches_far_pole()) op.diag[i] = -left;
    }
    return op;
}

RadialField laplacian_apply(const RadialField& f) {
    TridiagonalOp op = assemble_laplacian(f.grid);
    return RadialField{f.grid, op.apply(f.values)};
}

double integrate(const RadialField& f, int power) {
    require(power == 2 || power == 4 || power == 6 || power == 8,
            "parameter-out-of-range", "power must be in {2,4,6,8}");
    auto w = f.grid.weights();
    double s = 0.0;
    for (std::size_t i = 0; i < f.grid.n; ++i) {
        double a2 = std::norm(f.values[i]);
        double p = a2;
        for (int k = 2; k < power; k += 2) p *= a2;
        s += w[i] * p;
    }
    return s;
}

std::vector<cplx> radial_derivative(const RadialField& f) {
    std::size_t n = f.grid.n;
    double d = f.grid.dr();
    std::vector<cplx> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == 0)
            g[i] = (f.values[1] - f.values[0]) / d;
        else if (i + 1 == n)
            g[i] = (f.values[n - 1] - f.values[n - 2]) / d;
        else
            g[i] = (f.values[i + 1] - f.values[i - 1]) / (2.0 * d);
    }
    return g;
}

double grad_sq(const RadialField& f) {
    auto g = radial_derivative(f);
    auto w = f.grid.weights();
    double s = 0.0;
    for (std::size_t i = 0; i < f.grid.n; ++i) s += w[i] * std::norm(g[i]);
    return s;
}

// ---------------------------------------------------------------- H^s norms

struct HsCalculator::Impl {
    Eigen::VectorXd evals;   // eigenvalues of (I - Δ), all >= 1
    Eigen::MatrixXd evecs;   // eigenvectors of the W^{1/2}-symmetrized operator
    Eigen::VectorXd sqrt_w;  // sqrt of quadrature weights
};

HsCalculator::HsCalculator(const RadialGrid& g) {
    require(g.n <= 8192, "resolution-too-coarse",
            "dense H^s eigendecomposition capped at N = 8192");
    auto op = assemble_laplacian(g);
    auto w = g.weights();
    const auto n = static_cast<Eigen::Index>(g.n);
    Eigen::VectorXd diag(n), subdiag(n > 0 ? n - 1 : 0), sw(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        diag[i] = 1.0 - op.diag[static_cast<std::size_t>(i)];
        sw[i] = std::sqrt(w[static_cast<std::size_t>(i)]);
    }
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        // symmetrized off-diagonal of -Δ: -sup_i * sqrt(w_i / w_{i+1})
        double v = -op.sup[static_cast<std::size_t>(i)] * sw[i] / sw[i + 1];
        subdiag[i] = v;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, subdiag, Eigen::ComputeEigenvectors);
    require(es.info() == Eigen::Success, "eigensolver-no-convergence",
            "tridiagonal eigensolver failed");
    auto impl = std::make_shared<Impl>();
    impl->evals = es.eigenvalues();
    impl->evecs = es.eigenvectors();
    impl->sqrt_w = sw;
    impl_ = impl;
}

double HsCalculator::norm(const std::vector<cplx>& values, double s) const {
    const auto& im = *impl_;
    const auto n = im.sqrt_w.size();
    require(static_cast<Eigen::Index>(values.size()) == n, "grid-mismatch",
            "H^s norm: field does not match the calculator grid");
    Eigen::VectorXd re(n), imv(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        re[i] = values[static_cast<std::size_t>(i)].real() * im.sqrt_w[i];
        imv[i] = values[static_cast<std::size_t>(i)].imag() * im.sqrt_w[i];
    }
    Eigen::VectorXd cr = im.evecs.transpose() * re;
    Eigen::VectorXd ci = im.evecs.transpose() * imv;
    double acc = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        double mu = std::max(im.evals[k], 0.0);
        acc += std::pow(mu, s) * (cr[k] * cr[k] + ci[k] * ci[k]);
    }
    return std::sqrt(acc);
}

SobolevReport radial_sobolev_check(const RadialField& f, double s, double window_lo,
                                   double window_hi) {
    require(s > 0.0 && s < 0.5, "parameter-out-of-range", "s must lie in (0, 1/2)");
    const auto& m = f.grid.metric;
    require(window_lo > 0.0 && (!m.compact() || window_hi < m.rho),
            "support-violation", "support window must avoid the poles");
    double peak = 0.0;
    for (const auto& v : f.values) peak = std::max(peak, std::abs(v));
    for (std::size_t i = 0; i < f.grid.n; ++i) {
        double r = f.grid.node(i);
        if ((r < window_lo || r > window_hi) && std::abs(f.values[i]) > 1e-10 * peak)
            throw Error("support-violation",
                        "field is non-negligible outside the declared window");
    }
    double p = 2.0 / (1.0 - 2.0 * s);
    // ||f||_{L^p}^p = 2π ∫ |f|^p h dr  (midpoint rule)
    auto w = f.grid.weights();
    double lpp = 0.0;
    for (std::size_t i = 0; i < f.grid.n; ++i) lpp += w[i] * std::pow(std::abs(f.values[i]), p);
    double lp = std::pow(lpp, 1.0 / p);
    HsCalculator hs(f.grid);
    double hn = hs.norm(f.values, s);
    require(hn > 0.0, "parameter-out-of-range", "zero field has no Sobolev ratio");
    return SobolevReport{lp, hn, lp / hn, p};
}

} // namespace llf::geom
