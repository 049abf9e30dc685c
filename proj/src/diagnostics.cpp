#include "llf/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "llf/errors.hpp"
#include "llf/groundstate.hpp"

namespace llf::diag {

namespace {
double smoothstep(double t) {
    if (t <= 0) return 0.0;
    if (t >= 1) return 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}
double smoothstep_prime(double t) {
    if (t <= 0 || t >= 1) return 0.0;
    return 30.0 * t * t * (t - 1.0) * (t - 1.0);
}
} // namespace

double psi_cutoff(double r) {
    if (r <= 0.25) return 0.0;
    if (r < 0.5) return smoothstep((r - 0.25) / 0.25);
    if (r <= 1.5) return 1.0;
    if (r < 2.0) return 1.0 - smoothstep((r - 1.5) / 0.5);
    return 0.0;
}

double psi_cutoff_prime(double r) {
    if (r > 0.25 && r < 0.5) return smoothstep_prime((r - 0.25) / 0.25) / 0.25;
    if (r > 1.5 && r < 2.0) return -smoothstep_prime((r - 1.5) / 0.5) / 0.5;
    return 0.0;
}

ConservedReport conserved_report(const geom::RadialField& u) {
    ConservedReport rep;
    rep.mass = geom::integrate(u, 2);
    auto grad = geom::radial_derivative(u);
    auto lap = geom::laplacian_apply(u);
    auto w = u.grid.weights();
    double grad2 = 0.0, sext = 0.0, mom = 0.0, e2a = 0.0, e2b = 0.0, e2c = 0.0;
    for (std::size_t i = 0; i < u.grid.n; ++i) {
        double r = u.grid.node(i);
        double a2 = std::norm(u.values[i]);
        double g2 = std::norm(grad[i]);
        grad2 += w[i] * g2;
        sext += w[i] * a2 * a2 * a2;
        mom += w[i] * psi_cutoff_prime(r) * (grad[i] * std::conj(u.values[i])).imag();
        e2a += w[i] * std::norm(lap.values[i]);
        e2b += w[i] * g2 * a2 * a2;
        std::complex<double> gsq = grad[i] * grad[i];
        std::complex<double> ub2 = std::conj(u.values[i]) * std::conj(u.values[i]);
        e2c += w[i] * (gsq * a2 * ub2).real();
    }
    rep.energy = 0.5 * grad2 - sext / 6.0;
    rep.momentum_loc = mom;
    rep.E2 = e2a - 3.0 * e2b - 2.0 * e2c;
    return rep;
}

double s0_of(double b0) { return std::exp(3.0 * M_PI / (4.0 * b0)); }

std::vector<double> s_clock(const std::vector<double>& times,
                            const std::vector<double>& lambdas, double b0) {
    require(times.size() == lambdas.size(), "grid-mismatch", "series length mismatch");
    require(!times.empty(), "tracking-missing", "empty trajectory");
    std::vector<double> s(times.size());
    double acc = s0_of(b0);
    s[0] = acc;
    for (std::size_t i = 1; i < times.size(); ++i) {
        require(lambdas[i] > 0.0 && lambdas[i - 1] > 0.0, "nonpositive-lambda",
                "lambda series must stay positive");
        double dt = times[i] - times[i - 1];
        acc += 0.5 * dt * (1.0 / (lambdas[i] * lambdas[i]) +
                           1.0 / (lambdas[i - 1] * lambdas[i - 1]));
        s[i] = acc;
    }
    return s;
}

namespace {

// Savitzky-style local quadratic least squares over a 7-sample window;
// returns the derivative db/ds at the center.
double local_quadratic_slope(const std::vector<double>& s, const std::vector<double>& b,
                             std::size_t i) {
    std::size_t n = s.size();
    std::size_t lo = i >= 3 ? i - 3 : 0;
    std::size_t hi = std::min(n - 1, lo + 6);
    lo = hi >= 6 ? hi - 6 : 0;
    double s0 = s[i];
    // fit b ≈ c0 + c1 (s-s0) + c2 (s-s0)²
    double S0 = 0, S1 = 0, S2 = 0, S3 = 0, S4 = 0, T0 = 0, T1 = 0, T2 = 0;
    for (std::size_t k = lo; k <= hi; ++k) {
        double x = s[k] - s0;
        double x2 = x * x;
        S0 += 1;
        S1 += x;
        S2 += x2;
        S3 += x2 * x;
        S4 += x2 * x2;
        T0 += b[k];
        T1 += b[k] * x;
        T2 += b[k] * x2;
    }
    // solve the 3x3 normal equations for c1
    double A[3][3] = {{S0, S1, S2}, {S1, S2, S3}, {S2, S3, S4}};
    double rhs[3] = {T0, T1, T2};
    // gaussian elimination
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int rix = c + 1; rix < 3; ++rix)
            if (std::fabs(A[rix][c]) > std::fabs(A[piv][c])) piv = rix;
        std::swap(A[c], A[piv]);
        std::swap(rhs[c], rhs[piv]);
        for (int rix = c + 1; rix < 3; ++rix) {
            double f = A[rix][c] / A[c][c];
            for (int cc = c; cc < 3; ++cc) A[rix][cc] -= f * A[c][cc];
            rhs[rix] -= f * rhs[c];
        }
    }
    double c2 = rhs[2] / A[2][2];
    double c1 = (rhs[1] - A[1][2] * c2) / A[1][1];
    return c1;
}

} // namespace

LawReport law_monitor(const std::vector<double>& s, const std::vector<double>& b,
                      const std::vector<double>& lambda,
                      const std::vector<double>& E_local, double lambda0, double delta,
                      double slack_lo, double slack_hi,
                      const std::vector<double>* gamma_table) {
    std::size_t n = s.size();
    require(n > 0, "tracking-missing", "law monitor needs a tracked trajectory");
    require(b.size() == n && lambda.size() == n && E_local.size() == n, "grid-mismatch",
            "series length mismatch");
    LawReport rep;
    rep.s = s;
    rep.b = b;
    rep.lambda = lambda;
    rep.E_local = E_local;
    rep.b_log_s.resize(n);
    rep.log_lambda_bound.resize(n);
    rep.bs_smoothed.resize(n);
    rep.gamma_proxy.resize(n);
    rep.virial_rhs.resize(n);
    rep.band_ok.resize(n);
    rep.virial_ok.resize(n);
    rep.lambda_bound_ok.resize(n);
    double band_lo = slack_lo * 3.0 * M_PI / 4.0;
    double band_hi = slack_hi * 4.0 * M_PI / 3.0;
    for (std::size_t i = 0; i < n; ++i) {
        double ls = std::log(s[i]);
        rep.b_log_s[i] = b[i] * ls;
        rep.band_ok[i] = rep.b_log_s[i] >= band_lo && rep.b_log_s[i] <= band_hi;
        rep.log_lambda_bound[i] = 0.5 * std::log(lambda0) - 0.5 * M_PI * s[i] / ls;
        rep.lambda_bound_ok[i] = std::log(lambda[i]) <= rep.log_lambda_bound[i];
        rep.gamma_proxy[i] =
            gamma_table ? (*gamma_table)[i] : std::exp(-M_PI / std::max(b[i], 1e-12));
        rep.bs_smoothed[i] = local_quadratic_slope(s, b, i);
        rep.virial_rhs[i] = delta * E_local[i] - rep.gamma_proxy[i];
        rep.virial_ok[i] = rep.bs_smoothed[i] >= rep.virial_rhs[i];
    }
    double s_end = s.back();
    double s_begin = std::max(s.front(), s_end / 10.0);
    std::size_t i0 = 0;
    while (i0 + 1 < n && s[i0] < s_begin) ++i0;
    rep.decade_begin = i0;
    std::size_t cnt = 0, band_n = 0, vir_n = 0;
    for (std::size_t i = i0; i < n; ++i) {
        ++cnt;
        band_n += rep.band_ok[i] ? 1 : 0;
        vir_n += rep.virial_ok[i] ? 1 : 0;
    }
    rep.band_fraction = cnt ? static_cast<double>(band_n) / static_cast<double>(cnt) : 0.0;
    rep.virial_fraction = cnt ? static_cast<double>(vir_n) / static_cast<double>(cnt) : 0.0;
    return rep;
}

namespace {

// R² of the through-origin model z = a·(T−t), z = ‖∇u‖^{-2}·log|log(T−t)|
// (times 1 when the log-log correction is off). The model passes through the
// origin at the true blow-up time, which pins T sharply where a free-intercept
// correlation has a flat ridge.
double fit_quality(const std::vector<double>& t, const std::vector<double>& g,
                   std::size_t i0, double T, bool loglog) {
    double sxx = 0, sxz = 0, szz = 0;
    for (std::size_t i = i0; i < t.size(); ++i) {
        double dt = T - t[i];
        if (dt <= 0) return -2.0;
        if (loglog && !(std::fabs(std::log(dt)) > 1.0)) return -2.0; // need T−t < 1/e
        double ll = loglog ? std::log(std::fabs(std::log(dt))) : 1.0;
        double z = ll / (g[i] * g[i]);
        sxx += dt * dt;
        sxz += dt * z;
        szz += z * z;
    }
    if (sxx <= 0 || szz <= 0) return -2.0;
    double a = sxz / sxx;
    double ss_res = szz - 2.0 * a * sxz + a * a * sxx;
    return 1.0 - ss_res / szz;
}

} // namespace

LogLogFit loglog_fit(const std::vector<double>& t, const std::vector<double>& grad_norm) {
    require(t.size() == grad_norm.size(), "grid-mismatch", "series length mismatch");
    std::size_t n = t.size();
    // growing tail: scan back while strictly increasing
    std::size_t i0 = n;
    for (std::size_t i = n; i-- > 1;) {
        if (grad_norm[i] > grad_norm[i - 1])
            i0 = i - 1;
        else
            break;
    }
    require(i0 != n && n - i0 >= 30, "no-blow-up-trend",
            "need >= 30 strictly increasing tail samples");

    double t_end = t.back();
    double span = t_end - t[i0];
    // maximize the through-origin fit quality over T ∈ (t_end, t_end + span]:
    // coarse log grid, then golden-section refinement
    auto search = [&](bool loglog) {
        auto score = [&](double T) { return fit_quality(t, grad_norm, i0, T, loglog); };
        double bestT = t_end + 1e-3 * span, bestc = -2.0;
        for (int k = 0; k <= 400; ++k) {
            double f = std::pow(10.0, -8.0 + 8.0 * static_cast<double>(k) / 400.0);
            double T = t_end + f * span;
            double c = score(T);
            if (c > bestc) {
                bestc = c;
                bestT = T;
            }
        }
        // coarse neighbors sit within ±5% of (T − t_end); bracket generously
        double off = bestT - t_end;
        double lo = t_end + 0.8 * off;
        double hi = t_end + 1.25 * off;
        const double gr = 0.6180339887498949;
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = score(x1), f2 = score(x2);
        for (int it = 0; it < 200; ++it) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = score(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = score(x1);
            }
        }
        double T = 0.5 * (lo + hi);
        return std::pair<double, double>(T, score(T));
    };
    auto [T_ll, q_ll] = search(true);
    auto [T_pow, q_pow] = search(false);
    LogLogFit fit;
    fit.loglog_correction = q_ll >= q_pow;
    fit.T_hat = fit.loglog_correction ? T_ll : T_pow; // report the better model's T

    // local exponent: least-squares slope of log g against log(1/(T̂−t))
    double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
    for (std::size_t i = i0; i < n; ++i) {
        double dt = fit.T_hat - t[i];
        if (dt <= 0) continue;
        double x = std::log(1.0 / dt);
        double y = std::log(grad_norm[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        m += 1;
    }
    fit.exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);

    fit.ratio_lo = 1e300;
    fit.ratio_hi = -1e300;
    for (std::size_t i = i0; i < n; ++i) {
        double dt = fit.T_hat - t[i];
        if (dt <= 0 || std::fabs(std::log(dt)) <= 1.0) continue;
        double law = std::sqrt(std::log(std::fabs(std::log(dt))) / dt);
        double ratio = grad_norm[i] / law;
        fit.ratio_lo = std::min(fit.ratio_lo, ratio);
        fit.ratio_hi = std::max(fit.ratio_hi, ratio);
    }
    return fit;
}

ConcentrationPoint concentration_point(const geom::RadialField& u,
                                       const mod::ModulationState& st,
                                       const mod::EpsilonField& eps,
                                       const mod::ProfileFamily& fam, double a_param) {
    ConcentrationPoint pt;
    pt.A = std::exp(a_param / (M_PI * std::max(st.b, 1e-12)));
    pt.R = st.lambda * pt.A;
    const auto& g = u.grid;
    require(st.r_center - pt.R > g.r_lo && st.r_center + pt.R < g.r_hi,
            "window-exceeds-grid", "concentration window leaves the run grid");
    auto w = g.weights();
    double win = 0.0, tot = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        double a2 = std::norm(u.values[i]);
        tot += w[i] * a2;
        if (std::fabs(g.node(i) - st.r_center) < pt.R) win += w[i] * a2;
    }
    pt.window_mass = win;
    pt.total_mass = tot;
    pt.remainder = tot - win;
    // the same remainder in rescaled variables: 2π ∫_{|y|>A} |Q̃_b + ε|² μ dy
    double acc = 0.0;
    const auto& m = st.metric;
    for (std::size_t i = 0; i < eps.eps.size(); ++i) {
        double y = eps.y_at(i);
        if (std::fabs(y) <= pt.A) continue;
        double r = st.lambda * y + st.r_center;
        if (r <= 0.0 || (m.compact() && r >= m.rho)) continue;
        acc += std::norm(fam.qtilde(st.b, y) + eps.eps[i]) * m.h(r);
    }
    pt.eps_side_remainder = 2.0 * M_PI * acc * eps.dy;
    return pt;
}

double concentration_target(const mod::ModulationState& st) {
    return 2.0 * M_PI * st.metric.h(st.r_center) * gs::mass_closed_form();
}

} // namespace llf::diag
