#include "llf/profiles.hpp"

#include <cmath>
#include <limits>
#include <type_traits>

#include "llf/errors.hpp"
#include "llf/groundstate.hpp"
#include "llf/interp.hpp"
#include "llf/ode.hpp"

namespace llf::prof {

namespace {

// P'' = P - (b² y²/4) P - P⁵
template <class S>
state<S, 2> profile_rhs(double b, S y, const state<S, 2>& s) {
    S P = s[0];
    S P2 = P * P;
    S yb = y * scalar_traits<S>::from(0.5 * b);
    return {s[1], P - yb * yb * P - P2 * P2 * P};
}

template <class S>
constexpr double shoot_atol() {
    if constexpr (std::is_same_v<S, dd>) return 1e-28;
    return 1e-16;
}

// Saddle-connection classification of the shooting trajectory. The profile
// sits on the separatrix between solutions that cross zero (P(0) too large)
// and solutions that turn back up, P' >= 0, before decaying to the zero at
// R_b (P(0) too small). The first-zero location itself is not monotone in
// P(0) — large undershoots re-cross zero early through the nonlinear
// oscillation — but this classification is.
enum class Shot { Overshoot, Undershoot, Neither };

struct ShotResult {
    Shot shot = Shot::Neither;
    double where = std::numeric_limits<double>::infinity(); // zero location if overshoot
};

// March with the same fixed-step RK4 ladder that fills the sample tables, so
// the bisection re-tunes away the integrator's growing-mode bias consistently.
template <class S>
ShotResult classify(double b, S p0, double y_cap, double h_step) {
    state<S, 2> s{p0, S(0.0)};
    state<S, 2> prev = s;
    S y(0.0);
    const S h = scalar_traits<S>::from(h_step);
    ShotResult out;
    auto rhs = [b](S yy, const state<S, 2>& st) { return profile_rhs<S>(b, yy, st); };
    auto n = static_cast<std::size_t>(std::ceil(y_cap / h_step));
    S hit_y(0.0), lo_y(0.0);
    bool crossed = false;
    for (std::size_t k = 0; k < n; ++k) {
        prev = s;
        s = rk4_step<S, 2>(rhs, y, s, h);
        if (to_double(s[0]) <= 0.0) {
            out.shot = Shot::Overshoot;
            lo_y = y;
            hit_y = y + h;
            crossed = true;
            break;
        }
        y = y + h;
        if (to_double(y) > 0.1 && to_double(s[1]) >= 0.0) {
            out.shot = Shot::Undershoot;
            return out;
        }
    }
    if (!crossed) return out;

    // locate the zero by bisection over the bracketing step
    S lo = lo_y;
    state<S, 2> lo_state = prev;
    S hi = hit_y;
    for (int it = 0; it < 80 && to_double(hi - lo) > 1e-13 * std::max(1.0, to_double(hi)); ++it) {
        S mid = (lo + hi) * S(0.5);
        S hh = (mid - lo) * S(1.0 / 4.0);
        state<S, 2> st = lo_state;
        S yy = lo;
        for (int k = 0; k < 4; ++k) {
            st = rk4_step<S, 2>(rhs, yy, st, hh);
            yy = yy + hh;
        }
        if (to_double(st[0]) <= 0.0) {
            hi = mid;
        } else {
            lo = mid;
            lo_state = st;
        }
    }
    out.where = 0.5 * (to_double(lo) + to_double(hi));
    return out;
}

template <class S>
void fill_tables(SelfSimilarProfile& out, double b, S p0) {
    double margin = 8.0 * out.dy;
    auto n = static_cast<std::size_t>(std::ceil((out.R_b + margin) / out.dy)) + 1;
    out.P.resize(n);
    out.Pp.resize(n);
    out.P_dd.assign(n, dd(0.0));
    out.Pp_dd.assign(n, dd(0.0));
    auto rhs = [b](S y, const state<S, 2>& s) { return profile_rhs<S>(b, y, s); };
    state<S, 2> s{p0, S(0.0)};
    out.P[0] = to_double(p0);
    out.Pp[0] = 0.0;
    if constexpr (std::is_same_v<S, dd>) {
        out.P_dd[0] = s[0];
        out.Pp_dd[0] = s[1];
    } else {
        out.P_dd[0] = dd(out.P[0]);
        out.Pp_dd[0] = dd(0.0);
    }
    // accumulate y exactly like the classify ladder: re-seeding from the
    // sample index would perturb the trajectory at the double-rounding level,
    // which the e^{π/2b} growing mode then amplifies
    const int sub = 4; // RK4 substeps per sample cell
    S h = scalar_traits<S>::from(out.dy / sub);
    S y = scalar_traits<S>::from(0.0);
    for (std::size_t k = 1; k < n; ++k) {
        for (int j = 0; j < sub; ++j) {
            s = rk4_step<S, 2>(rhs, y, s, h);
            y = y + h;
        }
        out.P[k] = to_double(s[0]);
        out.Pp[k] = to_double(s[1]);
        if constexpr (std::is_same_v<S, dd>) {
            out.P_dd[k] = s[0];
            out.Pp_dd[k] = s[1];
        } else {
            out.P_dd[k] = dd(out.P[k]);
            out.Pp_dd[k] = dd(out.Pp[k]);
        }
    }
}

template <class S>
SelfSimilarProfile shoot(double b, double eta) {
    SelfSimilarProfile out;
    out.b = b;
    out.eta = eta;
    out.R_b = 2.0 * std::sqrt(1.0 - eta) / std::fabs(b);
    out.R_b_minus = 2.0 * (1.0 - eta) / std::fabs(b);
    out.dy = std::min(1e-3, (out.R_b - out.R_b_minus) / 64.0);

    const double q0 = gs::q(0.0);
    const double y_cap = out.R_b * 1.3 + 3.0;
    const double h_step = out.dy / 4.0; // same ladder as the table fill
    S lo = scalar_traits<S>::from(0.9 * q0);
    S hi = scalar_traits<S>::from(1.1 * q0);
    ShotResult r_lo = classify<S>(b, lo, y_cap, h_step);
    ShotResult r_hi = classify<S>(b, hi, y_cap, h_step);
    require(r_hi.shot == Shot::Overshoot && r_hi.where < out.R_b, "b-too-large",
            "upper shooting bound does not cross before R_b");
    // below the target the trajectory either turns up or crosses late; on the
    // overshoot branch the zero location decreases monotonically in P(0)
    require(!(r_lo.shot == Shot::Overshoot && r_lo.where < out.R_b), "no-bracket",
            "shooting interval [0.9 Q(0), 1.1 Q(0)] does not bracket the target");

    double zero_loc = r_hi.where;
    S p0 = hi;
    for (int it = 0; it < 140; ++it) {
        S mid = (lo + hi) * S(0.5);
        ShotResult rm = classify<S>(b, mid, y_cap, h_step);
        bool above_target = rm.shot == Shot::Overshoot && rm.where < out.R_b;
        if (rm.shot == Shot::Overshoot &&
            std::fabs(rm.where - out.R_b) < std::fabs(zero_loc - out.R_b)) {
            zero_loc = rm.where;
            p0 = mid;
        }
        if (above_target)
            hi = mid;
        else
            lo = mid;
        if (std::fabs(zero_loc - out.R_b) <= 1e-12 * out.R_b) break;
        if (to_double(hi - lo) < 1e-31 * q0) break;
    }
    // zero placement saturates at ~e^{π/b}·ulp of the shooting scalar; the
    // meaningful contract is the size of P at R_b, which stays exponentially
    // below it (|P'| shrinks as fast as the placement floor grows)
    double ulp_scale = std::is_same_v<S, dd> ? 1.6e-32 : 2.2e-16;
    double zero_tol = std::max(1e-6, 30.0 * ulp_scale * std::exp(M_PI / b) / out.R_b);
    require(std::fabs(zero_loc - out.R_b) <= zero_tol * out.R_b, "no-bracket",
            "shooting failed to place the first zero at R_b (got " +
                std::to_string(zero_loc) + ", want " + std::to_string(out.R_b) + ")");
    out.shoot_value = to_double(p0);
    fill_tables<S>(out, b, p0);
    // the achievable floor is ulp(P(0)) amplified by the e^{π/2b} growing mode
    double tol = 1e-10;
    if constexpr (!std::is_same_v<S, dd>) tol = std::max(tol, 1e-14 * std::exp(0.5 * M_PI / b));
    if (std::fabs(out.p_at(out.R_b)) >= tol) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "P(R_b) = %.3e did not vanish (zero at %.9f, R_b = %.9f)",
                      out.p_at(out.R_b), zero_loc, out.R_b);
        throw Error("no-bracket", msg);
    }
    return out;
}

} // namespace

double SelfSimilarProfile::p_at(double yq) const {
    double a = std::fabs(yq);
    if (a >= static_cast<double>(P.size() - 1) * dy) return 0.0;
    return interp_uniform(P, 0.0, dy, a);
}

double SelfSimilarProfile::pp_at(double yq) const {
    double a = std::fabs(yq);
    if (a >= static_cast<double>(Pp.size() - 1) * dy) return 0.0;
    double v = interp_uniform(Pp, 0.0, dy, a);
    return yq < 0 ? -v : v;
}

SelfSimilarProfile solve_profile(double b, double eta, ShootPrecision prec) {
    require(b > 0.0 && b <= 0.5, "parameter-out-of-range", "need 0 < b <= 0.5");
    require(eta > 0.0 && eta <= 0.05, "parameter-out-of-range", "need 0 < eta <= 0.05");
    if (prec == ShootPrecision::DoubleDouble) return shoot<dd>(b, eta);
    return shoot<double>(b, eta);
}

double Cutoff::phi(double y) const {
    double a = std::fabs(y);
    if (a <= r_lo) return 1.0;
    if (a >= r_hi) return 0.0;
    double t = (a - r_lo) / (r_hi - r_lo);
    return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double Cutoff::dphi(double y) const {
    double a = std::fabs(y);
    if (a <= r_lo || a >= r_hi) return 0.0;
    double w = r_hi - r_lo;
    double t = (a - r_lo) / w;
    double ds = 30.0 * t * t * (t - 1.0) * (t - 1.0);
    return (y < 0 ? 1.0 : -1.0) * ds / w;
}

double Cutoff::d2phi(double y) const {
    double a = std::fabs(y);
    if (a <= r_lo || a >= r_hi) return 0.0;
    double w = r_hi - r_lo;
    double t = (a - r_lo) / w;
    double d2s = 60.0 * t * (2.0 * t - 1.0) * (t - 1.0);
    return -d2s / (w * w);
}

TruncatedProfile truncate(const SelfSimilarProfile& p, double dy) {
    TruncatedProfile tp;
    tp.base = p;
    tp.phi_spec = Cutoff{p.R_b_minus, p.R_b};
    tp.dy = std::min(dy, p.dy);
    tp.y_max = p.R_b + 1.0;
    auto half = static_cast<std::size_t>(std::ceil(tp.y_max / tp.dy));
    tp.y_max = static_cast<double>(half) * tp.dy;
    std::size_t n = 2 * half + 1;
    tp.y.resize(n);
    tp.Qtilde.resize(n);
    tp.dQtilde.resize(n);
    tp.d2Qtilde.resize(n);
    tp.Psi.resize(n);
    tp.Sigma.resize(n);
    tp.Theta.resize(n);
    const double b = p.b;
    for (std::size_t i = 0; i < n; ++i) {
        double y = (static_cast<double>(i) - static_cast<double>(half)) * tp.dy;
        tp.y[i] = y;
        double a = std::fabs(y);
        double P = p.p_at(a);
        double Pp = p.pp_at(a); // dP/d|y|
        double phi = tp.phi_spec.phi(y);
        double dphi_y = tp.phi_spec.dphi(y);
        double d2phi = tp.phi_spec.d2phi(y);
        double sgn = (y < 0 ? -1.0 : 1.0);
        double dphi_a = sgn * dphi_y; // dφ/d|y|
        cplx gauge = std::polar(1.0, -0.25 * b * y * y);
        double F = phi * P;
        double dF_a = dphi_a * P + phi * Pp; // d(φP)/d|y|
        double Ppp = P - 0.25 * b * b * y * y * P - P * P * P * P * P; // profile ODE
        double d2F_a = d2phi * P + 2.0 * dphi_a * Pp + phi * Ppp;
        tp.Qtilde[i] = F * gauge;
        tp.dQtilde[i] = (sgn * dF_a - cplx(0.0, 0.5 * b * y) * F) * gauge;
        tp.d2Qtilde[i] = (d2F_a - cplx(0.0, 0.5 * b) * F - cplx(0.0, b * y) * sgn * dF_a -
                          0.25 * b * b * y * y * F) *
                         gauge;
        // Ψ_b = -2 φ' Q' - Q φ'' - i b y Q φ' - (φ⁵ - φ) Q |Q|⁴, with
        // Q = P e^{-iby²/4}; written through the gauge so the real P enters
        cplx Qb = P * gauge;
        cplx Qbp = (sgn * Pp - cplx(0.0, 0.5 * b * y) * P) * gauge;
        double P4 = P * P * P * P;
        double phi5 = phi * phi * phi * phi * phi;
        tp.Psi[i] = -2.0 * dphi_y * Qbp - d2phi * Qb - cplx(0.0, b * y) * dphi_y * Qb -
                    (phi5 - phi) * P4 * Qb;
        tp.Sigma[i] = tp.Qtilde[i].real();
        tp.Theta[i] = tp.Qtilde[i].imag();
    }
    return tp;
}

cplx TruncatedProfile::qtilde_at(double yq) const {
    if (std::fabs(yq) >= y_max) return {0.0, 0.0};
    return interp_uniform(Qtilde, -y_max, dy, yq);
}

cplx TruncatedProfile::dqtilde_at(double yq) const {
    if (std::fabs(yq) >= y_max) return {0.0, 0.0};
    return interp_uniform(dQtilde, -y_max, dy, yq);
}

cplx TruncatedProfile::d2qtilde_at(double yq) const {
    if (std::fabs(yq) >= y_max) return {0.0, 0.0};
    return interp_uniform(d2Qtilde, -y_max, dy, yq);
}

cplx TruncatedProfile::psi_at(double yq) const {
    if (std::fabs(yq) >= y_max) return {0.0, 0.0};
    return interp_uniform(Psi, -y_max, dy, yq);
}

namespace {
double trapz(const std::vector<double>& f, double dy) {
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
    return s * dy;
}
} // namespace

ProfileInvariants profile_invariants(const TruncatedProfile& tp) {
    std::size_t n = tp.y.size();
    std::vector<double> f2(n), f6(n), g2(n), mom(n);
    for (std::size_t i = 0; i < n; ++i) {
        double a2 = std::norm(tp.Qtilde[i]);
        f2[i] = a2;
        f6[i] = a2 * a2 * a2;
        g2[i] = std::norm(tp.dQtilde[i]);
        mom[i] = (tp.dQtilde[i] * std::conj(tp.Qtilde[i])).imag();
    }
    ProfileInvariants inv;
    inv.mass_excess = trapz(f2, tp.dy) - gs::mass_closed_form();
    inv.energy_1d = 0.5 * trapz(g2, tp.dy) - trapz(f6, tp.dy) / 6.0;
    // symmetric pairing keeps the odd integrand cancellation exact
    double m = 0.0;
    std::size_t half = n / 2;
    for (std::size_t k = 1; k <= half; ++k) m += mom[half + k] + mom[half - k];
    inv.momentum = (m + mom[half]) * tp.dy;
    double C = 10.0;
    double w = (1.0 - C * tp.base.eta) * M_PI / 4.0;
    double sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = std::abs(tp.Qtilde[i] - cplx(gs::q(tp.y[i]), 0.0));
        sup = std::max(sup, std::exp(w * std::fabs(tp.y[i])) * d);
    }
    inv.closeness = sup;
    return inv;
}

double d0_estimate(const std::vector<double>& bs, double eta) {
    require(bs.size() >= 2, "insufficient-samples", "d0 estimate needs >= 2 b values");
    std::vector<double> x, yv;
    for (double b : bs) {
        require(b > 0.0 && b <= 0.2 + 1e-12, "parameter-out-of-range",
                "d0 estimate wants b <= 0.2");
        auto p = solve_profile(b, eta);
        auto tp = truncate(p);
        x.push_back(b * b);
        yv.push_back(profile_invariants(tp).mass_excess);
    }
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += yv[i];
        sxx += x[i] * x[i];
        sxy += x[i] * yv[i];
    }
    double denom = n * sxx - sx * sx;
    require(std::fabs(denom) > 1e-30, "insufficient-samples", "degenerate b grid");
    double slope = (n * sxy - sx * sy) / denom;
    require(slope > 0.0, "negative-slope",
            "d0 came out nonpositive; profile solver defect");
    return slope;
}

} // namespace llf::prof
