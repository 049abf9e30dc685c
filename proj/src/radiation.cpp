#include "llf/radiation.hpp"

#include <algorithm>
#include <cmath>

#include "llf/airy.hpp"
#include "llf/errors.hpp"
#include "llf/ode.hpp"

namespace llf::rad {

namespace {

struct ddc {
    dd re, im;
};
ddc operator+(ddc a, ddc b) { return {a.re + b.re, a.im + b.im}; }
ddc operator-(ddc a, ddc b) { return {a.re - b.re, a.im - b.im}; }
ddc operator*(ddc a, ddc b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
dd abs2(ddc a) { return a.re * a.re + a.im * a.im; }
ddc conj(ddc a) { return {a.re, -a.im}; }
ddc div(ddc a, ddc b) {
    dd d = abs2(b);
    ddc n = a * conj(b);
    return {n.re / d, n.im / d};
}
cplx to_cplx(ddc a) { return {to_double(a.re), to_double(a.im)}; }

// real source Ψ̂_b(r) = −2φ'P' − Pφ'' − (φ⁵−φ)P⁵, supported in [R⁻, R_b]
struct SourceEval {
    const prof::SelfSimilarProfile* p;
    prof::Cutoff cut;

    dd psi_hat(dd r) const {
        double rd = to_double(r);
        if (rd <= cut.r_lo || rd >= cut.r_hi) return dd(0.0);
        double dy = p->dy;
        auto k = static_cast<std::size_t>(rd / dy);
        if (k + 1 >= p->P_dd.size()) return dd(0.0);
        // dd Hermite cubic between the (P, P') table nodes
        dd t = (r - dd(static_cast<double>(k) * dy)) / dy;
        dd t2 = t * t, t3 = t2 * t;
        dd P = (2.0 * t3 - 3.0 * t2 + 1.0) * p->P_dd[k] +
               dd(dy) * (t3 - 2.0 * t2 + t) * p->Pp_dd[k] +
               (-2.0 * t3 + 3.0 * t2) * p->P_dd[k + 1] +
               dd(dy) * (t3 - t2) * p->Pp_dd[k + 1];
        dd Pp = ((6.0 * t2 - 6.0 * t) / dy) * p->P_dd[k] +
                (3.0 * t2 - 4.0 * t + 1.0) * p->Pp_dd[k] +
                ((-6.0 * t2 + 6.0 * t) / dy) * p->P_dd[k + 1] +
                (3.0 * t2 - 2.0 * t) * p->Pp_dd[k + 1];
        dd w = dd(cut.r_hi) - dd(cut.r_lo);
        dd tt = (r - dd(cut.r_lo)) / w;
        dd s = tt * tt * tt * (10.0 + tt * (-15.0 + 6.0 * tt));
        dd phi = dd(1.0) - s;
        dd dphi = -(30.0 * tt * tt * (tt - 1.0) * (tt - 1.0)) / w;
        dd d2phi = -(60.0 * tt * (2.0 * tt - 1.0) * (tt - 1.0)) / (w * w);
        dd P2 = P * P;
        dd P5 = P2 * P2 * P;
        dd phi2 = phi * phi;
        dd phi5 = phi2 * phi2 * phi;
        return -2.0 * dphi * Pp - d2phi * P - (phi5 - phi) * P5;
    }

    dd potential(dd r, double b) const {
        dd half_br = dd(0.5 * b) * r;
        return dd(1.0) - half_br * half_br;
    }
};

struct State {
    ddc Z{dd(0.0), dd(0.0)};
    ddc Zp{dd(0.0), dd(0.0)};
    ddc J{dd(0.0), dd(0.0)}; // running ∫ Z Ψ̂ dr along the march direction
};

// rolling 5-point window for a finite-difference check that the carried
// solution really satisfies Z'' = (1 - b²r²/4) Z
struct ResidualProbe {
    double h = 0.0;
    double b = 0.0;
    cplx window[5];
    double r_center = 0.0;
    int filled = 0;
    double sup = 0.0;

    void push(double r, cplx z) {
        for (int i = 0; i < 4; ++i) window[i] = window[i + 1];
        window[4] = z;
        if (filled < 5) {
            ++filled;
            return;
        }
        double rc = r - 2.0 * h;
        cplx d2 = (-window[0] + 16.0 * window[1] - 30.0 * window[2] +
                   16.0 * window[3] - window[4]) /
                  (12.0 * h * h);
        cplx res = d2 - (1.0 - 0.25 * b * b * rc * rc) * window[2];
        sup = std::max(sup, std::abs(res) / (1.0 + std::abs(window[2])));
    }
};

// march `nsub` RK4 substeps of size h (signed) starting at r. The Z carried
// here is a homogeneous solution; Ψ̂ only feeds the running inner product
// J = ∫ Z Ψ̂ of the variation-of-constants formula.
void march(const SourceEval& src, double b, State& st, dd r, dd h, int nsub,
           ResidualProbe* probe = nullptr) {
    using vec = state<dd, 6>;
    auto rhs = [&](dd rr, const vec& s) -> vec {
        dd V = src.potential(rr, b);
        dd psi = src.psi_hat(rr);
        return vec{s[1], V * s[0], s[3], V * s[2], s[0] * psi, s[2] * psi};
    };
    vec s{st.Z.re, st.Zp.re, st.Z.im, st.Zp.im, st.J.re, st.J.im};
    for (int k = 0; k < nsub; ++k) {
        s = rk4_step<dd, 6>(rhs, r, s, h);
        r = r + h;
        if (probe) probe->push(to_double(r), cplx(to_double(s[0]), to_double(s[2])));
    }
    st = State{{s[0], s[2]}, {s[1], s[3]}, {s[4], s[5]}};
}

} // namespace

RadiationSolution solve_zeta(const prof::SelfSimilarProfile& profile,
                             const SolveOptions& opt) {
    const double b = profile.b;
    require(b >= 0.1 && b <= 0.4, "parameter-out-of-range",
            "solve_zeta wants 0.1 <= b <= 0.4");
    SourceEval src{&profile, prof::Cutoff{profile.R_b_minus, profile.R_b}};

    const double Rm = profile.R_b_minus;
    const double Rb = profile.R_b;
    const double y_max = 8.0 / b;
    const double h_cap = std::min(1e-3, b / 100.0);

    RadiationSolution sol;
    sol.b = b;
    sol.plateau_lo = 3.0 / b;
    sol.plateau_hi = 6.0 / b;

    const std::size_t n_dump = 2048;
    const double dump_dr = y_max / static_cast<double>(n_dump - 1);
    const int per = std::max(1, static_cast<int>(std::ceil(dump_dr / h_cap)));
    const dd h_fwd = dd(dump_dr / per);
    const dd h_bwd = -h_fwd;

    std::vector<State> fwd(n_dump), bwd(n_dump);
    std::vector<char> have_bwd(n_dump, 0);
    const std::size_t i_ann_lo = static_cast<std::size_t>(Rm / dump_dr); // node ≤ Rm

    // ---- forward pass: Z1(0)=1, Z1'(0)=0, J = ∫_0^r Z1 Ψ̂
    ResidualProbe probe_f;
    probe_f.h = to_double(h_fwd);
    probe_f.b = b;
    fwd[0] = State{{dd(1.0), dd(0.0)}, {dd(0.0), dd(0.0)}, {dd(0.0), dd(0.0)}};
    for (std::size_t i = 0; i + 1 < n_dump; ++i) {
        State st = fwd[i];
        march(src, b, st, dd(static_cast<double>(i) * dump_dr), h_fwd, per, &probe_f);
        fwd[i + 1] = st;
    }
    sol.basis_residual_sup = probe_f.sup;
    auto partial_fwd = [&](double target) {
        // exact state at `target` replayed from the dump node below it
        auto i = static_cast<std::size_t>(target / dump_dr);
        double r0 = static_cast<double>(i) * dump_dr;
        State st = fwd[i];
        double gap = target - r0;
        if (gap > 1e-14) {
            int ns = std::max(2, static_cast<int>(std::ceil(gap / h_cap)));
            march(src, b, st, dd(r0), dd(gap / ns), ns);
        }
        return st;
    };
    State f_at_Rm = partial_fwd(Rm);
    State f_at_Rb = partial_fwd(Rb);
    ddc J1_full = f_at_Rb.J; // ∫_{R⁻}^{R_b} Z1 Ψ̂ (Ψ̂ vanishes below R⁻)

    // ---- backward pass from y_max with the exact-phase WKB outgoing seed
    {
        auto kofr = [&](double r) { return std::sqrt(0.25 * b * b * r * r - 1.0); };
        double k0 = kofr(y_max);
        double S = 0.5 * y_max * k0 - std::acosh(0.5 * b * y_max) / b;
        cplx seed = std::polar(1.0 / std::sqrt(k0), S);
        double kp = 0.25 * b * b * y_max / k0;
        cplx seedp = seed * (cplx(0.0, k0) - kp / (2.0 * k0));
        if (opt.seed_perturbation != 0.0) {
            seed *= 1.0 + opt.seed_perturbation;
            seedp *= 1.0 - 0.5 * opt.seed_perturbation;
        }
        bwd[n_dump - 1] =
            State{{dd(seed.real()), dd(seed.imag())}, {dd(seedp.real()), dd(seedp.imag())}, {}};
        have_bwd[n_dump - 1] = 1;
        ResidualProbe probe_b;
        probe_b.h = -to_double(h_fwd);
        probe_b.b = b;
        for (std::size_t i = n_dump - 1; i > i_ann_lo; --i) {
            State st = bwd[i];
            march(src, b, st, dd(static_cast<double>(i) * dump_dr), h_bwd, per, &probe_b);
            bwd[i - 1] = st;
            have_bwd[i - 1] = 1;
        }
        sol.basis_residual_sup = std::max(sol.basis_residual_sup, probe_b.sup);
    }
    auto partial_bwd = [&](double target) {
        // backward-pass state at `target`, replayed forward from the node below
        auto i = static_cast<std::size_t>(target / dump_dr);
        double r0 = static_cast<double>(i) * dump_dr;
        State st = bwd[i];
        double gap = target - r0;
        if (gap > 1e-14) {
            int ns = std::max(2, static_cast<int>(std::ceil(gap / h_cap)));
            march(src, b, st, dd(r0), dd(gap / ns), ns);
        }
        return st;
    };
    State g_at_Rm = partial_bwd(Rm);
    State g_at_Rb = partial_bwd(Rb);
    // J on the backward pass accumulates ∫_{y_max}^{r}; the annulus integral is
    // ∫_{R⁻}^{R_b} Z Ψ̂ = −J(at R⁻)
    ddc Jz_full = ddc{dd(0.0), dd(0.0)} - g_at_Rm.J;

    // ---- Wronskian W = Z' Z1 − Z Z1' (constant; checked at both annulus ends)
    ddc W_lo = g_at_Rm.Zp * f_at_Rm.Z - g_at_Rm.Z * f_at_Rm.Zp;
    ddc W_hi = g_at_Rb.Zp * f_at_Rb.Z - g_at_Rb.Z * f_at_Rb.Zp;
    double w1 = std::sqrt(to_double(abs2(W_lo)));
    double w2 = std::sqrt(to_double(abs2(W_hi)));
    require(w1 > 0.0 && w2 > 0.0, "wronskian-degenerate", "vanishing Wronskian");
    sol.wronskian = to_cplx(W_lo);
    sol.wronskian_consistency = std::fabs(w1 - w2) / std::max(w1, w2);
    require(sol.wronskian_consistency < 1e-6, "wronskian-degenerate",
            "Wronskian drifts along the annulus; integration failure");
    const ddc W = W_lo;

    const ddc c_out = div(J1_full, W); // Z̃ = c_out Z beyond R_b
    const ddc c_in = div(Jz_full, W);  // Z̃ = c_in Z1 below R⁻

    // ---- plateau statistics over [3/b, 6/b]
    {
        double co2 = to_double(abs2(c_out));
        double mean = 0.0, mn = 1e300, mx = -1e300;
        std::size_t cnt = 0;
        for (std::size_t i = 0; i < n_dump; ++i) {
            double r = static_cast<double>(i) * dump_dr;
            if (r < sol.plateau_lo || r > sol.plateau_hi || !have_bwd[i]) continue;
            double z2 = to_double(abs2(bwd[i].Z)) * co2;
            double k = std::sqrt(0.25 * b * b * r * r - 1.0);
            double comp = 2.0 * k / b * z2;
            sol.plateau_r.push_back(r);
            sol.plateau_raw.push_back(r * z2);
            sol.plateau_comp.push_back(comp);
            mean += comp;
            mn = std::min(mn, comp);
            mx = std::max(mx, comp);
            ++cnt;
        }
        require(cnt > 16, "plateau-not-flat", "no samples in the plateau window");
        mean /= static_cast<double>(cnt);
        sol.Gamma_b = mean;
        sol.plateau_variation = (mx - mn) / mean;
        if (opt.check_plateau)
            require(sol.plateau_variation < 0.05, "plateau-not-flat",
                    "flux plateau varies by more than 5%");
    }

    // ---- assembled Z̃, ζ on the dump grid; BC check and ∫|∂_y ζ|²
    sol.r.resize(n_dump);
    sol.Ztilde.resize(n_dump);
    sol.zeta.resize(n_dump);
    double grad_acc = 0.0, grad_prev = 0.0;
    for (std::size_t i = 0; i < n_dump; ++i) {
        double r = static_cast<double>(i) * dump_dr;
        sol.r[i] = r;
        ddc zt, ztp;
        if (r <= Rm || !have_bwd[i]) {
            zt = c_in * fwd[i].Z;
            ztp = c_in * fwd[i].Zp;
        } else if (r >= Rb) {
            zt = c_out * bwd[i].Z;
            ztp = c_out * bwd[i].Zp;
        } else {
            ddc int_r_to_Rb = ddc{dd(0.0), dd(0.0)} - bwd[i].J; // ∫_r^{R_b} Z Ψ̂
            ddc c1 = div(int_r_to_Rb, W);
            ddc c2 = div(fwd[i].J, W); // ∫_{R⁻}^{r} Z1 Ψ̂
            zt = c1 * fwd[i].Z + c2 * bwd[i].Z;
            ztp = c1 * fwd[i].Zp + c2 * bwd[i].Zp;
        }
        cplx Zt = to_cplx(zt), Ztp = to_cplx(ztp);
        sol.Ztilde[i] = Zt;
        sol.zeta[i] = Zt * std::polar(1.0, -0.25 * b * r * r);
        if (i == 0) sol.ztilde_prime_at_0 = std::abs(Ztp);
        double val = std::norm(Ztp - cplx(0.0, 0.5 * b * r) * Zt);
        if (i > 0) grad_acc += 0.5 * (grad_prev + val) * dump_dr;
        grad_prev = val;
    }
    sol.zeta_grad_sq = grad_acc;
    return sol;
}

double gamma_semiclassical(const prof::SelfSimilarProfile& profile) {
    const double b = profile.b;
    require(b >= 0.1 && b <= 0.4, "parameter-out-of-range",
            "gamma_semiclassical wants 0.1 <= b <= 0.4");
    SourceEval src{&profile, prof::Cutoff{profile.R_b_minus, profile.R_b}};

    // ∫ Z1 Ψ̂ over [0, R_b] by a forward march
    State st{{dd(1.0), dd(0.0)}, {dd(0.0), dd(0.0)}, {}};
    double h = std::min(5e-4, b / 100.0);
    int ns = static_cast<int>(std::ceil(profile.R_b / h));
    march(src, b, st, dd(0.0), dd(profile.R_b / ns), ns);
    double j2 = to_double(abs2(st.J));

    // Wr(Z, Z1) at r = 0 is Z'(0) for the Langer/Airy leading form of Z
    double b23 = std::pow(b, 2.0 / 3.0);
    double s0 = airy::langer_s(2.0);
    double sp = airy::langer_s_prime(2.0);
    double spp = airy::langer_s_second(2.0);
    double t0 = s0 / b23;
    cplx A = airy::pair_A(t0);
    cplx Ap = airy::pair_Aprime(t0);
    cplx dZdr = -b * (-0.5 * spp * std::pow(sp, -1.5) * A + std::sqrt(sp) / b23 * Ap);
    double wr2 = std::norm(dZdr);
    return (2.0 / M_PI) * j2 / (wr2 * b23);
}

SlopeReport gamma_slope_fit(const std::vector<std::pair<double, double>>& points) {
    require(points.size() >= 3, "insufficient-samples",
            "slope fit needs at least 3 (b, Gamma) points");
    double n = static_cast<double>(points.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [b, g] : points) {
        require(b > 0 && g > 0, "parameter-out-of-range", "need positive b and Gamma");
        double x = 1.0 / b;
        double y = std::log(b * g);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    SlopeReport rep;
    double denom = n * sxx - sx * sx;
    require(std::fabs(denom) > 1e-30, "insufficient-samples", "degenerate b grid");
    rep.slope = (n * sxy - sx * sy) / denom;
    rep.intercept = (sy - rep.slope * sx) / n;
    for (auto& [b, g] : points)
        rep.residuals.push_back(std::log(b * g) - (rep.intercept + rep.slope / b));
    return rep;
}

} // namespace llf::rad
