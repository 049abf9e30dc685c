#include "llf/modulation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "llf/diagnostics.hpp"
#include "llf/errors.hpp"
#include "llf/groundstate.hpp"
#include "llf/interp.hpp"
#include "llf/parallel.hpp"

namespace llf::mod {

cplx EpsilonField::at(double y) const {
    if (eps.empty()) return {0.0, 0.0};
    double y_end = y0 + static_cast<double>(eps.size() - 1) * dy;
    if (y < y0 || y > y_end) return {0.0, 0.0};
    return interp_uniform(eps, y0, dy, y);
}

// ------------------------------------------------------------ ProfileFamily

ProfileFamily::ProfileFamily(double b_min, double b_max, double db, double eta,
                             prof::ShootPrecision prec)
    : b_min_(b_min), b_max_(b_max), db_(db), eta_(eta) {
    require(b_max > b_min && db > 0, "parameter-out-of-range", "bad family b-grid");
    auto count = static_cast<std::size_t>(std::round((b_max - b_min) / db)) + 1;
    require(count >= 4, "parameter-out-of-range", "family needs >= 4 b nodes");
    auto tables = std::make_shared<std::vector<prof::TruncatedProfile>>(count);
    parallel_for(count, [&](std::size_t k) {
        double b = b_min + static_cast<double>(k) * db;
        (*tables)[k] = prof::truncate(prof::solve_profile(b, eta, prec), 4e-3);
    });
    tables_ = tables;
}

template <class F>
cplx ProfileFamily::interp_b(double b, F&& eval) const {
    const auto& tabs = *tables_;
    require(contains(b), "modulation-lost",
            "b = " + std::to_string(b) + " outside the profile family range");
    double u = (b - b_min_) / db_;
    auto i0 = static_cast<std::ptrdiff_t>(std::floor(u)) - 1;
    i0 = std::max<std::ptrdiff_t>(0, std::min<std::ptrdiff_t>(i0, static_cast<std::ptrdiff_t>(tabs.size()) - 4));
    double t = u - static_cast<double>(i0);
    cplx acc{0.0, 0.0};
    for (int j = 0; j < 4; ++j) {
        double w = 1.0;
        for (int k = 0; k < 4; ++k)
            if (k != j) w *= (t - k) / static_cast<double>(j - k);
        acc += eval(tabs[static_cast<std::size_t>(i0 + j)]) * w;
    }
    return acc;
}

cplx ProfileFamily::qtilde(double b, double y) const {
    return interp_b(b, [y](const prof::TruncatedProfile& t) { return t.qtilde_at(y); });
}
cplx ProfileFamily::dqtilde(double b, double y) const {
    return interp_b(b, [y](const prof::TruncatedProfile& t) { return t.dqtilde_at(y); });
}
cplx ProfileFamily::d2qtilde(double b, double y) const {
    return interp_b(b, [y](const prof::TruncatedProfile& t) { return t.d2qtilde_at(y); });
}
cplx ProfileFamily::psi(double b, double y) const {
    return interp_b(b, [y](const prof::TruncatedProfile& t) { return t.psi_at(y); });
}
const prof::TruncatedProfile& ProfileFamily::nearest(double b) const {
    const auto& tabs = *tables_;
    auto k = static_cast<std::ptrdiff_t>(std::llround((b - b_min_) / db_));
    k = std::max<std::ptrdiff_t>(0, std::min<std::ptrdiff_t>(k, static_cast<std::ptrdiff_t>(tabs.size()) - 1));
    return tabs[static_cast<std::size_t>(k)];
}

// --------------------------------------------------------- inner machinery

namespace {

struct Directions {
    std::vector<double> y;
    std::vector<cplx> Qt, dQt, d2Qt;
};

Directions eval_directions(const ProfileFamily& fam, double b, double y0, double dy,
                           std::size_t n) {
    Directions d;
    d.y.resize(n);
    d.Qt.resize(n);
    d.dQt.resize(n);
    d.d2Qt.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double y = y0 + static_cast<double>(i) * dy;
        d.y[i] = y;
        d.Qt[i] = fam.qtilde(b, y);
        d.dQt[i] = fam.dqtilde(b, y);
        d.d2Qt[i] = fam.d2qtilde(b, y);
    }
    return d;
}

// O1 = Re<ε, y²Q̃>, O2 = Re<ε, yQ̃>, O3 = Im<conj(ε), ΛQ̃>, O4 = Im<conj(ε), Λ²Q̃>
std::array<double, 4> ortho_values(const std::vector<cplx>& eps, const Directions& d,
                                   double dy) {
    std::array<double, 4> o{0.0, 0.0, 0.0, 0.0};
    std::size_t n = eps.size();
    for (std::size_t i = 0; i < n; ++i) {
        double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        double y = d.y[i];
        cplx Qt = d.Qt[i];
        cplx Lam = 0.5 * Qt + y * d.dQt[i];
        cplx Lam2 = 0.25 * Qt + 2.0 * y * d.dQt[i] + y * y * d.d2Qt[i];
        cplx e = eps[i];
        o[0] += w * (e * std::conj(y * y * Qt)).real();
        o[1] += w * (e * std::conj(y * Qt)).real();
        o[2] += w * (std::conj(e) * Lam).imag();
        o[3] += w * (std::conj(e) * Lam2).imag();
    }
    for (double& v : o) v *= dy;
    return o;
}

struct EpsOnGrid {
    double y0, dy;
    std::vector<cplx> eps;
};

EpsOnGrid eps_from(const geom::RadialField& u, double lambda, double rc, double gamma,
                   double b, const ProfileFamily& fam) {
    std::size_t n = u.grid.n;
    EpsOnGrid e;
    e.dy = u.grid.dr() / lambda;
    e.y0 = (u.grid.node(0) - rc) / lambda;
    e.eps.resize(n);
    double sq = std::sqrt(lambda);
    cplx ph = std::polar(1.0, -gamma);
    for (std::size_t i = 0; i < n; ++i) {
        double y = e.y0 + static_cast<double>(i) * e.dy;
        e.eps[i] = sq * ph * u.values[i] - fam.qtilde(b, y);
    }
    return e;
}

} // namespace

std::array<double, 4> orthogonality_residuals(const ModulationState& st,
                                              const EpsilonField& eps,
                                              const ProfileFamily& fam) {
    Directions d = eval_directions(fam, st.b, eps.y0, eps.dy, eps.eps.size());
    return ortho_values(eps.eps, d, eps.dy);
}

EpsilonField orthogonalize_eps(const ModulationState& st, const EpsilonField& eps,
                               const ProfileFamily& fam) {
    std::size_t n = eps.eps.size();
    Directions d = eval_directions(fam, st.b, eps.y0, eps.dy, n);
    // basis fields whose functional matrix is invertible
    std::vector<std::vector<cplx>> basis(4, std::vector<cplx>(n));
    for (std::size_t i = 0; i < n; ++i) {
        double y = d.y[i];
        cplx Qt = d.Qt[i];
        cplx Lam = 0.5 * Qt + y * d.dQt[i];
        cplx Lam2 = 0.25 * Qt + 2.0 * y * d.dQt[i] + y * y * d.d2Qt[i];
        basis[0][i] = y * y * Qt;
        basis[1][i] = y * Qt;
        basis[2][i] = cplx(0.0, 1.0) * Lam;
        basis[3][i] = cplx(0.0, 1.0) * Lam2;
    }
    Eigen::Matrix4d G;
    Eigen::Vector4d rhs;
    auto o_eps = ortho_values(eps.eps, d, eps.dy);
    for (int k = 0; k < 4; ++k) rhs[k] = o_eps[static_cast<std::size_t>(k)];
    for (int c = 0; c < 4; ++c) {
        auto o = ortho_values(basis[static_cast<std::size_t>(c)], d, eps.dy);
        for (int k = 0; k < 4; ++k) G(k, c) = o[static_cast<std::size_t>(k)];
    }
    Eigen::Vector4d coef = G.fullPivLu().solve(rhs);
    EpsilonField out = eps;
    for (std::size_t i = 0; i < n; ++i)
        for (int c = 0; c < 4; ++c)
            out.eps[i] -= coef[c] * basis[static_cast<std::size_t>(c)][i];
    return out;
}

std::pair<ModulationState, EpsilonField> decompose(const geom::RadialField& u,
                                                   const ModulationState& guess,
                                                   const ProfileFamily& fam,
                                                   const DecomposeOptions& opt) {
    require(guess.lambda > 0, "parameter-out-of-range", "guess needs lambda > 0");
    // unknowns q = (log λ, r, γ, b)
    Eigen::Vector4d q(std::log(guess.lambda), guess.r_center, guess.gamma, guess.b);
    auto clamp_b = [&](double b) {
        return std::min(fam.b_max() - 1e-9, std::max(fam.b_min() + 1e-9, b));
    };
    q[3] = clamp_b(q[3]);

    auto residual = [&](const Eigen::Vector4d& p) {
        double lam = std::exp(p[0]);
        EpsOnGrid e = eps_from(u, lam, p[1], p[2], p[3], fam);
        Directions d = eval_directions(fam, p[3], e.y0, e.dy, e.eps.size());
        auto o = ortho_values(e.eps, d, e.dy);
        return Eigen::Vector4d(o[0], o[1], o[2], o[3]);
    };

    Eigen::Vector4d F = residual(q);
    int stalls = 0;
    bool converged = false;
    for (int it = 0; it < opt.max_iter; ++it) {
        if (F.lpNorm<Eigen::Infinity>() < opt.tol) {
            converged = true;
            break;
        }
        // finite-difference Jacobian
        Eigen::Matrix4d J;
        Eigen::Vector4d h(1e-6, 1e-6 * std::exp(q[0]), 1e-6, 1e-6);
        for (int c = 0; c < 4; ++c) {
            Eigen::Vector4d qp = q, qm = q;
            qp[c] += h[c];
            qm[c] -= h[c];
            if (c == 3) {
                qp[c] = clamp_b(qp[c]);
                qm[c] = clamp_b(qm[c]);
            }
            J.col(c) = (residual(qp) - residual(qm)) / (qp[c] - qm[c]);
        }
        Eigen::FullPivLU<Eigen::Matrix4d> lu(J);
        require(lu.isInvertible(), "no-convergence",
                "singular Jacobian in the modulation Newton");
        Eigen::Vector4d step = lu.solve(-F);
        // trust region on the raw step
        double cap = std::max({std::fabs(step[0]), std::fabs(step[2]),
                               std::fabs(step[3]) / 0.2,
                               std::fabs(step[1]) / std::exp(q[0])});
        if (cap > 0.5) step *= 0.5 / cap;
        double base = F.norm();
        bool improved = false;
        for (int half = 0; half < 10; ++half) {
            Eigen::Vector4d qn = q + step;
            qn[3] = clamp_b(qn[3]);
            Eigen::Vector4d Fn = residual(qn);
            if (Fn.norm() < base * (1.0 - 1e-4) || Fn.lpNorm<Eigen::Infinity>() < opt.tol) {
                q = qn;
                F = Fn;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved && ++stalls >= 3)
            throw Error("no-convergence", "modulation Newton stalled at residual " +
                                              std::to_string(F.lpNorm<Eigen::Infinity>()));
    }
    require(converged || F.lpNorm<Eigen::Infinity>() < opt.tol, "no-convergence",
            "modulation Newton exceeded the iteration budget at residual " +
                std::to_string(F.lpNorm<Eigen::Infinity>()));

    ModulationState st;
    st.lambda = std::exp(q[0]);
    st.r_center = q[1];
    st.gamma = std::remainder(q[2], 2.0 * M_PI);
    st.b = q[3];
    st.metric = u.grid.metric;
    EpsOnGrid e = eps_from(u, st.lambda, st.r_center, st.gamma, st.b, fam);
    EpsilonField ef;
    ef.y0 = e.y0;
    ef.dy = e.dy;
    ef.eps = std::move(e.eps);
    ef.state = st;
    double en = local_energy(st, ef);
    require(en <= opt.neighborhood_norm, "out-of-neighborhood",
            "epsilon weighted norm " + std::to_string(en) + " exceeds the threshold");
    return {st, ef};
}

geom::RadialField recompose(const ModulationState& st, const EpsilonField& eps,
                            const ProfileFamily& fam, const geom::RadialGrid& grid) {
    std::vector<cplx> v(grid.n);
    double sq = 1.0 / std::sqrt(st.lambda);
    cplx ph = std::polar(1.0, st.gamma);
    for (std::size_t i = 0; i < grid.n; ++i) {
        double y = (grid.node(i) - st.r_center) / st.lambda;
        v[i] = sq * ph * (fam.qtilde(st.b, y) + eps.at(y));
    }
    return geom::make_field(grid, v);
}

LinearizedParts linearized_apply(const ModulationState& st, const EpsilonField& eps,
                                 const ProfileFamily& fam) {
    std::size_t n = eps.eps.size();
    require(n >= 5, "grid-mismatch", "epsilon grid too small");
    LinearizedParts out;
    out.M_plus.resize(n);
    out.M_minus.resize(n);
    out.R1.resize(n);
    out.R2.resize(n);
    double dy = eps.dy;
    const auto& m = st.metric;
    for (std::size_t i = 0; i < n; ++i) {
        double y = eps.y_at(i);
        cplx Qt = fam.qtilde(st.b, y);
        double Sig = Qt.real(), The = Qt.imag();
        double q2 = std::norm(Qt);
        cplx e = eps.eps[i];
        double e1 = e.real(), e2 = e.imag();
        // derivatives of ε, second-order centered; one-sided at the edges
        cplx d1, d2c;
        if (i == 0) {
            d1 = (eps.eps[1] - eps.eps[0]) / dy;
            d2c = (eps.eps[2] - 2.0 * eps.eps[1] + eps.eps[0]) / (dy * dy);
        } else if (i + 1 == n) {
            d1 = (eps.eps[n - 1] - eps.eps[n - 2]) / dy;
            d2c = (eps.eps[n - 1] - 2.0 * eps.eps[n - 2] + eps.eps[n - 3]) / (dy * dy);
        } else {
            d1 = (eps.eps[i + 1] - eps.eps[i - 1]) / (2.0 * dy);
            d2c = (eps.eps[i + 1] - 2.0 * eps.eps[i] + eps.eps[i - 1]) / (dy * dy);
        }
        double r = st.lambda * y + st.r_center;
        double w = 0.0;
        if (r > 1e-12 && (!m.compact() || r < m.rho - 1e-12)) w = m.h_prime(r) / m.h(r);
        double lw = st.lambda * w;
        out.M_plus[i] = -d2c.real() - lw * d1.real() + e1 -
                        (4.0 * Sig * Sig + q2) * q2 * e1 - 4.0 * Sig * The * q2 * e2;
        out.M_minus[i] = -d2c.imag() - lw * d1.imag() + e2 -
                         (4.0 * The * The + q2) * q2 * e2 - 4.0 * Sig * The * q2 * e1;
        double full = std::norm(e + Qt);
        double full2 = full * full;
        double q4 = q2 * q2; // shares rounding with full2 at ε = 0, so R(0) = 0 exactly
        out.R1[i] = (e1 + Sig) * full2 - Sig * q4 - (4.0 * Sig * Sig + q2) * q2 * e1 -
                    4.0 * Sig * The * q2 * e2;
        out.R2[i] = (e2 + The) * full2 - The * q4 - (4.0 * The * The + q2) * q2 * e2 -
                    4.0 * Sig * The * q2 * e1;
    }
    return out;
}

double local_energy(const ModulationState& st, const EpsilonField& eps) {
    std::size_t n = eps.eps.size();
    if (n < 3) return 0.0;
    require(st.b > 0, "parameter-out-of-range", "local energy needs b > 0");
    const auto& m = st.metric;
    double dy = eps.dy;
    double acc_grad = 0.0, acc_loc = 0.0;
    double lim = 10.0 / st.b;
    for (std::size_t i = 0; i < n; ++i) {
        double y = eps.y_at(i);
        double r = st.lambda * y + st.r_center;
        double mu = 0.0;
        if (r > 0.0 && (!m.compact() || r < m.rho)) mu = m.h(r);
        cplx d1;
        if (i == 0)
            d1 = (eps.eps[1] - eps.eps[0]) / dy;
        else if (i + 1 == n)
            d1 = (eps.eps[n - 1] - eps.eps[n - 2]) / dy;
        else
            d1 = (eps.eps[i + 1] - eps.eps[i - 1]) / (2.0 * dy);
        double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        acc_grad += w * std::norm(d1) * mu;
        if (std::fabs(y) <= lim) acc_loc += w * std::norm(eps.eps[i]) * std::exp(-std::fabs(y));
    }
    return (acc_grad + acc_loc) * dy;
}

ResidualReport epsilon_residual(const DecompSnapshot& prev, const DecompSnapshot& mid,
                                const DecompSnapshot& next, const ProfileFamily& fam) {
    require(prev.s < mid.s && mid.s < next.s, "insufficient-history",
            "snapshots must be strictly ordered in s");
    require(!mid.eps.eps.empty() && !prev.eps.eps.empty() && !next.eps.eps.empty(),
            "insufficient-history", "need three decompositions");
    const auto& st = mid.state;
    std::size_t n = mid.eps.eps.size();
    double dy = mid.eps.dy;
    double ds = next.s - prev.s;
    double lam_s = (next.state.lambda - prev.state.lambda) / ds;
    double b_s = (next.state.b - prev.state.b) / ds;
    double r_s = (next.state.r_center - prev.state.r_center) / ds;
    double gam_s = (std::remainder(next.state.gamma - prev.state.gamma, 2.0 * M_PI)) / ds;
    double gt_s = gam_s - 1.0; // γ̃ = -s + γ
    double c_lam = lam_s / st.lambda + st.b;

    LinearizedParts lin = linearized_apply(st, mid.eps, fam);

    auto nrm = [&](const std::vector<cplx>& f) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
            acc += w * std::norm(f[i]) * std::exp(-std::fabs(mid.eps.y_at(i)));
        }
        return std::sqrt(acc * dy);
    };

    std::vector<cplx> res(n), termPsi(n), termM(n), termLam(n), termDs(n);
    for (std::size_t i = 0; i < n; ++i) {
        double y = mid.eps.y_at(i);
        cplx Qt = fam.qtilde(st.b, y);
        cplx dQt = fam.dqtilde(st.b, y);
        cplx Lam_Qt = 0.5 * Qt + y * dQt;
        // ∂_s of Σ + ε₁ and Θ + ε₂ by central differences on the mid grid
        cplx Qp = fam.qtilde(prev.state.b, y), Qn = fam.qtilde(next.state.b, y);
        cplx ep = prev.eps.at(y), en = next.eps.at(y);
        cplx dsSQ = ((Qn + en) - (Qp + ep)) / ds;
        cplx e = mid.eps.eps[i];
        cplx de;
        if (i == 0)
            de = (mid.eps.eps[1] - mid.eps.eps[0]) / dy;
        else if (i + 1 == n)
            de = (mid.eps.eps[n - 1] - mid.eps.eps[n - 2]) / dy;
        else
            de = (mid.eps.eps[i + 1] - mid.eps.eps[i - 1]) / (2.0 * dy);
        cplx Lam_e = 0.5 * e + y * de;
        double r = st.lambda * y + st.r_center;
        double w = 0.0;
        const auto& m = st.metric;
        if (r > 1e-12 && (!m.compact() || r < m.rho - 1e-12)) w = m.h_prime(r) / m.h(r);
        cplx Psi = fam.psi(st.b, y);
        cplx PsiT = Psi - w * st.lambda * dQt;

        // eq1 (real part) and eq2 (imaginary part), left minus right
        double lhs1 = dsSQ.real() - lin.M_minus[i] + st.b * Lam_e.real();
        double rhs1 = c_lam * Lam_Qt.real() + gt_s * Qt.imag() + (r_s / st.lambda) * dQt.real() +
                      c_lam * Lam_e.real() + gt_s * e.imag() + (r_s / st.lambda) * de.real() +
                      PsiT.imag() - lin.R2[i];
        double lhs2 = dsSQ.imag() + lin.M_plus[i] + st.b * Lam_e.imag();
        double rhs2 = c_lam * Lam_Qt.imag() - gt_s * Qt.real() + (r_s / st.lambda) * dQt.imag() +
                      c_lam * Lam_e.imag() - gt_s * e.real() + (r_s / st.lambda) * de.imag() -
                      PsiT.real() + lin.R1[i];
        res[i] = {lhs1 - rhs1, lhs2 - rhs2};
        termPsi[i] = {PsiT.imag(), PsiT.real()};
        termM[i] = {lin.M_minus[i], lin.M_plus[i]};
        termLam[i] = {c_lam * (Lam_Qt.real() + Lam_e.real()), c_lam * (Lam_Qt.imag() + Lam_e.imag())};
        termDs[i] = dsSQ;
    }
    ResidualReport rep;
    std::vector<cplx> re1(n), re2(n);
    for (std::size_t i = 0; i < n; ++i) {
        re1[i] = {res[i].real(), 0.0};
        re2[i] = {res[i].imag(), 0.0};
    }
    rep.eq1 = nrm(re1);
    rep.eq2 = nrm(re2);
    rep.terms["psi_tilde"] = nrm(termPsi);
    rep.terms["linearized"] = nrm(termM);
    rep.terms["lambda_drive"] = nrm(termLam);
    rep.terms["time_derivative"] = nrm(termDs);
    return rep;
}

// -------------------------------------------------------------- regime_check

namespace {

// H^s norm of u restricted to {r : |r - 1| > cutoff}; empty windows skip
bool window_norm(const geom::RadialField& u, double cutoff, double s, double& out) {
    const auto& g = u.grid;
    double dr = g.dr();
    out = 0.0;
    bool any = false;
    // left window [r_lo, 1 - cutoff], right window [1 + cutoff, r_hi]
    for (int side = 0; side < 2; ++side) {
        double lo = side == 0 ? g.r_lo : 1.0 + cutoff;
        double hi = side == 0 ? 1.0 - cutoff : g.r_hi;
        // snap to whole cells of the parent grid
        auto i0 = static_cast<std::size_t>(std::ceil((lo - g.r_lo) / dr - 1e-9));
        auto i1 = static_cast<std::size_t>(std::floor((hi - g.r_lo) / dr + 1e-9));
        if (i1 <= i0 || i1 - i0 < 16) continue;
        geom::RadialGrid sub = geom::make_grid(g.metric, g.r_lo + static_cast<double>(i0) * dr,
                                               g.r_lo + static_cast<double>(i1) * dr, i1 - i0);
        std::vector<cplx> v(sub.n);
        for (std::size_t k = 0; k < sub.n; ++k) v[k] = u.values[i0 + k];
        geom::HsCalculator calc(sub);
        double nn = calc.norm(v, s);
        out += nn * nn;
        any = true;
    }
    out = std::sqrt(out);
    return any;
}

Condition make_cond(const std::string& name, double measured, double threshold,
                    bool strict_less = true) {
    Condition c;
    c.name = name;
    c.measured = measured;
    c.threshold = threshold;
    const double noise_floor = 1e-13;
    if (threshold <= noise_floor) {
        c.checkable = false;
        c.pass = false;
        c.note = "threshold below numerical noise floor; skipped";
        return c;
    }
    c.pass = strict_less ? measured < threshold : measured <= threshold;
    return c;
}

} // namespace

std::vector<Condition> regime_check(const geom::RadialField& u, const ModulationState& st,
                                    const EpsilonField& eps, const ProfileFamily& fam,
                                    char which, const RegimeParams& params) {
    require(which == 'A' || which == 'B' || which == 'C', "parameter-out-of-range",
            "regime is A, B or C");
    const double a = params.alpha_star;
    const double gamma_b =
        params.gamma_b > 0 ? params.gamma_b : std::exp(-M_PI / std::max(st.b, 1e-12));
    std::vector<Condition> out;
    std::string p(1, which);

    // 1: closeness of r to 1
    double thr1 = which == 'A' ? a : which == 'B' ? std::sqrt(a) : std::pow(a, 2.0 / 3.0);
    out.push_back(make_cond(p + "1", std::fabs(st.r_center - 1.0), thr1));

    // 2: smallness of b
    double thr2 = which == 'A' ? a : which == 'B' ? std::pow(a, 1.0 / 8.0) : std::pow(a, 0.2);
    Condition c2 = make_cond(p + "2", st.b, thr2);
    c2.pass = c2.pass && st.b > 0;
    out.push_back(c2);

    // orthogonality conditions
    auto o = orthogonality_residuals(st, eps, fam);
    for (int k = 0; k < 4; ++k)
        out.push_back(make_cond("orth" + std::to_string(k + 1), std::fabs(o[static_cast<std::size_t>(k)]), 1e-8));

    // 3: weighted smallness of ε
    double E = local_energy(st, eps);
    double thr3 = which == 'A'   ? std::pow(gamma_b, 6.0 / 7.0)
                  : which == 'B' ? std::pow(gamma_b, 0.75)
                                 : std::pow(gamma_b, 0.8);
    out.push_back(make_cond(p + "3", E, thr3));

    // 4: energy and localized momentum
    auto cons = diag::conserved_report(u);
    double lam2E = st.lambda * st.lambda * std::fabs(cons.energy);
    double mom = std::fabs(cons.momentum_loc);
    if (which == 'A') {
        out.push_back(make_cond("A4", lam2E + st.lambda * mom * mom, std::pow(gamma_b, 10.0)));
    } else {
        double thr = which == 'B' ? gamma_b * gamma_b : std::pow(gamma_b, 4.0);
        out.push_back(make_cond(p + "4", lam2E, thr));
        out.push_back(make_cond(p + "4'", st.lambda * mom, thr));
    }

    // 5: log-log window, evaluated in double-log form: log(-log λ) > X
    {
        double X = which == 'A'   ? 8.0 * M_PI / (9.0 * st.b)
                   : which == 'B' ? M_PI / (10.0 * st.b)
                                  : M_PI / (5.0 * st.b);
        Condition c;
        c.name = p + "5";
        c.threshold = X;
        if (st.lambda >= 1.0) {
            c.pass = false;
            c.measured = -1e300;
            c.note = "lambda >= 1";
        } else {
            c.measured = std::log(-std::log(st.lambda));
            c.pass = c.measured > X;
            c.note = "pass iff log(-log lambda) > threshold";
        }
        out.push_back(c);
    }

    // 6: L² smallness of ũ = u − bubble
    {
        EpsilonField zero;
        zero.y0 = eps.y0;
        zero.dy = eps.dy;
        zero.eps.assign(eps.eps.size(), cplx{0.0, 0.0});
        zero.state = st;
        geom::RadialField bubble = recompose(st, zero, fam, u.grid);
        std::vector<cplx> diff(u.grid.n);
        for (std::size_t i = 0; i < u.grid.n; ++i) diff[i] = u.values[i] - bubble.values[i];
        double m = std::sqrt(geom::integrate(geom::make_field(u.grid, diff), 2));
        double thr6 = which == 'A' ? a : which == 'B' ? std::pow(a, 0.1) : std::pow(a, 0.2);
        out.push_back(make_cond(p + "6", m, thr6));
    }

    // 7: fractional norms outside the blow-up curve
    {
        double half_thr = which == 'A'   ? std::pow(a, 0.25)
                          : which == 'B' ? std::pow(a, 0.1)
                                         : std::pow(a, 0.2);
        double v;
        Condition c;
        c.name = p + "7(H1/2)";
        if (window_norm(u, 0.5, 0.5, v)) {
            c = make_cond(c.name, v, half_thr);
            c.name = p + "7(H1/2)";
        } else {
            c.checkable = false;
            c.note = "window has too few cells";
        }
        out.push_back(c);
        for (int k = 2; k <= 4; ++k) {
            double expo = which == 'A' ? static_cast<double>(k - 2)
                                       : (static_cast<double>(k) - 2.0 +
                                          (5.0 - static_cast<double>(k)) * params.delta);
            double thr = std::pow(st.lambda, -expo);
            if (which == 'C') thr *= 0.5;
            Condition ck;
            ck.name = p + "7(H" + std::to_string(k) + "/2)";
            if (window_norm(u, 0.5, 0.5 * k, v)) {
                ck = make_cond(ck.name, v, thr);
                ck.name = p + "7(H" + std::to_string(k) + "/2)";
            } else {
                ck.checkable = false;
                ck.note = "window has too few cells";
            }
            out.push_back(ck);
        }
    }

    // 8: H² smallness outside |r-1| > 1/32 (A only)
    if (which == 'A') {
        double v;
        Condition c;
        c.name = "A8";
        if (window_norm(u, 1.0 / 32.0, 2.0, v)) {
            c = make_cond("A8", v, a);
            c.name = "A8";
        } else {
            c.checkable = false;
            c.note = "window has too few cells";
        }
        out.push_back(c);
    }
    return out;
}

} // namespace llf::mod
