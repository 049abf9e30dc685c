#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "llf/diagnostics.hpp"
#include "llf/errors.hpp"
#include "llf/evolution.hpp"
#include "llf/geometry.hpp"
#include "llf/groundstate.hpp"
#include "llf/modulation.hpp"

using namespace llf;
using cplx = std::complex<double>;

namespace {

const mod::ProfileFamily& family() {
    static mod::ProfileFamily fam(0.1, 0.42, 0.005);
    return fam;
}

const mod::ProfileFamily& family_small_b() {
    static mod::ProfileFamily fam(0.04, 0.24, 0.01);
    return fam;
}

struct Setup {
    geom::SurfaceMetric metric;
    geom::RadialGrid grid;
    mod::ModulationState st;
    mod::EpsilonField eps;
    geom::RadialField u;
};

Setup make_setup(double lambda, double b, double gamma, double eps_amp) {
    Setup s{geom::make_metric(geom::MetricKind::RoundSphere), {}, {}, {}, {}};
    s.grid = geom::make_grid(s.metric, 0.35, 1.65, 4096);
    s.st.lambda = lambda;
    s.st.r_center = 1.0;
    s.st.gamma = gamma;
    s.st.b = b;
    s.st.metric = s.metric;
    s.eps.dy = s.grid.dr() / lambda;
    s.eps.y0 = (s.grid.node(0) - s.st.r_center) / lambda;
    s.eps.state = s.st;
    s.eps.eps.resize(s.grid.n);
    for (std::size_t i = 0; i < s.grid.n; ++i) {
        double y = s.eps.y_at(i);
        s.eps.eps[i] = cplx(eps_amp * std::exp(-0.2 * y * y),
                            0.5 * eps_amp * y * std::exp(-0.3 * y * y));
    }
    s.eps = mod::orthogonalize_eps(s.st, s.eps, family());
    s.u = mod::recompose(s.st, s.eps, family(), s.grid);
    return s;
}

} // namespace

TEST_CASE("decompose recovers a constructed state to 1e-8") {
    auto s = make_setup(2e-2, 0.25, 0.7, 1e-3);
    mod::ModulationState guess = s.st;
    guess.lambda *= 1.1;
    guess.r_center += 0.005;
    guess.gamma += 0.2;
    guess.b = 0.22;
    auto [rec, re] = mod::decompose(s.u, guess, family());
    CHECK(std::fabs(rec.lambda - s.st.lambda) < 1e-8);
    CHECK(std::fabs(rec.r_center - s.st.r_center) < 1e-8);
    CHECK(std::fabs(std::remainder(rec.gamma - s.st.gamma, 2 * M_PI)) < 1e-8);
    CHECK(std::fabs(rec.b - s.st.b) < 1e-8);
    auto o = mod::orthogonality_residuals(rec, re, family());
    for (double v : o) CHECK(std::fabs(v) < 1e-10);
}

TEST_CASE("gauge covariance") {
    auto s = make_setup(2e-2, 0.25, 0.3, 5e-4);
    double theta = 1.234;
    auto u2 = s.u;
    for (auto& z : u2.values) z *= std::polar(1.0, theta);
    mod::ModulationState guess = s.st;
    auto [r1, e1] = mod::decompose(s.u, guess, family());
    guess.gamma += theta;
    auto [r2, e2] = mod::decompose(u2, guess, family());
    CHECK(std::fabs(r2.lambda - r1.lambda) < 1e-9);
    CHECK(std::fabs(r2.r_center - r1.r_center) < 1e-9);
    CHECK(std::fabs(r2.b - r1.b) < 1e-9);
    CHECK(std::fabs(std::remainder(r2.gamma - r1.gamma - theta, 2 * M_PI)) < 1e-9);
    double n1 = mod::local_energy(r1, e1), n2 = mod::local_energy(r2, e2);
    CHECK(std::fabs(n1 - n2) < 1e-9 * std::max(1.0, n1));
}

TEST_CASE("scaling covariance on a near-flat window") {
    // euclidean plane: replacing u by sqrt(σ) u(σ(r-r0)+r0) divides λ by σ
    auto m = geom::make_metric(geom::MetricKind::EuclideanPlane);
    auto grid = geom::make_grid(m, 0.5, 1.5, 4096);
    mod::ModulationState st;
    st.lambda = 1e-2;
    st.r_center = 1.0;
    st.gamma = 0.4;
    st.b = 0.25;
    st.metric = m;
    mod::EpsilonField zero;
    zero.dy = grid.dr() / st.lambda;
    zero.y0 = (grid.node(0) - 1.0) / st.lambda;
    zero.eps.assign(grid.n, cplx{0.0, 0.0});
    zero.state = st;
    auto u = mod::recompose(st, zero, family(), grid);
    for (double sigma : {2.0, 4.0}) {
        std::vector<cplx> v(grid.n);
        for (std::size_t i = 0; i < grid.n; ++i) {
            double r = grid.node(i);
            double rs = sigma * (r - 1.0) + 1.0;
            // sample u(rs) through the recompose formula directly
            double y = (rs - 1.0) / st.lambda;
            v[i] = std::sqrt(sigma) / std::sqrt(st.lambda) *
                   family().qtilde(st.b, y) * std::polar(1.0, st.gamma);
        }
        auto us = geom::make_field(grid, v);
        mod::ModulationState guess = st;
        guess.lambda = st.lambda / sigma;
        auto [rec, re] = mod::decompose(us, guess, family());
        CHECK(rec.lambda == doctest::Approx(st.lambda / sigma).epsilon(0.01));
    }
}

TEST_CASE("nonlinear remainders vanish at eps 0 and scale quadratically") {
    auto s = make_setup(2e-2, 0.25, 0.0, 1e-2);
    // R(0) = 0 identically
    mod::EpsilonField zero = s.eps;
    zero.eps.assign(zero.eps.size(), cplx{0.0, 0.0});
    auto lin0 = mod::linearized_apply(s.st, zero, family());
    double sup0 = 0.0;
    for (std::size_t i = 0; i < lin0.R1.size(); ++i)
        sup0 = std::max({sup0, std::fabs(lin0.R1[i]), std::fabs(lin0.R2[i])});
    CHECK(sup0 == 0.0);

    auto norm_of = [&](const std::vector<double>& v) {
        double acc = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            acc += v[i] * v[i] * std::exp(-std::fabs(s.eps.y_at(i)));
        return std::sqrt(acc * s.eps.dy);
    };
    std::vector<double> ratios;
    for (double t : {1e-2, 1e-3, 1e-4}) {
        mod::EpsilonField scaled = s.eps;
        for (auto& z : scaled.eps) z *= t;
        auto lin = mod::linearized_apply(s.st, scaled, family());
        ratios.push_back(std::hypot(norm_of(lin.R1), norm_of(lin.R2)) / (t * t));
    }
    // quadratic leading order: ratios bounded and settling
    CHECK(ratios[0] / ratios[2] < 3.0);
    CHECK(ratios[1] / ratios[2] == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("M tends to the flat linearized operator as b, lambda -> 0") {
    // fixed test ε on its own grid; euclidean metric, tiny λ kills the w-term
    auto m = geom::make_metric(geom::MetricKind::EuclideanPlane);
    std::vector<double> defects;
    for (double b : {0.2, 0.1, 0.05}) {
        mod::ModulationState st;
        st.lambda = 1e-7;
        st.r_center = 1.0;
        st.gamma = 0.0;
        st.b = b;
        st.metric = m;
        mod::EpsilonField eps;
        eps.dy = 4e-3;
        eps.y0 = -15.0;
        eps.state = st;
        std::size_t n = static_cast<std::size_t>(30.0 / eps.dy) + 1;
        eps.eps.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double y = eps.y_at(i);
            eps.eps[i] = cplx(std::exp(-0.5 * y * y), 0.3 * y * std::exp(-0.4 * y * y));
        }
        auto lin = mod::linearized_apply(st, eps, family_small_b());
        double sup = 0.0;
        for (std::size_t i = 2; i + 2 < n; ++i) {
            double y = eps.y_at(i);
            double q = gs::q(y);
            double q4 = q * q * q * q;
            // reference L± with the same second-order stencil
            cplx d2 = (eps.eps[i + 1] - 2.0 * eps.eps[i] + eps.eps[i - 1]) / (eps.dy * eps.dy);
            double lp = -d2.real() + eps.eps[i].real() - 5.0 * q4 * eps.eps[i].real();
            double lm = -d2.imag() + eps.eps[i].imag() - q4 * eps.eps[i].imag();
            sup = std::max({sup, std::fabs(lin.M_plus[i] - lp), std::fabs(lin.M_minus[i] - lm)});
        }
        defects.push_back(sup);
    }
    CHECK(defects[0] > defects[1]);
    CHECK(defects[1] > defects[2]);
}

TEST_CASE("recompose bookkeeping") {
    auto s = make_setup(1e-2, 0.2, 0.1, 0.0);
    // mass of the pure bubble matches the mu-weighted profile integral
    double mass = geom::integrate(s.u, 2);
    // independent fine quadrature in y over the profile table
    const auto& tab = family().nearest(0.2);
    double acc = 0.0;
    for (std::size_t k = 0; k < tab.y.size(); ++k) {
        double r = s.st.lambda * tab.y[k] + s.st.r_center;
        if (r <= 0.0 || r >= M_PI) continue;
        acc += std::norm(tab.Qtilde[k]) * s.metric.h(r);
    }
    acc *= 2.0 * M_PI * tab.dy;
    CHECK(mass == doctest::Approx(acc).epsilon(1e-6));

    // λ -> λ/2 halves the bubble full width at half maximum
    auto width_of = [&](double lam) {
        mod::ModulationState st = s.st;
        st.lambda = lam;
        mod::EpsilonField zero;
        zero.dy = s.grid.dr() / lam;
        zero.y0 = (s.grid.node(0) - st.r_center) / lam;
        zero.eps.assign(s.grid.n, cplx{0.0, 0.0});
        zero.state = st;
        auto u = mod::recompose(st, zero, family(), s.grid);
        double peak = 0.0;
        for (auto& z : u.values) peak = std::max(peak, std::abs(z));
        double lo = 0, hi = 0;
        for (std::size_t i = 0; i < u.grid.n; ++i)
            if (std::abs(u.values[i]) >= 0.5 * peak) {
                lo = u.grid.node(i);
                break;
            }
        for (std::size_t i = u.grid.n; i-- > 0;)
            if (std::abs(u.values[i]) >= 0.5 * peak) {
                hi = u.grid.node(i);
                break;
            }
        return hi - lo;
    };
    CHECK(width_of(5e-3) / width_of(1e-2) == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("far-from-bubble field does not decompose") {
    auto m = geom::make_metric(geom::MetricKind::RoundSphere);
    auto grid = geom::make_grid(m, 0.35, 1.65, 1024);
    auto u = geom::make_field(grid, [](double r) {
        return cplx(0.01 * std::exp(-4.0 * (r - 1.0) * (r - 1.0)), 0.0);
    });
    mod::ModulationState guess;
    guess.lambda = 2e-2;
    guess.r_center = 1.0;
    guess.gamma = 0.0;
    guess.b = 0.25;
    guess.metric = m;
    bool failed = false;
    try {
        mod::decompose(u, guess, family());
    } catch (const Error& e) {
        failed = e.kind() == "no-convergence" || e.kind() == "out-of-neighborhood";
    }
    CHECK(failed);
}

TEST_CASE("local energy: zero field, homogeneity, quadrature oracle") {
    auto s = make_setup(2e-2, 0.25, 0.0, 0.0);
    mod::EpsilonField zero = s.eps;
    zero.eps.assign(zero.eps.size(), cplx{0.0, 0.0});
    CHECK(mod::local_energy(s.st, zero) == 0.0);

    mod::EpsilonField g = zero;
    for (std::size_t i = 0; i < g.eps.size(); ++i) {
        double y = g.y_at(i);
        g.eps[i] = std::exp(-y * y);
    }
    double e1 = mod::local_energy(s.st, g);
    mod::EpsilonField g2 = g;
    for (auto& z : g2.eps) z *= 3.0;
    CHECK(mod::local_energy(s.st, g2) == doctest::Approx(9.0 * e1).epsilon(1e-14));

    // independent fine-quadrature oracle for a gaussian on its own fine grid,
    // where the second-order derivative stencil sits below 1e-10
    mod::EpsilonField fine;
    fine.dy = 5e-6;
    fine.y0 = -20.0;
    fine.state = s.st;
    std::size_t nf = static_cast<std::size_t>(40.0 / fine.dy) + 1;
    fine.eps.resize(nf);
    for (std::size_t i = 0; i < nf; ++i) {
        double y = fine.y_at(i);
        fine.eps[i] = std::exp(-y * y);
    }
    double ef = mod::local_energy(s.st, fine);
    double acc_grad = 0.0, acc_loc = 0.0;
    double lim = 10.0 / s.st.b;
    for (std::size_t i = 0; i < nf; ++i) {
        double y = fine.y_at(i);
        double w = (i == 0 || i + 1 == nf) ? 0.5 : 1.0;
        double r = s.st.lambda * y + s.st.r_center;
        double mu = (r > 0.0 && r < M_PI) ? s.metric.h(r) : 0.0;
        double dg = -2.0 * y * std::exp(-y * y); // analytic derivative
        acc_grad += w * dg * dg * mu;
        if (std::fabs(y) <= lim)
            acc_loc += w * std::exp(-2.0 * y * y) * std::exp(-std::fabs(y));
    }
    double oracle = (acc_grad + acc_loc) * fine.dy;
    CHECK(std::fabs(ef - oracle) < 1e-10 * std::max(1.0, oracle));
}

TEST_CASE("epsilon residual reduces to the profile remainder on a frozen trajectory") {
    const auto& fam = family();
    auto m = geom::make_metric(geom::MetricKind::RoundSphere);
    auto grid = geom::make_grid(m, 0.35, 1.65, 4096);
    double b = 0.25, lam0 = 2e-2, s0 = diag::s0_of(b);
    double ds = 1e-3;
    auto snap_at = [&](double s_off) {
        mod::DecompSnapshot snap;
        snap.s = s0 + s_off;
        mod::ModulationState st;
        st.lambda = lam0 * std::exp(-b * s_off); // self-similar motion
        st.r_center = 1.0;
        st.gamma = s_off; // γ̃ = -s + γ frozen
        st.b = b;
        st.metric = m;
        snap.state = st;
        snap.eps.dy = grid.dr() / st.lambda;
        snap.eps.y0 = (grid.node(0) - st.r_center) / st.lambda;
        snap.eps.eps.assign(grid.n, cplx{0.0, 0.0});
        snap.eps.state = st;
        return snap;
    };
    auto rep = mod::epsilon_residual(snap_at(-ds), snap_at(0.0), snap_at(ds), fam);
    double psi_norm = rep.terms.at("psi_tilde");
    double res_norm = std::hypot(rep.eq1, rep.eq2);
    CHECK(std::fabs(res_norm - psi_norm) < 1e-8);
}

TEST_CASE("epsilon residual shrinks by >= 3x under refinement on a smooth run") {
    const auto& fam = family();
    auto m = geom::make_metric(geom::MetricKind::RoundSphere);
    auto residual_at = [&](std::size_t n, double c_dt) {
        auto grid = geom::make_grid(m, 0.5, 1.5, n);
        auto u0 = evo::synthesize_initial(grid, fam, 5e-2, 1.0, 0.0, 0.25,
                                          evo::Eps0Spec{evo::Eps0Spec::Kind::None}, 1e-2,
                                          false);
        evo::SimConfig sc;
        sc.grid = grid;
        sc.c_dt = c_dt;
        sc.dt_max = 5e-4;
        sc.max_time = 1e-3;
        sc.record_every = 1;
        sc.snapshot_every = 1;
        sc.track_modulation = true;
        sc.b0 = 0.25;
        sc.family = fam;
        mod::ModulationState g0;
        g0.lambda = 5e-2;
        g0.r_center = 1.0;
        g0.gamma = 0.0;
        g0.b = 0.25;
        g0.metric = m;
        sc.initial_guess = g0;
        auto tr = evo::run(sc, u0);
        // use three consecutive records mid-run
        std::size_t k = tr.t.size() / 2;
        REQUIRE(tr.tracked[k - 1]);
        REQUIRE(tr.tracked[k]);
        REQUIRE(tr.tracked[k + 1]);
        auto snap = [&](std::size_t i) {
            return mod::DecompSnapshot{tr.s[i], tr.states[i], tr.eps[i]};
        };
        auto rep = mod::epsilon_residual(snap(k - 1), snap(k), snap(k + 1), fam);
        return std::hypot(rep.eq1, rep.eq2);
    };
    double coarse = residual_at(1000, 0.02);
    double fine = residual_at(2000, 0.005); // halves both Δr and Δt
    CHECK(coarse / fine >= 3.0);
}

TEST_CASE("regime ledgers behave as specified") {
    const auto& fam = family();
    auto m = geom::make_metric(geom::MetricKind::RoundSphere);
    auto grid = geom::make_grid(m, 0.35, 1.65, 4096);
    auto u0 = evo::synthesize_initial(grid, fam, 2e-2, 1.0, 0.0, 0.25, evo::Eps0Spec{},
                                      1e-2, false);
    mod::ModulationState g0;
    g0.lambda = 2e-2;
    g0.r_center = 1.0;
    g0.gamma = 0.0;
    g0.b = 0.25;
    g0.metric = m;
    auto [st, eps] = mod::decompose(u0, g0, fam);
    mod::RegimeParams params;
    params.alpha_star = 1e-2;
    auto find = [](const std::vector<mod::Condition>& v, const std::string& name) {
        for (const auto& c : v)
            if (c.name == name) return c;
        return mod::Condition{};
    };

    auto A = mod::regime_check(u0, st, eps, fam, 'A', params);
    CHECK(find(A, "A1").pass);
    CHECK(find(A, "A6").pass);
    CHECK(find(A, "A3").pass);
    CHECK_FALSE(find(A, "A2").pass); // b0 = 0.25 >= alpha*
    CHECK(find(A, "A2").measured == doctest::Approx(0.25));
    CHECK_FALSE(find(A, "A4").checkable); // threshold Γ^10 below noise floor
    CHECK_FALSE(find(A, "A5").pass);      // double-exponential window

    auto B = mod::regime_check(u0, st, eps, fam, 'B', params);
    CHECK(find(B, "B1").pass);
    CHECK(find(B, "B2").pass); // b < (α*)^{1/8} = 0.56
    CHECK(find(B, "B3").pass);
    CHECK(find(B, "B4").pass); // energy was tuned to ~0
    CHECK(find(B, "B5").pass); // λ = 2e-2 < e^{-e^{π/(10·0.25)}} ≈ 0.0298
    CHECK(find(B, "B6").pass);
    CHECK(find(B, "B7(H1/2)").pass);
    for (const auto& c : B)
        if (!c.checkable) CHECK(c.note != "");

    // spec example: b0 = 2 (α*)^{1/8} must fail A2/B2 with the measured value
    mod::ModulationState st_bad = st;
    st_bad.b = 2.0 * std::pow(params.alpha_star, 1.0 / 8.0);
    // (b outside the family would throw in the orthogonality pairing; clamp
    //  to the family edge for the ledger evaluation of the b-window alone)
    st_bad.b = std::min(st_bad.b, 0.419);
    auto A2 = mod::regime_check(u0, st_bad, eps, fam, 'A', params);
    CHECK_FALSE(find(A2, "A2").pass);
    CHECK(find(A2, "A2").measured == doctest::Approx(st_bad.b));
}
