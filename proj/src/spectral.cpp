#include "llf/spectral.hpp"

#include <cmath>

#include "llf/errors.hpp"
#include "llf/groundstate.hpp"

namespace llf::spectral {

namespace {

double potential(int which_op, double y) {
    double Q = gs::q(y);
    double c = which_op == 1 ? 10.0 : 2.0;
    return c * y * Q * Q * Q * gs::q_prime(y);
}

} // namespace

SectorProblem build_sector(double L, std::size_t N, int which_op, bool even) {
    require(L >= 15.0, "parameter-out-of-range", "coercivity wants L >= 15");
    require(N >= 1000 && N % 2 == 0, "parameter-out-of-range",
            "coercivity wants even N >= 1000");
    require(which_op == 1 || which_op == 2, "parameter-out-of-range", "op is 1 or 2");

    double dy = 2.0 * L / static_cast<double>(N);
    auto M = static_cast<Eigen::Index>(N / 2); // half-line cells; node M is y = L
    // DOFs: even sector keeps y_0 = 0 (Neumann), odd drops it (Dirichlet)
    Eigen::Index m = even ? M : M - 1;
    auto node = [&](Eigen::Index j) {
        return even ? static_cast<double>(j) * dy : static_cast<double>(j + 1) * dy;
    };

    SectorProblem s;
    s.dy = dy;
    s.even = even;
    s.a_diag.resize(m);
    s.a_off.resize(m > 0 ? m - 1 : 0);
    s.b_diag.resize(m);
    s.b_off.resize(m > 0 ? m - 1 : 0);

    // stiffness contribution: sum over faces of (g_{j+1} - g_j)²/dy with the
    // Dirichlet face at y = L, plus (odd only) the half face against g(0) = 0
    for (Eigen::Index j = 0; j < m; ++j) {
        double y = node(j);
        double stiff = 2.0 / dy;
        if (even && j == 0) stiff = 1.0 / dy; // only the right face at the axis
        double wq = dy;
        if (even && j == 0) wq = 0.5 * dy; // axis node counted once on the full line
        s.a_diag[j] = stiff + wq * potential(which_op, y);
        s.b_diag[j] = stiff + wq * std::exp(-std::fabs(y));
        if (j + 1 < m) {
            s.a_off[j] = -1.0 / dy;
            s.b_off[j] = -1.0 / dy;
        }
    }

    // directions: ε₁ pairs with {Q, y²Q} (even) and {yQ} (odd);
    //             ε₂ pairs with {ΛQ, Λ²Q} (even) and {∂_yQ} (odd)
    std::size_t k = even ? 2 : 1;
    s.dirs.resize(m, static_cast<Eigen::Index>(k));
    for (Eigen::Index j = 0; j < m; ++j) {
        double y = node(j);
        if (which_op == 1) {
            if (even) {
                s.dirs(j, 0) = gs::q(y);
                s.dirs(j, 1) = y * y * gs::q(y);
            } else {
                s.dirs(j, 0) = y * gs::q(y);
            }
        } else {
            if (even) {
                s.dirs(j, 0) = gs::lambda_q(y);
                s.dirs(j, 1) = gs::lambda2_q(y);
            } else {
                s.dirs(j, 0) = gs::q_prime(y);
            }
        }
    }
    return s;
}

Eigen::MatrixXd dense_form(const Eigen::VectorXd& diag, const Eigen::VectorXd& off) {
    Eigen::Index m = diag.size();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        A(j, j) = diag[j];
        if (j + 1 < m) {
            A(j, j + 1) = off[j];
            A(j + 1, j) = off[j];
        }
    }
    return A;
}

// The constrained subspace is the flat-L² orthogonal complement of the
// directions: those are exactly the inner products subtracted in the
// coercivity inequality, and the certified minimum is positive there.
// (The weight-form complement leaves a negative direction in the ℒ₂-even
// sector, so it cannot carry the certificate.)
Eigen::VectorXd flat_weights(const SectorProblem& s) {
    Eigen::Index m = s.b_diag.size();
    Eigen::VectorXd w = Eigen::VectorXd::Constant(m, s.dy);
    if (s.even) w[0] = 0.5 * s.dy; // the axis node is counted once on the line
    return w;
}

Eigen::MatrixXd projector_basis(const SectorProblem& s) {
    Eigen::Index m = s.b_diag.size();
    Eigen::Index k = s.dirs.cols();
    Eigen::MatrixXd U = flat_weights(s).asDiagonal() * s.dirs;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(U);
    Eigen::MatrixXd Qfull = qr.householderQ();
    return Qfull.rightCols(m - k);
}

Eigen::VectorXd project(const SectorProblem& s, const Eigen::VectorXd& v) {
    // remove the flat-L² components along the directions
    Eigen::Index k = s.dirs.cols();
    Eigen::VectorXd w = flat_weights(s);
    Eigen::MatrixXd G(k, k);
    Eigen::VectorXd rhs(k);
    for (Eigen::Index c = 0; c < k; ++c)
        rhs[c] = (w.asDiagonal() * s.dirs.col(c)).dot(v);
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index c = 0; c < k; ++c)
            G(a, c) = (w.asDiagonal() * s.dirs.col(a)).dot(s.dirs.col(c));
    Eigen::VectorXd coef = G.ldlt().solve(rhs);
    Eigen::VectorXd out = v;
    for (Eigen::Index c = 0; c < k; ++c) out -= coef[c] * s.dirs.col(c);
    return out;
}

double smallest_eig(const SectorProblem& s, bool projected) {
    Eigen::MatrixXd A = dense_form(s.a_diag, s.a_off);
    Eigen::MatrixXd B = dense_form(s.b_diag, s.b_off);
    if (projected) {
        Eigen::MatrixXd P = projector_basis(s);
        A = (P.transpose() * A * P).eval();
        B = (P.transpose() * B * P).eval();
    }
    Eigen::LLT<Eigen::MatrixXd> llt(B);
    require(llt.info() == Eigen::Success, "eigensolver-no-convergence",
            "weight form is not positive definite");
    Eigen::MatrixXd L = llt.matrixL();
    // C = L^{-1} A L^{-T}
    Eigen::MatrixXd C = L.triangularView<Eigen::Lower>().solve(A);
    C = L.triangularView<Eigen::Lower>().solve(C.transpose()).eval();
    C = 0.5 * (C + C.transpose()).eval();
    Eigen::Tridiagonalization<Eigen::MatrixXd> tri(C);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(tri.diagonal(), tri.subDiagonal(), Eigen::EigenvaluesOnly);
    require(es.info() == Eigen::Success, "eigensolver-no-convergence",
            "tridiagonal QL failed");
    return es.eigenvalues().minCoeff();
}

Result coercivity_delta(double L, std::size_t N) {
    Result r;
    r.L = L;
    r.N = N;
    double raw1e = smallest_eig(build_sector(L, N, 1, true), false);
    double raw1o = smallest_eig(build_sector(L, N, 1, false), false);
    double raw2e = smallest_eig(build_sector(L, N, 2, true), false);
    double raw2o = smallest_eig(build_sector(L, N, 2, false), false);
    r.min_raw_1 = std::min(raw1e, raw1o);
    r.min_raw_2 = std::min(raw2e, raw2o);
    double p1e = smallest_eig(build_sector(L, N, 1, true), true);
    double p1o = smallest_eig(build_sector(L, N, 1, false), true);
    double p2e = smallest_eig(build_sector(L, N, 2, true), true);
    double p2o = smallest_eig(build_sector(L, N, 2, false), true);
    r.delta_hat = std::min(std::min(p1e, p1o), std::min(p2e, p2o));
    return r;
}

} // namespace llf::spectral
