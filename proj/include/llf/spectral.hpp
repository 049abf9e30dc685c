#pragma once
#include <Eigen/Dense>
#include <cstddef>

namespace llf::spectral {

// Numerical certification of the coercivity of
//   H(ε,ε) = (ℒ₁ ε₁, ε₁) + (ℒ₂ ε₂, ε₂),
//   ℒ₁ = -∂² + 10 y Q³ Q',  ℒ₂ = -∂² + 2 y Q³ Q',
// against the weight form B(ε,ε) = ∫|∂_y ε|² + ∫|ε|² e^{-|y|}, after
// removing {Q, y²Q, yQ} from ε₁ and {ΛQ, Λ²Q, ∂_yQ} from ε₂ in the
// B-inner product. Everything splits by parity, so the pencil is assembled
// on half-line sectors (Neumann at 0 for even, Dirichlet for odd).
struct Result {
    double min_raw_1 = 0.0;  // unprojected bottom of (ℒ₁, B)
    double min_raw_2 = 0.0;
    double delta_hat = 0.0;  // certified coercivity constant at this (L, N)
    double L = 0.0;
    std::size_t N = 0;
};

Result coercivity_delta(double L, std::size_t N);

// Exposed sector machinery (tests sample Rayleigh quotients through it).
struct SectorProblem {
    // symmetric tridiagonal quadratic forms on the half-line DOFs
    Eigen::VectorXd a_diag, a_off;
    Eigen::VectorXd b_diag, b_off;
    Eigen::MatrixXd dirs; // direction columns entering the B-orthogonality constraints
    double dy = 0.0;
    bool even = false;
};

// which_op: 1 for ℒ₁ (pairs with ε₁ directions), 2 for ℒ₂.
SectorProblem build_sector(double L, std::size_t N, int which_op, bool even);

Eigen::MatrixXd dense_form(const Eigen::VectorXd& diag, const Eigen::VectorXd& off);

// B-orthogonal projector onto the complement of the direction span.
Eigen::MatrixXd projector_basis(const SectorProblem& s);
Eigen::VectorXd project(const SectorProblem& s, const Eigen::VectorXd& v);

double smallest_eig(const SectorProblem& s, bool projected);

} // namespace llf::spectral
