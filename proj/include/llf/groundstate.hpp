#pragma once
#include <complex>
#include <vector>

namespace llf::gs {

using cplx = std::complex<double>;

// Explicit 1D quintic ground state Q(y) = 3^{1/4} / sqrt(cosh 2y), evaluated
// through the exponential form so large |y| does not overflow cosh.
double q(double y);
double q_prime(double y);      // Q' = -Q tanh(2y)
double q_second(double y);     // Q'' = Q - Q^5
double lambda_q(double y);     // (Λ Q)(y) = Q/2 + y Q'
double lambda2_q(double y);    // (Λ² Q)(y) = Q/4 + 2 y Q' + y² Q''

// Uniform symmetric tabulation of Q on [-L, L].
struct GroundStateTable {
    double L = 25.0;
    double dy = 1.0 / 512.0;
    std::vector<double> y;       // nodes, symmetric about 0, odd count
    std::vector<double> Q;
    std::vector<double> Qp;

    static GroundStateTable build(double L = 25.0, double dy = 1.0 / 512.0);
};

enum class Operator { Lambda, Lplus, Lminus, Script1, Script2 };

// Apply one of Λ, L±, ℒ1, ℒ2 on the table's grid. Derivatives use 4th-order
// central stencils (one-sided order falls back near the two edge layers);
// Dirichlet behavior at ±L via zero ghost values.
std::vector<cplx> apply_operator(const GroundStateTable& tab, Operator op,
                                 const std::vector<cplx>& f);

std::vector<double> apply_operator(const GroundStateTable& tab, Operator op,
                                   const std::vector<double>& f);

// Trapezoid quadrature on the table grid (spectrally accurate for the
// decaying analytic integrands that appear here).
double quad(const GroundStateTable& tab, const std::vector<double>& f);

struct PohozaevReport {
    double mass;        // ∫ Q²
    double grad;        // ∫ (Q')²
    double sextic;      // ∫ Q⁶
    double energy;      // ½∫(Q')² − (1/6)∫Q⁶
    double res_grad;    // ∫(Q')² − ½∫Q²
    double res_sextic;  // ∫Q⁶ − (3/2)∫Q²
};

PohozaevReport pohozaev_report(const GroundStateTable& tab);

// ∫Q² in closed form: sqrt(3)·π/2.
double mass_closed_form();

} // namespace llf::gs
