#include "llf/groundstate.hpp"

#include <cmath>

#include "llf/errors.hpp"

namespace llf::gs {

namespace {
const double Q0 = std::pow(3.0, 0.25);
} // namespace

double q(double y) {
    // cosh(2y) = e^{2|y|} (1 + e^{-4|y|}) / 2
    double a = std::fabs(y);
    double t = std::exp(-2.0 * a);
    return Q0 * std::sqrt(2.0 * t / (1.0 + t * t));
}

double q_prime(double y) { return -q(y) * std::tanh(2.0 * y); }

double q_second(double y) {
    double v = q(y);
    double v2 = v * v;
    return v - v2 * v2 * v;
}

double lambda_q(double y) { return 0.5 * q(y) + y * q_prime(y); }

double lambda2_q(double y) {
    return 0.25 * q(y) + 2.0 * y * q_prime(y) + y * y * q_second(y);
}

GroundStateTable GroundStateTable::build(double L, double dy) {
    require(L > 0 && dy > 0, "grid-too-coarse", "table needs L, dy > 0");
    GroundStateTable t;
    t.L = L;
    t.dy = dy;
    auto n_half = static_cast<std::size_t>(std::llround(L / dy));
    std::size_t n = 2 * n_half + 1;
    t.y.resize(n);
    t.Q.resize(n);
    t.Qp.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double yy = (static_cast<double>(i) - static_cast<double>(n_half)) * dy;
        t.y[i] = yy;
        t.Q[i] = q(yy);
        t.Qp[i] = q_prime(yy);
    }
    return t;
}

namespace {

template <class T>
T at(const std::vector<T>& f, std::ptrdiff_t i) {
    // Dirichlet ghost values beyond ±L
    if (i < 0 || i >= static_cast<std::ptrdiff_t>(f.size())) return T{};
    return f[static_cast<std::size_t>(i)];
}

// 4th-order central second derivative; Λ's first derivative also 4th order.
template <class T>
void derivatives(const std::vector<T>& f, double dy, std::vector<T>& d1, std::vector<T>& d2) {
    std::ptrdiff_t n = static_cast<std::ptrdiff_t>(f.size());
    d1.assign(f.size(), T{});
    d2.assign(f.size(), T{});
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        T fm2 = at(f, i - 2), fm1 = at(f, i - 1), f0 = f[static_cast<std::size_t>(i)],
          fp1 = at(f, i + 1), fp2 = at(f, i + 2);
        d1[static_cast<std::size_t>(i)] = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * dy);
        d2[static_cast<std::size_t>(i)] =
            (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * dy * dy);
    }
}

template <class T>
std::vector<T> apply_impl(const GroundStateTable& tab, Operator op, const std::vector<T>& f) {
    require(f.size() == tab.y.size(), "grid-mismatch",
            "field length does not match the table grid");
    std::vector<T> d1, d2, out(f.size());
    derivatives(f, tab.dy, d1, d2);
    for (std::size_t i = 0; i < f.size(); ++i) {
        double y = tab.y[i];
        double Q = tab.Q[i];
        double Q2 = Q * Q;
        double Q4 = Q2 * Q2;
        switch (op) {
        case Operator::Lambda:
            out[i] = 0.5 * f[i] + y * d1[i];
            break;
        case Operator::Lplus:
            out[i] = -d2[i] + f[i] - 5.0 * Q4 * f[i];
            break;
        case Operator::Lminus:
            out[i] = -d2[i] + f[i] - Q4 * f[i];
            break;
        case Operator::Script1:
            out[i] = -d2[i] + 10.0 * y * Q2 * Q * tab.Qp[i] * f[i];
            break;
        case Operator::Script2:
            out[i] = -d2[i] + 2.0 * y * Q2 * Q * tab.Qp[i] * f[i];
            break;
        }
    }
    return out;
}

} // namespace

std::vector<cplx> apply_operator(const GroundStateTable& tab, Operator op,
                                 const std::vector<cplx>& f) {
    return apply_impl(tab, op, f);
}

std::vector<double> apply_operator(const GroundStateTable& tab, Operator op,
                                   const std::vector<double>& f) {
    return apply_impl(tab, op, f);
}

double quad(const GroundStateTable& tab, const std::vector<double>& f) {
    require(f.size() == tab.y.size(), "grid-mismatch", "field length mismatch in quad");
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
    return s * tab.dy;
}

PohozaevReport pohozaev_report(const GroundStateTable& tab) {
    std::size_t n = tab.y.size();
    std::vector<double> q2(n), qp2(n), q6(n);
    for (std::size_t i = 0; i < n; ++i) {
        double Q = tab.Q[i];
        q2[i] = Q * Q;
        qp2[i] = tab.Qp[i] * tab.Qp[i];
        q6[i] = q2[i] * q2[i] * q2[i];
    }
    PohozaevReport r{};
    r.mass = quad(tab, q2);
    r.grad = quad(tab, qp2);
    r.sextic = quad(tab, q6);
    r.energy = 0.5 * r.grad - r.sextic / 6.0;
    r.res_grad = r.grad - 0.5 * r.mass;
    r.res_sextic = r.sextic - 1.5 * r.mass;
    return r;
}

double mass_closed_form() { return std::sqrt(3.0) * M_PI / 2.0; }

} // namespace llf::gs
