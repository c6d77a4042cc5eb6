#pragma once

#include "pshdef/expr.hpp"
#include "pshdef/geometry.hpp"
#include "pshdef/jet.hpp"

namespace pshdef::expansion {

/// Grouping of det H_rho into powers of r at a point:
///   c0 + r*c1 + r^2*c2 = det H_rho    (exactly, up to rounding)
/// for rho = r(Kr + P).
struct ExpansionCoeffs {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    Point evaluated_at;
    double K = 0.0;

    double combined(double r_value) const { return c0 + r_value * (c1 + r_value * c2); }
};

/// rho = r * (1 + K*r + L*X); the modification factor is P = 1 + L*X.
expr::Field build_rho(const expr::Field& r, const expr::Field& X, double K, double L);

/// The modifier P = 1 + L*X.
expr::Field build_p(const expr::Field& X, double L);

/// Coefficients of the pointwise identity at q:
///   c0 = 2KP H_r(L_r,L_r) + P^2 det H_r + 2P Re[H_r(L_r,L_P)] + B_P
///   c1 = 4K^2 H_r(L_r,L_r) + P Q_P + 2 Re[H_P(L_r,L_P)] + 4KP det H_r
///        + 4K Re[H_r(L_r,L_P)] + 2K H_P(L_r,L_r)
///   c2 = 4K^2 det H_r + det H_P + 2K Q_P
/// with everything evaluated at q.
ExpansionCoeffs coeffs(const expr::Field& r, const expr::Field& P, double K, const Point& q);
ExpansionCoeffs coeffs(const jets::Jet& jr, const jets::Jet& jp, double K, const Point& q);

/// Relative residual of the full identity against the direct determinant of
/// the Hessian of rho built as an expression tree.
double residual_full(const expr::Field& r, const expr::Field& P, double K, const Point& q);

enum class TermIdentity { HessianRR, HessianPR, HessianA };

TermIdentity term_from_name(const std::string& name);

/// Residual of one intermediate identity:
///   HessianRR: det H_{r^2}     = 4r H_r(L_r,L_r) + 4r^2 det H_r
///   HessianPR: det H_{Pr}      = (P^2 det H_r + 2P Re[H_r(L_r,L_P)] + B_P)
///                                + r (P Q_P + 2 Re[H_P(L_r,L_P)]) + r^2 det H_P
///   HessianA:  K[(Pr)_{zzb}(r^2)_{wwb} + (Pr)_{wwb}(r^2)_{zzb}
///                - 2Re[(r^2)_{zwb} (Pr)_{zbw}]]
///              = 2KP H_r(L_r,L_r) + r(4KP det H_r + 4K Re[H_r(L_r,L_P)]
///                + 2K H_P(L_r,L_r)) + r^2 2K Q_P
double residual_term(TermIdentity which, const expr::Field& r, const expr::Field& P, double K,
                     const Point& q);

namespace detail {
/// Test hook: identity computation with an optional sign corruption of Q_P,
/// used to check that the identity suite catches a wrong grouping.
ExpansionCoeffs coeffs_mutated(const jets::Jet& jr, const jets::Jet& jp, double K,
                               const Point& q, bool flip_qp_sign);
}  // namespace detail

}  // namespace pshdef::expansion
