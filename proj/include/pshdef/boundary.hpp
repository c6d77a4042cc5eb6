#pragma once

#include <functional>
#include <vector>

#include "pshdef/expr.hpp"
#include "pshdef/geometry.hpp"
#include "pshdef/jet.hpp"

namespace pshdef::boundary {

struct ProjectionError : Error {
    using Error::Error;
};

/// Foot point data for an interior (or boundary) query q: p is the closest
/// boundary point, d the Euclidean distance, and u the positive factor with
/// -d/|dr(p)| = u * r(q).
struct NormalFrame {
    Point p;
    Point q;
    double d = 0.0;
    double u = 0.0;
    double grad_norm = 0.0;  // |dr(p)| = sqrt(|r_z|^2 + |r_w|^2)
    double r_at_q = 0.0;

    /// s = -d/|dr(p)| = u * r(q), the expansion variable along the normal.
    double s() const { return -d / grad_norm; }
};

/// Closest-point projection onto {r = 0} by damped Newton on the Lagrange
/// conditions, seeded with gradient steps q <- q - r(q) grad r / |grad r|^2.
///
/// Throws ProjectionError on: exterior q (r(q) > 0), vanishing gradient, no
/// convergence within max_iter, or a foot point outside the trust tube
/// d <= 0.2 * (curvature radius estimate).
NormalFrame project(const expr::Field& r, const Point& q, double tol = 1e-12,
                    int max_iter = 50, double tube_factor = 1.0);

/// u = (d/|dr(p)|)/(-r(q)); requires r(q) < 0.
double u_factor(const NormalFrame& frame);

/// Taylor coefficient of order k (k <= 2) of f along the inward real normal
/// at p, in the variable s = -d/|dr(p)|:
///   A0(f) = f(p)
///   A1(f) = 2 Re[N f](p)
///   A2(f) = Re[N N f](p) + H_f(N_r(p), N_r(p))
/// where N = v1 d/dz + v2 d/dw with the direction v = N_r(p) frozen at p.
double taylor_A(const expr::Field& r, const expr::Field& f, const Point& p, int k,
                double boundary_tol = 1e-9);

/// Same coefficients read from an order->=k jet of the field at p.
double taylor_A_from_jet(const jets::CJet& g, const geometry::CVec& normal, int k);

struct TaylorFit {
    std::vector<double> coeffs;  // A_0 .. A_kmax
    double cond = 0.0;
    double s_max = 0.0;
    int n = 0;
};

/// Least-squares polynomial fit of f along the normal ray q(s) = p + s N_r(p)
/// against s, on sample depths within the tube.  Independent realization of
/// the Taylor coefficients; requires samples >= kmax + 3.
TaylorFit taylor_A_fit(const expr::Field& r, const std::function<double(const Point&)>& f,
                       const Point& p, int kmax, int samples = 24, double s_max = 0.01);
TaylorFit taylor_A_fit(const expr::Field& r, const expr::Field& f, const Point& p, int kmax,
                       int samples = 24, double s_max = 0.01);

/// Order-(J-2) jets at a boundary point of every field entering the series
/// terms, plus the frozen normal direction.
struct ExpansionFieldJets {
    jets::CJet levi_r;      // H_r(L_r, L_r)
    jets::CJet hdet_r;      // det H_r
    jets::CJet re_hr_lrlp;  // Re[H_r(L_r, L_P)]
    jets::CJet b_p;
    jets::CJet q_p;
    jets::CJet re_hp_lrlp;  // Re[H_P(L_r, L_P)]
    jets::CJet hp_lrlr;     // H_P(L_r, L_r)
    jets::CJet hdet_p;      // det H_P
    geometry::CVec normal;  // N_r(p)
};

ExpansionFieldJets make_expansion_fields(const expr::Field& r, const expr::Field& P,
                                         const Point& p, int order = 4);

/// Coefficient of r^k in the normal-ray expansion of det H_rho, organized as
/// a quadratic polynomial in K: G = F0 + K F1 + K^2 F2.
struct SeriesTerms {
    int k = 0;
    double G = 0.0;
    double F0 = 0.0;
    double F1 = 0.0;
    double F2 = 0.0;
};

/// Series terms G_0..G_kmax (kmax <= 2).  P and u are evaluated at the
/// frame's q, the A-coefficients at the foot point p.
std::vector<SeriesTerms> series_G(const expr::Field& r, const expr::Field& P, double K,
                                  const NormalFrame& frame, int kmax);
std::vector<SeriesTerms> series_G(const ExpansionFieldJets& fields, double P_at_q, double K,
                                  double u, int kmax);

}  // namespace pshdef::boundary
