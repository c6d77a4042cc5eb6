#pragma once

#include <Eigen/Core>

#include "pshdef/core.hpp"
#include "pshdef/expr.hpp"
#include "pshdef/jet.hpp"

namespace pshdef::geometry {

using CVec = Eigen::Vector2cd;

/// Hermitian 2x2 complex Hessian of a real-valued field:
///   [ a        b ]      a = f_{z z_bar},  d = f_{w w_bar},  b = f_{z w_bar},
///   [ conj(b)  d ]      the (2,1) entry is f_{z_bar w} = conj(b).
struct CHess {
    double a = 0.0;
    double d = 0.0;
    cplx b{0.0, 0.0};

    double det() const { return a * d - std::norm(b); }
    Eigen::Matrix2cd matrix() const {
        Eigen::Matrix2cd m;
        m << cplx{a, 0.0}, b, std::conj(b), cplx{d, 0.0};
        return m;
    }
};

/// Sylvester test for positive semidefiniteness with a relative tolerance:
/// diagonals >= -tol and det >= -tol * max(1, |a*d|).
bool psd2(const CHess& h, double tol = 1e-12);

// --- Ring-generic formulas ------------------------------------------------
//
// The same expressions are used at a point (R = cplx) and as fields of
// derivative jets (R = CJet), so the formulas are written once over a ring
// providing +, -, * and conjugation.

inline cplx conj_v(const cplx& x) { return std::conj(x); }
inline jets::CJet conj_v(const jets::CJet& x) { return jets::conj(x); }
inline cplx scaled(const cplx& x, double s) { return x * s; }
inline jets::CJet scaled(const jets::CJet& x, double s) { return x * cplx{s, 0.0}; }

template <class R>
R a2_v(const R& x) {  // |x|^2 as a ring element
    return x * conj_v(x);
}
template <class R>
R re2_v(const R& x) {  // 2 Re[x] as a ring element
    return x + conj_v(x);
}

/// Wirtinger derivatives of a real-valued field up to second order.
/// Conjugate-slot derivatives follow from realness: f_{z_bar} = conj(f_z),
/// f_{z_bar w} = conj(f_{z w_bar}), and so on.
template <class R>
struct FieldDerivs {
    R f{};                  // value
    R z{}, w{};             // f_z, f_w
    R zz{}, zw{}, ww{};     // holomorphic second derivatives
    R zzb{}, zwb{}, wwb{};  // f_{z z_bar}, f_{z w_bar}, f_{w w_bar}
};

/// Derivatives at the jet center.  Second-order entries are filled only when
/// the jet order allows; first-order consumers accept order-1 jets.
FieldDerivs<cplx> derivs_at(const jets::Jet& j);

/// Derivatives as jets of the derivative fields, all truncated to order
/// j.order() - 2 so that they combine in one ring.
FieldDerivs<jets::CJet> derivs_field(const jets::CJet& j);

template <class R>
R hform_of(const FieldDerivs<R>& f, const R& v1, const R& v2, const R& w1, const R& w2) {
    return f.zzb * v1 * conj_v(w1) + f.wwb * v2 * conj_v(w2) + f.zwb * v1 * conj_v(w2) +
           conj_v(f.zwb) * v2 * conj_v(w1);
}

template <class R>
R levi_of(const FieldDerivs<R>& r) {
    R cross = r.zwb * conj_v(r.z) * r.w;
    return r.zzb * a2_v(r.w) + r.wwb * a2_v(r.z) - re2_v(cross);
}

template <class R>
R hdet_of(const FieldDerivs<R>& f) {
    return f.zzb * f.wwb - a2_v(f.zwb);
}

template <class R>
R bp_of(const FieldDerivs<R>& r, const FieldDerivs<R>& p) {
    R u1 = scaled(re2_v(r.z * conj_v(p.z)), 0.5);
    R u2 = scaled(re2_v(r.w * conj_v(p.w)), 0.5);
    R s = r.z * conj_v(p.w) + conj_v(r.w) * p.z;
    return scaled(u1 * u2, 4.0) - a2_v(s);
}

template <class R>
R qp_of(const FieldDerivs<R>& r, const FieldDerivs<R>& p) {
    R cross = r.zwb * conj_v(p.zwb);
    return r.zzb * p.wwb + r.wwb * p.zzb - re2_v(cross);
}

template <class R>
R hr_lrlp_of(const FieldDerivs<R>& r, const FieldDerivs<R>& p) {  // H_r(L_r, L_P)
    return hform_of(r, r.w, -r.z, p.w, -p.z);
}

template <class R>
R hp_lrlp_of(const FieldDerivs<R>& r, const FieldDerivs<R>& p) {  // H_P(L_r, L_P)
    return hform_of(p, r.w, -r.z, p.w, -p.z);
}

template <class R>
R hp_lrlr_of(const FieldDerivs<R>& r, const FieldDerivs<R>& p) {  // H_P(L_r, L_r)
    return hform_of(p, r.w, -r.z, r.w, -r.z);
}

template <class R>
R lr_apply_of(const FieldDerivs<R>& r, const FieldDerivs<R>& p) {  // L_r(P)
    return r.w * p.z - r.z * p.w;
}

// --- Point-level API --------------------------------------------------------

CVec cgrad(const jets::Jet& f);
CHess chess(const jets::Jet& f);
CVec field_L(const jets::Jet& f);
CVec field_N(const jets::Jet& f);
cplx hform(const jets::Jet& f, const CVec& v, const CVec& w);
double levi(const jets::Jet& r);
double hdet(const jets::Jet& f);
double error_B(const jets::Jet& r, const jets::Jet& p);
double error_Q(const jets::Jet& r, const jets::Jet& p);
cplx lr_apply(const jets::Jet& r, const jets::Jet& p);

CVec cgrad(const expr::Field& f, const Point& q);
CHess chess(const expr::Field& f, const Point& q);
CVec field_L(const expr::Field& f, const Point& q);
CVec field_N(const expr::Field& f, const Point& q);
cplx hform(const expr::Field& f, const Point& q, const CVec& v, const CVec& w);
double levi(const expr::Field& r, const Point& q);
double hdet(const expr::Field& f, const Point& q);
double error_B(const expr::Field& r, const expr::Field& p, const Point& q);
double error_Q(const expr::Field& r, const expr::Field& p, const Point& q);
cplx lr_apply(const expr::Field& r, const expr::Field& p, const Point& q);

/// |dr|^2 = |r_z|^2 + |r_w|^2.
double grad_norm2(const jets::Jet& r);

/// Magnitude scale of the Levi form at a point, used for relative tolerances:
/// (second-derivative magnitude) * |dr|^2.
double levi_scale(const jets::Jet& r);

/// Real gradient and real Hessian in the coordinates (x1, y1, x2, y2).
Eigen::Vector4d real_gradient(const jets::Jet& f);
Eigen::Matrix4d real_hessian(const jets::Jet& f);

}  // namespace pshdef::geometry
