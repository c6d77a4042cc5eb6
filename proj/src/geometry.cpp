#include "pshdef/geometry.hpp"

namespace pshdef::geometry {

using jets::CJet;
using jets::Jet;
using jets::wirtinger;
using jets::wirtinger_field;

bool psd2(const CHess& h, double tol) {
    if (h.a < -tol || h.d < -tol) return false;
    double scale = std::max(1.0, std::abs(h.a) * std::abs(h.d));
    return h.det() >= -tol * scale;
}

FieldDerivs<cplx> derivs_at(const Jet& j) {
    FieldDerivs<cplx> d;
    d.f = {j.value(), 0.0};
    if (j.order() >= 1) {
        d.z = wirtinger(j, {1, 0, 0, 0});
        d.w = wirtinger(j, {0, 0, 1, 0});
    }
    if (j.order() >= 2) {
        d.zz = wirtinger(j, {2, 0, 0, 0});
        d.zw = wirtinger(j, {1, 0, 1, 0});
        d.ww = wirtinger(j, {0, 0, 2, 0});
        d.zzb = wirtinger(j, {1, 1, 0, 0});
        d.zwb = wirtinger(j, {1, 0, 0, 1});
        d.wwb = wirtinger(j, {0, 0, 1, 1});
    }
    return d;
}

FieldDerivs<CJet> derivs_field(const CJet& j) {
    if (j.order() < 2) throw DomainError("derivs_field needs a jet of order >= 2");
    const int m = j.order() - 2;
    FieldDerivs<CJet> d;
    d.f = j.truncated(m);
    d.z = wirtinger_field(j, {1, 0, 0, 0}).truncated(m);
    d.w = wirtinger_field(j, {0, 0, 1, 0}).truncated(m);
    d.zz = wirtinger_field(j, {2, 0, 0, 0});
    d.zw = wirtinger_field(j, {1, 0, 1, 0});
    d.ww = wirtinger_field(j, {0, 0, 2, 0});
    d.zzb = wirtinger_field(j, {1, 1, 0, 0});
    d.zwb = wirtinger_field(j, {1, 0, 0, 1});
    d.wwb = wirtinger_field(j, {0, 0, 1, 1});
    return d;
}

CVec cgrad(const Jet& f) {
    return CVec(wirtinger(f, {1, 0, 0, 0}), wirtinger(f, {0, 0, 1, 0}));
}

CHess chess(const Jet& f) {
    CHess h;
    h.a = wirtinger(f, {1, 1, 0, 0}).real();
    h.d = wirtinger(f, {0, 0, 1, 1}).real();
    h.b = wirtinger(f, {1, 0, 0, 1});
    return h;
}

CVec field_L(const Jet& f) {
    CVec g = cgrad(f);
    return CVec(g(1), -g(0));
}

CVec field_N(const Jet& f) {
    return CVec(wirtinger(f, {0, 1, 0, 0}), wirtinger(f, {0, 0, 0, 1}));
}

cplx hform(const Jet& f, const CVec& v, const CVec& w) {
    CHess h = chess(f);
    return cplx{h.a, 0.0} * v(0) * std::conj(w(0)) + cplx{h.d, 0.0} * v(1) * std::conj(w(1)) +
           h.b * v(0) * std::conj(w(1)) + std::conj(h.b) * v(1) * std::conj(w(0));
}

double levi(const Jet& r) { return levi_of(derivs_at(r)).real(); }
double hdet(const Jet& f) { return hdet_of(derivs_at(f)).real(); }

double error_B(const Jet& r, const Jet& p) {
    return bp_of(derivs_at(r), derivs_at(p)).real();
}

double error_Q(const Jet& r, const Jet& p) {
    return qp_of(derivs_at(r), derivs_at(p)).real();
}

cplx lr_apply(const Jet& r, const Jet& p) { return lr_apply_of(derivs_at(r), derivs_at(p)); }

CVec cgrad(const expr::Field& f, const Point& q) { return cgrad(jets::jet_of(f, q, 1)); }
CHess chess(const expr::Field& f, const Point& q) { return chess(jets::jet_of(f, q, 2)); }
CVec field_L(const expr::Field& f, const Point& q) { return field_L(jets::jet_of(f, q, 1)); }
CVec field_N(const expr::Field& f, const Point& q) { return field_N(jets::jet_of(f, q, 1)); }
cplx hform(const expr::Field& f, const Point& q, const CVec& v, const CVec& w) {
    return hform(jets::jet_of(f, q, 2), v, w);
}
double levi(const expr::Field& r, const Point& q) { return levi(jets::jet_of(r, q, 2)); }
double hdet(const expr::Field& f, const Point& q) { return hdet(jets::jet_of(f, q, 2)); }
double error_B(const expr::Field& r, const expr::Field& p, const Point& q) {
    return error_B(jets::jet_of(r, q, 1), jets::jet_of(p, q, 1));
}
double error_Q(const expr::Field& r, const expr::Field& p, const Point& q) {
    return error_Q(jets::jet_of(r, q, 2), jets::jet_of(p, q, 2));
}
cplx lr_apply(const expr::Field& r, const expr::Field& p, const Point& q) {
    return lr_apply(jets::jet_of(r, q, 1), jets::jet_of(p, q, 1));
}

double grad_norm2(const Jet& r) {
    CVec g = cgrad(r);
    return std::norm(g(0)) + std::norm(g(1));
}

double levi_scale(const Jet& r) {
    CHess h = chess(r);
    double second = std::abs(h.a) + std::abs(h.d) + 2.0 * std::abs(h.b);
    return std::max(second * grad_norm2(r), 1e-30);
}

Eigen::Vector4d real_gradient(const Jet& f) {
    CVec g = cgrad(f);
    return Eigen::Vector4d(2.0 * g(0).real(), -2.0 * g(0).imag(), 2.0 * g(1).real(),
                           -2.0 * g(1).imag());
}

Eigen::Matrix4d real_hessian(const Jet& f) {
    Eigen::Matrix4d h;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            std::array<int, 4> mi{0, 0, 0, 0};
            ++mi[static_cast<std::size_t>(i)];
            ++mi[static_cast<std::size_t>(j)];
            h(i, j) = f.partial(mi);
        }
    return h;
}

}  // namespace pshdef::geometry
