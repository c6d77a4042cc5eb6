#include "pshdef/expansion.hpp"

namespace pshdef::expansion {

using expr::Field;
using geometry::FieldDerivs;
using jets::Jet;

Field build_p(const Field& X, double L) {
    return expr::constant(1.0) + expr::constant(L) * X;
}

Field build_rho(const Field& r, const Field& X, double K, double L) {
    return r * (expr::constant(1.0) + expr::constant(K) * r + expr::constant(L) * X);
}

namespace {

struct TermValues {
    double P;        // P(q)
    double lv;       // H_r(L_r, L_r)
    double hr;       // det H_r
    double hp;       // det H_P
    double re_hr_lrlp;
    double re_hp_lrlp;
    double hp_lrlr;
    double bp;
    double qp;

    TermValues(const Jet& jr, const Jet& jp) {
        FieldDerivs<cplx> dr = geometry::derivs_at(jr);
        FieldDerivs<cplx> dp = geometry::derivs_at(jp);
        P = dp.f.real();
        lv = geometry::levi_of(dr).real();
        hr = geometry::hdet_of(dr).real();
        hp = geometry::hdet_of(dp).real();
        re_hr_lrlp = geometry::hr_lrlp_of(dr, dp).real();
        re_hp_lrlp = geometry::hp_lrlp_of(dr, dp).real();
        hp_lrlr = geometry::hp_lrlr_of(dr, dp).real();
        bp = geometry::bp_of(dr, dp).real();
        qp = geometry::qp_of(dr, dp).real();
    }
};

ExpansionCoeffs coeffs_from(const TermValues& t, double K, const Point& q) {
    ExpansionCoeffs c;
    c.evaluated_at = q;
    c.K = K;
    c.c0 = 2 * K * t.P * t.lv + t.P * t.P * t.hr + 2 * t.P * t.re_hr_lrlp + t.bp;
    c.c1 = 4 * K * K * t.lv + t.P * t.qp + 2 * t.re_hp_lrlp + 4 * K * t.P * t.hr +
           4 * K * t.re_hr_lrlp + 2 * K * t.hp_lrlr;
    c.c2 = 4 * K * K * t.hr + t.hp + 2 * K * t.qp;
    return c;
}

double residual_scale(double lhs, const ExpansionCoeffs& c, double rv) {
    return std::max({1.0, std::abs(lhs), std::abs(c.c0), std::abs(rv * c.c1),
                     std::abs(rv * rv * c.c2)});
}

}  // namespace

ExpansionCoeffs coeffs(const Jet& jr, const Jet& jp, double K, const Point& q) {
    return coeffs_from(TermValues(jr, jp), K, q);
}

ExpansionCoeffs coeffs(const Field& r, const Field& P, double K, const Point& q) {
    return coeffs(jets::jet_of(r, q, 2), jets::jet_of(P, q, 2), K, q);
}

ExpansionCoeffs detail::coeffs_mutated(const Jet& jr, const Jet& jp, double K, const Point& q,
                                       bool flip_qp_sign) {
    TermValues t(jr, jp);
    if (flip_qp_sign) t.qp = -t.qp;
    return coeffs_from(t, K, q);
}

double residual_full(const Field& r, const Field& P, double K, const Point& q) {
    Jet jr = jets::jet_of(r, q, 2);
    Jet jp = jets::jet_of(P, q, 2);
    ExpansionCoeffs c = coeffs(jr, jp, K, q);
    double rv = jr.value();

    // Direct determinant of rho = r*(K*r + P) as one expression tree.
    Field rho = r * (expr::constant(K) * r + P);
    double lhs = geometry::hdet(rho, q);

    return std::abs(lhs - c.combined(rv)) / residual_scale(lhs, c, rv);
}

TermIdentity term_from_name(const std::string& name) {
    if (name == "HessianRR") return TermIdentity::HessianRR;
    if (name == "HessianPR") return TermIdentity::HessianPR;
    if (name == "HessianA") return TermIdentity::HessianA;
    throw DomainError("unknown term identity: " + name);
}

double residual_term(TermIdentity which, const Field& r, const Field& P, double K,
                     const Point& q) {
    Jet jr = jets::jet_of(r, q, 2);
    Jet jp = jets::jet_of(P, q, 2);
    TermValues t(jr, jp);
    double rv = jr.value();

    switch (which) {
        case TermIdentity::HessianRR: {
            double lhs = geometry::hdet(expr::pow(r, 2), q);
            double rhs = 4 * rv * t.lv + 4 * rv * rv * t.hr;
            double scale = std::max({1.0, std::abs(lhs), std::abs(4 * rv * t.lv),
                                     std::abs(4 * rv * rv * t.hr)});
            return std::abs(lhs - rhs) / scale;
        }
        case TermIdentity::HessianPR: {
            double lhs = geometry::hdet(P * r, q);
            double k0 = t.P * t.P * t.hr + 2 * t.P * t.re_hr_lrlp + t.bp;
            double k1 = t.P * t.qp + 2 * t.re_hp_lrlp;
            double k2 = t.hp;
            double rhs = k0 + rv * (k1 + rv * k2);
            double scale =
                std::max({1.0, std::abs(lhs), std::abs(k0), std::abs(rv * k1),
                          std::abs(rv * rv * k2)});
            return std::abs(lhs - rhs) / scale;
        }
        case TermIdentity::HessianA: {
            // Left side built from jets of the products P*r and r^2.
            FieldDerivs<cplx> dpr = geometry::derivs_at(jets::jet_of(P * r, q, 2));
            FieldDerivs<cplx> drr = geometry::derivs_at(jets::jet_of(expr::pow(r, 2), q, 2));
            cplx cross = drr.zwb * std::conj(dpr.zwb);
            double lhs =
                K * (dpr.zzb * drr.wwb + dpr.wwb * drr.zzb - 2 * cross.real()).real();
            double k0 = 2 * K * t.P * t.lv;
            double k1 = 4 * K * t.P * t.hr + 4 * K * t.re_hr_lrlp + 2 * K * t.hp_lrlr;
            double k2 = 2 * K * t.qp;
            double rhs = k0 + rv * (k1 + rv * k2);
            double scale =
                std::max({1.0, std::abs(lhs), std::abs(k0), std::abs(rv * k1),
                          std::abs(rv * rv * k2)});
            return std::abs(lhs - rhs) / scale;
        }
    }
    return 0.0;
}

}  // namespace pshdef::expansion
