#include "pshdef/boundary.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace pshdef::boundary {

using expr::Field;
using geometry::CVec;
using jets::CJet;
using jets::Jet;

namespace {

Eigen::Vector4d to_vec(const Point& p) {
    return Eigen::Vector4d(p.x1(), p.y1(), p.x2(), p.y2());
}

Point to_point(const Eigen::Vector4d& v) { return Point::from_reals(v[0], v[1], v[2], v[3]); }

struct LocalData {
    double r;
    Eigen::Vector4d grad;
    Eigen::Matrix4d hess;
};

LocalData local_data(const Field& r, const Point& x) {
    Jet j = jets::jet_of(r, x, 2);
    return {j.value(), geometry::real_gradient(j), geometry::real_hessian(j)};
}

}  // namespace

NormalFrame project(const Field& r, const Point& q, double tol, int max_iter,
                    double tube_factor) {
    const double rq = r.eval(q);
    const double pos_scale = std::max(1.0, to_vec(q).lpNorm<Eigen::Infinity>());

    NormalFrame frame;
    frame.q = q;
    frame.r_at_q = rq;

    if (rq > tol * pos_scale) throw ProjectionError("query point is outside the domain");

    // Gradient-descent seed toward the zero set.
    Eigen::Vector4d x = to_vec(q);
    for (int i = 0; i < 16; ++i) {
        LocalData d = local_data(r, to_point(x));
        double g2 = d.grad.squaredNorm();
        if (g2 < 1e-24) throw ProjectionError("vanishing gradient during projection");
        if (std::abs(d.r) <= 1e-14 * pos_scale) break;
        x -= (d.r / g2) * d.grad;
    }

    // Damped Newton on the Lagrange conditions for the closest point:
    //   x - q = mu * grad r(x),  r(x) = 0.
    LocalData d = local_data(r, to_point(x));
    double mu = d.grad.squaredNorm() > 0 ? (x - to_vec(q)).dot(d.grad) / d.grad.squaredNorm()
                                         : 0.0;
    auto residual = [&](const Eigen::Vector4d& xx, double m, const LocalData& dd) {
        Eigen::Matrix<double, 5, 1> f;
        f.head<4>() = xx - to_vec(q) - m * dd.grad;
        f[4] = dd.r;
        return f;
    };

    Eigen::Matrix<double, 5, 1> f = residual(x, mu, d);
    bool converged = false;
    for (int it = 0; it < max_iter; ++it) {
        if (f.lpNorm<Eigen::Infinity>() <= tol * pos_scale) {
            converged = true;
            break;
        }
        Eigen::Matrix<double, 5, 5> jac = Eigen::Matrix<double, 5, 5>::Zero();
        jac.topLeftCorner<4, 4>() = Eigen::Matrix4d::Identity() - mu * d.hess;
        jac.topRightCorner<4, 1>() = -d.grad;
        jac.bottomLeftCorner<1, 4>() = d.grad.transpose();
        Eigen::Matrix<double, 5, 1> step = jac.partialPivLu().solve(-f);

        double lambda = 1.0;
        for (;;) {
            Eigen::Vector4d xn = x + lambda * step.head<4>();
            double mn = mu + lambda * step[4];
            LocalData dn = local_data(r, to_point(xn));
            Eigen::Matrix<double, 5, 1> fn = residual(xn, mn, dn);
            if (fn.norm() <= (1.0 - 1e-4 * lambda) * f.norm() || lambda < 1.0 / 64) {
                x = xn;
                mu = mn;
                d = dn;
                f = fn;
                break;
            }
            lambda *= 0.5;
        }
    }
    if (!converged && f.lpNorm<Eigen::Infinity>() > tol * pos_scale)
        throw ProjectionError("projection did not converge");

    frame.p = to_point(x);
    frame.d = (x - to_vec(q)).norm();

    double gnorm_real = d.grad.norm();
    if (gnorm_real < 1e-12) throw ProjectionError("vanishing gradient at the foot point");
    frame.grad_norm = 0.5 * gnorm_real;  // |dr|^2 = |r_z|^2 + |r_w|^2 = |grad|^2 / 4

    // Trust tube: reject foot points deeper than the local curvature radius
    // estimate, where the closest point may not be unique.  The spectral norm
    // of the real Hessian over the gradient norm estimates the largest
    // principal curvature of the level set.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(d.hess, Eigen::EigenvaluesOnly);
    double curv = es.eigenvalues().cwiseAbs().maxCoeff() / gnorm_real;
    if (frame.d * curv > tube_factor)
        throw ProjectionError("query point is outside the projection tube");

    // The foot point must see q along its own normal.
    if (frame.d > 0) {
        Jet jp = jets::jet_of(r, frame.p, 1);
        CVec n = geometry::field_N(jp);
        Point rebuilt{frame.p.z - (frame.d / frame.grad_norm) * n(0),
                      frame.p.w - (frame.d / frame.grad_norm) * n(1)};
        if (dist(rebuilt, q) > 1e-8 * pos_scale)
            throw ProjectionError("projection converged to a misaligned foot point");
    }

    frame.u = rq < -tol * pos_scale ? (frame.d / frame.grad_norm) / (-rq)
                                    : 1.0 / (2.0 * frame.grad_norm * frame.grad_norm);
    return frame;
}

double u_factor(const NormalFrame& frame) {
    if (frame.r_at_q >= 0.0)
        throw DomainError("u-factor requires an interior query point (r(q) < 0)");
    return (frame.d / frame.grad_norm) / (-frame.r_at_q);
}

double taylor_A_from_jet(const CJet& g, const CVec& normal, int k) {
    if (k < 0 || k > 2)
        throw DomainError("analytic Taylor coefficients support k <= 2; use the fit pathway");
    if (g.order() < k) throw DomainError("insufficient jet order for Taylor coefficient");
    const cplx v1 = normal(0), v2 = normal(1);
    switch (k) {
        case 0: return g.value().real();
        case 1: {
            cplx nf = v1 * jets::wirtinger(g, {1, 0, 0, 0}) + v2 * jets::wirtinger(g, {0, 0, 1, 0});
            return 2.0 * nf.real();
        }
        default: {
            cplx nn = v1 * v1 * jets::wirtinger(g, {2, 0, 0, 0}) +
                      2.0 * v1 * v2 * jets::wirtinger(g, {1, 0, 1, 0}) +
                      v2 * v2 * jets::wirtinger(g, {0, 0, 2, 0});
            cplx hvv = jets::wirtinger(g, {1, 1, 0, 0}) * std::norm(v1) +
                       jets::wirtinger(g, {0, 0, 1, 1}) * std::norm(v2) +
                       jets::wirtinger(g, {1, 0, 0, 1}) * v1 * std::conj(v2) +
                       jets::wirtinger(g, {0, 1, 1, 0}) * v2 * std::conj(v1);
            return nn.real() + hvv.real();
        }
    }
}

double taylor_A(const Field& r, const Field& f, const Point& p, int k, double boundary_tol) {
    Jet jr = jets::jet_of(r, p, 1);
    double scale = std::max(1.0, std::sqrt(geometry::grad_norm2(jr)));
    if (std::abs(jr.value()) > boundary_tol * scale)
        throw DomainError("taylor_A expects a boundary point");
    CJet g = jets::cjet_of(f, p, std::max(2, k));
    return taylor_A_from_jet(g, geometry::field_N(jr), k);
}

TaylorFit taylor_A_fit(const Field& r, const std::function<double(const Point&)>& f,
                       const Point& p, int kmax, int samples, double s_max) {
    if (samples < kmax + 3)
        throw DomainError("taylor_A_fit needs at least kmax + 3 samples");
    Jet jr = jets::jet_of(r, p, 1);
    CVec n = geometry::field_N(jr);

    const int kfit = std::min(kmax + 4, samples - 2);
    Eigen::MatrixXd vand(samples, kfit + 1);
    Eigen::VectorXd rhs(samples);
    for (int j = 0; j < samples; ++j) {
        // Chebyshev-spread depths in [0.02, 1] * s_max, s negative (inward).
        double theta = M_PI * (j + 0.5) / samples;
        double tau = -(0.02 + 0.98 * 0.5 * (1.0 + std::cos(theta)));
        Point qj{p.z + (tau * s_max) * n(0), p.w + (tau * s_max) * n(1)};
        rhs[j] = f(qj);
        double pw = 1.0;
        for (int c = 0; c <= kfit; ++c) {
            vand(j, c) = pw;
            pw *= tau;
        }
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(vand, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double cond = svd.singularValues()(0) /
                  svd.singularValues()(svd.singularValues().size() - 1);
    if (!(cond < 1e12)) throw DomainError("taylor_A_fit: ill-conditioned fit");
    Eigen::VectorXd c = svd.solve(rhs);

    TaylorFit out;
    out.cond = cond;
    out.s_max = s_max;
    out.n = samples;
    out.coeffs.resize(static_cast<std::size_t>(kmax) + 1);
    double scale = 1.0;
    for (int k = 0; k <= kmax; ++k) {
        out.coeffs[static_cast<std::size_t>(k)] = c[k] / scale;
        scale *= s_max;
    }
    return out;
}

TaylorFit taylor_A_fit(const Field& r, const Field& f, const Point& p, int kmax, int samples,
                       double s_max) {
    return taylor_A_fit(
        r, [&](const Point& q) { return f.eval(q); }, p, kmax, samples, s_max);
}

ExpansionFieldJets make_expansion_fields(const Field& r, const Field& P, const Point& p,
                                         int order) {
    if (order < 4) throw DomainError("series fields need jets of order >= 4");
    CJet jr = jets::cjet_of(r, p, order);
    CJet jp = jets::cjet_of(P, p, order);
    auto dr = geometry::derivs_field(jr);
    auto dp = geometry::derivs_field(jp);

    ExpansionFieldJets out;
    out.levi_r = geometry::levi_of(dr);
    out.hdet_r = geometry::hdet_of(dr);
    out.re_hr_lrlp = geometry::scaled(geometry::re2_v(geometry::hr_lrlp_of(dr, dp)), 0.5);
    out.b_p = geometry::bp_of(dr, dp);
    out.q_p = geometry::qp_of(dr, dp);
    out.re_hp_lrlp = geometry::scaled(geometry::re2_v(geometry::hp_lrlp_of(dr, dp)), 0.5);
    out.hp_lrlr = geometry::hp_lrlr_of(dr, dp);
    out.hdet_p = geometry::hdet_of(dp);
    out.normal = CVec(jets::wirtinger(jr, {0, 1, 0, 0}), jets::wirtinger(jr, {0, 0, 0, 1}));
    return out;
}

std::vector<SeriesTerms> series_G(const ExpansionFieldJets& fields, double P_at_q, double K,
                                  double u, int kmax) {
    if (kmax < 0 || kmax > 2)
        throw DomainError("series_G supports k <= 2; use the fit pathway for higher order");

    // u^j A_j(g), with A_{-1} = A_{-2} = 0.
    auto term = [&](const CJet& g, int j) {
        if (j < 0) return 0.0;
        return std::pow(u, j) * taylor_A_from_jet(g, fields.normal, j);
    };

    std::vector<SeriesTerms> out;
    const double P = P_at_q;
    for (int k = 0; k <= kmax; ++k) {
        SeriesTerms t;
        t.k = k;
        t.F0 = P * P * term(fields.hdet_r, k) + 2 * P * term(fields.re_hr_lrlp, k) +
               term(fields.b_p, k) + P * term(fields.q_p, k - 1) +
               2 * term(fields.re_hp_lrlp, k - 1) + term(fields.hdet_p, k - 2);
        t.F1 = 2 * P * term(fields.levi_r, k) + 4 * P * term(fields.hdet_r, k - 1) +
               4 * term(fields.re_hr_lrlp, k - 1) + 2 * term(fields.hp_lrlr, k - 1) +
               2 * term(fields.q_p, k - 2);
        t.F2 = 4 * term(fields.levi_r, k - 1) + 4 * term(fields.hdet_r, k - 2);
        t.G = t.F0 + K * t.F1 + K * K * t.F2;
        out.push_back(t);
    }
    return out;
}

std::vector<SeriesTerms> series_G(const Field& r, const Field& P, double K,
                                  const NormalFrame& frame, int kmax) {
    ExpansionFieldJets fields = make_expansion_fields(r, P, frame.p);
    return series_G(fields, P.eval(frame.q), K, frame.u, kmax);
}

}  // namespace pshdef::boundary
