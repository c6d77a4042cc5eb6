#include "pshdef/certify.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "pshdef/parallel.hpp"

namespace pshdef::certify {

using expr::Field;
using jets::Jet;

const char* to_string(PointKind k) {
    switch (k) {
        case PointKind::Strong: return "strong";
        case PointKind::Weak: return "weak";
        default: return "non-pseudoconvex";
    }
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        default: return "inconclusive";
    }
}

bool Region::contains(const Point& q) const {
    Point d{q.z - center.z, q.w - center.w};
    switch (shape) {
        case Shape::Box:
            return std::abs(d.z.real()) <= radius && std::abs(d.z.imag()) <= radius &&
                   std::abs(d.w.real()) <= radius && std::abs(d.w.imag()) <= radius;
        case Shape::Polydisc: return std::abs(d.z) <= radius && std::abs(d.w) <= radius;
        case Shape::Ball: return std::norm(d.z) + std::norm(d.w) <= radius * radius;
        case Shape::Annulus: {
            double n2 = std::norm(d.z) + std::norm(d.w);
            return n2 >= inner_radius * inner_radius && n2 <= radius * radius;
        }
    }
    return false;
}

namespace {

bool point_less(const Point& a, const Point& b) {
    auto key = [](const Point& p) {
        return std::array<double, 4>{p.x1(), p.y1(), p.x2(), p.y2()};
    };
    return key(a) < key(b);
}

Point axis_point(const std::array<double, 4>& c) {
    return Point::from_reals(c[0], c[1], c[2], c[3]);
}

/// Refine a bracketed root of r along one coordinate axis.
double refine_root(const Field& r, std::array<double, 4> base, int axis, double lo, double hi,
                   double flo) {
    auto at = [&](double t) {
        base[static_cast<std::size_t>(axis)] = t;
        return r.eval(axis_point(base));
    };
    double a = lo, b = hi, fa = flo;
    for (int i = 0; i < 90; ++i) {
        double m = 0.5 * (a + b);
        double fm = at(m);
        if (fm == 0.0) return m;
        if ((fa < 0.0) != (fm < 0.0))
            b = m;
        else
            a = m, fa = fm;
    }
    return 0.5 * (a + b);
}

}  // namespace

BoundarySample classify_point(const Field& r, const Point& p, double tol_weak) {
    Jet j = jets::jet_of(r, p, 2);
    BoundarySample s;
    s.p = p;
    s.levi = geometry::levi(j);
    s.hdet_r = geometry::hdet(j);
    double cut = tol_weak * geometry::levi_scale(j);
    if (s.levi < -cut)
        s.kind = PointKind::NonPseudoconvex;
    else if (s.levi <= cut)
        s.kind = PointKind::Weak;
    else
        s.kind = PointKind::Strong;
    return s;
}

std::vector<BoundarySample> sample_boundary(const Field& r, const Region& region, int n,
                                            double tol_weak) {
    if (n < 1) throw DomainError("sample_boundary needs n >= 1");
    const double R = region.radius;
    const std::array<double, 4> c{region.center.x1(), region.center.y1(), region.center.x2(),
                                  region.center.y2()};

    // Grid resolution per transverse axis; odd so the centerline is hit.
    int m = std::max(3, static_cast<int>(std::ceil(std::cbrt(n / 2.0))));
    if (m % 2 == 0) ++m;
    const int march = 48;

    std::vector<Point> roots;
    for (int axis = 0; axis < 4; ++axis) {
        std::array<int, 3> others{};
        for (int k = 0, j = 0; k < 4; ++k)
            if (k != axis) others[static_cast<std::size_t>(j++)] = k;
        for (int i0 = 0; i0 < m; ++i0)
            for (int i1 = 0; i1 < m; ++i1)
                for (int i2 = 0; i2 < m; ++i2) {
                    std::array<double, 4> base = c;
                    auto offset = [&](int idx) {
                        return m == 1 ? 0.0 : -R + 2.0 * R * idx / (m - 1);
                    };
                    base[static_cast<std::size_t>(others[0])] += offset(i0);
                    base[static_cast<std::size_t>(others[1])] += offset(i1);
                    base[static_cast<std::size_t>(others[2])] += offset(i2);
                    double lo = c[static_cast<std::size_t>(axis)] - R;
                    double prev_t = lo;
                    std::array<double, 4> probe = base;
                    probe[static_cast<std::size_t>(axis)] = lo;
                    double prev_v = r.eval(axis_point(probe));
                    for (int step = 1; step <= march; ++step) {
                        double t = lo + 2.0 * R * step / march;
                        probe[static_cast<std::size_t>(axis)] = t;
                        double v = r.eval(axis_point(probe));
                        if ((prev_v < 0.0) != (v < 0.0)) {
                            double root = refine_root(r, base, axis, prev_t, t, prev_v);
                            std::array<double, 4> hit = base;
                            hit[static_cast<std::size_t>(axis)] = root;
                            Point p = axis_point(hit);
                            if (region.contains(p) && std::abs(r.eval(p)) <= 1e-12) {
                                jets::Jet j1 = jets::jet_of(r, p, 1);
                                if (geometry::grad_norm2(j1) > 1e-20) roots.push_back(p);
                            }
                        }
                        prev_t = t;
                        prev_v = v;
                    }
                }
    }

    std::sort(roots.begin(), roots.end(), point_less);
    std::vector<Point> unique;
    for (const Point& p : roots)
        if (unique.empty() || dist(unique.back(), p) > 1e-9) unique.push_back(p);
    if (unique.size() > static_cast<std::size_t>(n)) {
        // Thin deterministically while keeping the spread.
        std::vector<Point> kept;
        double stride = static_cast<double>(unique.size()) / n;
        for (int i = 0; i < n; ++i)
            kept.push_back(unique[static_cast<std::size_t>(i * stride)]);
        unique = std::move(kept);
    }

    std::vector<BoundarySample> out(unique.size());
    parallel_for(static_cast<int>(unique.size()), [&](int i) {
        out[static_cast<std::size_t>(i)] =
            classify_point(r, unique[static_cast<std::size_t>(i)], tol_weak);
    });
    return out;
}

Point refine_weak(const Field& r, const Point& p, int rounds) {
    auto project_back = [&](Point x) {
        for (int i = 0; i < 30; ++i) {
            Jet j = jets::jet_of(r, x, 1);
            double v = j.value();
            if (std::abs(v) <= 1e-13) break;
            Eigen::Vector4d g = geometry::real_gradient(j);
            double g2 = g.squaredNorm();
            if (g2 < 1e-20) break;
            Eigen::Vector4d step = (v / g2) * g;
            x = Point::from_reals(x.x1() - step[0], x.y1() - step[1], x.x2() - step[2],
                                  x.y2() - step[3]);
        }
        return x;
    };

    Point cur = project_back(p);
    double h = 1e-3;
    for (int round = 0; round < rounds; ++round) {
        Jet j = jets::jet_of(r, cur, 1);
        Eigen::Vector4d g = geometry::real_gradient(j).normalized();
        // Tangent basis: complete the gradient to an orthonormal frame.
        Eigen::Matrix4d basis = Eigen::Matrix4d::Identity();
        basis.col(0) = g;
        Eigen::HouseholderQR<Eigen::Matrix4d> qr(basis);
        Eigen::Matrix4d Q = qr.householderQ();
        for (int dir = 1; dir < 4; ++dir) {
            Eigen::Vector4d t = Q.col(dir);
            // Ternary search for the Levi minimum along this tangent line.
            double a = -h, b = h;
            auto levi_at = [&](double step) {
                Point x = Point::from_reals(cur.x1() + step * t[0], cur.y1() + step * t[1],
                                            cur.x2() + step * t[2], cur.y2() + step * t[3]);
                return std::abs(geometry::levi(r, project_back(x)));
            };
            for (int it = 0; it < 24; ++it) {
                double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
                if (levi_at(m1) <= levi_at(m2))
                    b = m2;
                else
                    a = m1;
            }
            double best = 0.5 * (a + b);
            cur = project_back(Point::from_reals(cur.x1() + best * t[0], cur.y1() + best * t[1],
                                                 cur.x2() + best * t[2],
                                                 cur.y2() + best * t[3]));
        }
        h *= 0.25;
    }
    return cur;
}

CertReport check_necessary_boundary(const Field& r, const Field& X,
                                    const std::vector<BoundarySample>& samples, double c_max,
                                    double tol) {
    CertReport rep;
    rep.condition = "necessary-boundary";
    rep.tolerances["tol"] = tol;
    rep.parameters["c_max"] = c_max;

    Field f = (expr::constant(1.0) + X) * r;
    double C = 0.0;
    std::vector<Witness> weak_violations;
    for (const BoundarySample& s : samples) {
        Jet j = jets::jet_of(f, s.p, 2);
        double h = geometry::hdet(j);
        if (s.kind == PointKind::Weak) {
            geometry::CHess ch = geometry::chess(j);
            double second = std::abs(ch.a) + std::abs(ch.d) + 2.0 * std::abs(ch.b);
            double scale = std::max(second * second, 1e-12);
            if (-h > tol * scale) weak_violations.push_back({s.p, -h});
        } else if (-h > 0.0 && s.levi > 0.0) {
            C = std::max(C, -h / s.levi);
        }
    }
    rep.parameters["C"] = C;
    if (!weak_violations.empty()) {
        rep.verdict = Verdict::Fail;
        rep.witnesses = std::move(weak_violations);
        rep.note = "negative determinant at weakly pseudoconvex samples";
    } else if (C > c_max) {
        rep.verdict = Verdict::Fail;
        rep.note = "ratio bound exceeded the search ceiling";
        // Witness: recompute the argmax sample.
        for (const BoundarySample& s : samples) {
            if (s.kind != PointKind::Strong || s.levi <= 0.0) continue;
            double h = geometry::hdet(f, s.p);
            if (-h / s.levi >= C) {
                rep.witnesses.push_back({s.p, -h / s.levi});
                break;
            }
        }
    } else {
        rep.verdict = Verdict::Pass;
    }
    return rep;
}

CertReport check_necessary_BP(const Field& r, const Field& P,
                              const std::vector<BoundarySample>& weak_samples, double tol) {
    CertReport rep;
    rep.condition = "necessary-BP";
    rep.tolerances["tol"] = tol;
    for (const BoundarySample& s : weak_samples) {
        Jet jr = jets::jet_of(r, s.p, 1);
        Jet jp = jets::jet_of(P, s.p, 1);
        double gr = geometry::grad_norm2(jr);
        double gp = geometry::grad_norm2(jp);
        double b = geometry::error_B(jr, jp);
        double l = std::abs(geometry::lr_apply(jr, jp));
        double scale_b = std::max(gr * gp, 1e-12);
        double scale_l = std::max(std::sqrt(gr * gp), 1e-12);
        if (std::abs(b) > tol * scale_b) rep.witnesses.push_back({s.p, b});
        if (l > std::sqrt(tol) * scale_l) rep.witnesses.push_back({s.p, l});
    }
    rep.verdict = rep.witnesses.empty() ? Verdict::Pass : Verdict::Fail;
    if (!rep.witnesses.empty()) rep.note = "B_P or L_r(P) does not vanish on the weak set";
    return rep;
}

ILResult interval_IL(const Field& r, const Field& X, const Point& p0, double tol) {
    Jet jr = jets::jet_of(r, p0, 2);
    Jet jp = jets::jet_of(expr::constant(1.0) + X, p0, 2);
    auto dr = geometry::derivs_at(jr);
    auto dp = geometry::derivs_at(jp);
    double h = geometry::hp_lrlr_of(dr, dp).real();

    geometry::CHess hx = geometry::chess(jp);
    double second = std::abs(hx.a) + std::abs(hx.d) + 2.0 * std::abs(hx.b);
    double scale = std::max(second * geometry::grad_norm2(jr), 1e-12);

    ILResult out;
    out.h_value = h;
    if (std::abs(h) <= tol * scale)
        out.side = ILResult::Side::Empty;
    else
        out.side = h > 0.0 ? ILResult::Side::Negative : ILResult::Side::Positive;
    return out;
}

CertReport scan_psh(const Field& rho, const Region& region, int grid_n, double tol) {
    if (grid_n < 2) throw DomainError("scan_psh needs grid_n >= 2");
    CertReport rep;
    rep.condition = "scan-psh";
    rep.tolerances["psd"] = tol;

    const double R = region.radius;
    const std::array<double, 4> c{region.center.x1(), region.center.y1(), region.center.x2(),
                                  region.center.y2()};
    auto coord = [&](int i, int axis) {
        return c[static_cast<std::size_t>(axis)] - R + 2.0 * R * i / (grid_n - 1);
    };

    const int slices = grid_n;
    std::vector<std::vector<Witness>> found(static_cast<std::size_t>(slices));
    std::vector<long> visited(static_cast<std::size_t>(slices), 0);
    parallel_for(slices, [&](int i0) {
        auto& local = found[static_cast<std::size_t>(i0)];
        for (int i1 = 0; i1 < grid_n; ++i1)
            for (int i2 = 0; i2 < grid_n; ++i2)
                for (int i3 = 0; i3 < grid_n; ++i3) {
                    Point q = Point::from_reals(coord(i0, 0), coord(i1, 1), coord(i2, 2),
                                                coord(i3, 3));
                    if (!region.contains(q)) continue;
                    if (rho.eval(q) > 0.0) continue;
                    ++visited[static_cast<std::size_t>(i0)];
                    geometry::CHess h = geometry::chess(rho, q);
                    if (!geometry::psd2(h, tol)) {
                        double det_scale = std::max(1.0, std::abs(h.a) * std::abs(h.d));
                        double violation =
                            std::max({-h.a, -h.d, -h.det() / det_scale, 0.0});
                        local.push_back({q, violation});
                    }
                }
    });

    long total = 0;
    for (int i = 0; i < slices; ++i) total += visited[static_cast<std::size_t>(i)];
    rep.parameters["points_scanned"] = static_cast<double>(total);
    for (auto& local : found)
        rep.witnesses.insert(rep.witnesses.end(), local.begin(), local.end());
    std::stable_sort(rep.witnesses.begin(), rep.witnesses.end(),
                     [](const Witness& a, const Witness& b) { return a.value > b.value; });
    if (rep.witnesses.size() > 16) rep.witnesses.resize(16);
    rep.verdict = rep.witnesses.empty() ? Verdict::Pass : Verdict::Fail;
    if (total == 0) rep.note = "no grid points inside the sublevel set";
    return rep;
}

std::vector<double> default_K_grid() { return {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 25.0, 100.0}; }

std::vector<double> default_L_magnitudes() {
    std::vector<double> mags;
    for (int i = 0; i < 16; ++i) mags.push_back(std::pow(10.0, -2.0 + 3.0 * i / 15.0));
    return mags;
}

SufficiencyReport check_sufficient(const Field& r, const Field& X, const Point& p0,
                                   const Region& region, const std::vector<double>& K_grid,
                                   const std::vector<double>& L_magnitudes, int n_samples,
                                   int grid_n, double tol_psd) {
    SufficiencyReport rep;
    rep.samples = sample_boundary(r, region, n_samples);

    std::vector<BoundarySample> weak;
    for (const BoundarySample& s : rep.samples)
        if (s.kind == PointKind::Weak) weak.push_back(s);
    rep.n_weak = static_cast<int>(weak.size());

    // Condition (1): B_P vanishes on W.
    rep.cond_bp = check_necessary_BP(r, expr::constant(1.0) + X, weak);

    // Condition (2): sign of H_{1+X}(L_r, L_r)(p0) fixes the L half-line.
    rep.il = interval_IL(r, X, p0);

    // Condition (3): the boundary ratio bound, for each candidate L.
    std::vector<double> L_candidates{0.0};  // Kohn ansatz is always available
    if (rep.il.side != ILResult::Side::Empty) {
        double sign = rep.il.side == ILResult::Side::Negative ? -1.0 : 1.0;
        for (double m : L_magnitudes) L_candidates.push_back(sign * m);
    }
    std::vector<double> L_passing;
    for (double L : L_candidates) {
        CertReport c3 =
            check_necessary_boundary(r, expr::constant(L) * X, rep.samples);
        if (c3.passed()) L_passing.push_back(L);
        rep.cond_boundary.emplace_back(L, std::move(c3));
    }

    // Grid search: every (K, L) whose modified function passes the scan.
    for (double K : K_grid)
        for (double L : L_passing) {
            Field rho = expansion::build_rho(r, X, K, L);
            CertReport scan = scan_psh(rho, region, grid_n, tol_psd);
            if (scan.passed()) rep.feasible.push_back({K, L});
        }

    bool weak_exists = rep.n_weak > 0;
    bool cond3_any = !L_passing.empty();
    if (!rep.feasible.empty()) {
        rep.verdict = Verdict::Pass;
    } else if (weak_exists &&
               (!rep.cond_bp.passed() || rep.il.side == ILResult::Side::Empty || !cond3_any)) {
        rep.verdict = Verdict::Fail;
        rep.note = "a necessary condition fails on the weak set";
    } else if (!cond3_any) {
        rep.verdict = Verdict::Fail;
        rep.note = "no L satisfies the boundary ratio bound";
    } else {
        rep.verdict = Verdict::Inconclusive;
        rep.note = "conditions hold but the (K, L) grid is exhausted";
    }
    return rep;
}

CertReport series_necessity(const Field& r, const Field& P, double K,
                            const std::vector<boundary::NormalFrame>& frames, int n_max,
                            double tol) {
    if (n_max > 2) throw DomainError("series_necessity supports N_max <= 2");
    CertReport rep;
    rep.condition = "series-necessity";
    rep.tolerances["tol"] = tol;
    rep.parameters["K"] = K;
    rep.parameters["n_max"] = static_cast<double>(n_max);

    int inconclusive = 0;
    for (const boundary::NormalFrame& frame : frames) {
        // The theorem tests the boundary values G_k(p): u at its boundary
        // limit 1/(2 |dr(p)|^2) and P at the foot point.
        boundary::ExpansionFieldJets fields = boundary::make_expansion_fields(r, P, frame.p);
        double u_p = 1.0 / (2.0 * frame.grad_norm * frame.grad_norm);
        auto terms = boundary::series_G(fields, P.eval(frame.p), K, u_p, n_max);
        bool decided = false;
        for (const auto& t : terms) {
            double scale = 1.0 + std::abs(t.F0) + std::abs(K * t.F1) + std::abs(K * K * t.F2);
            if (std::abs(t.G) > tol * scale) {
                double signed_term = (t.k % 2 == 0 ? 1.0 : -1.0) * t.G;
                if (signed_term <= 0.0) rep.witnesses.push_back({frame.p, t.G});
                decided = true;
                break;
            }
        }
        if (!decided) ++inconclusive;
    }
    rep.parameters["inconclusive_frames"] = static_cast<double>(inconclusive);
    if (!rep.witnesses.empty()) {
        rep.verdict = Verdict::Fail;
        rep.note = "sign pattern violated at the first nonzero coefficient";
    } else if (inconclusive > 0) {
        rep.verdict = Verdict::Inconclusive;
        rep.note = "all coefficients vanish up to N_max at some frames";
    } else {
        rep.verdict = Verdict::Pass;
    }
    return rep;
}

}  // namespace pshdef::certify
