#pragma once
#include <limits>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pshdef/expr.hpp"
#include "pshdef/jet.hpp"
#include "pshdef/random.hpp"

namespace pshdef::testing {

/// |a - b| over max(|a|, |b|, floor).  The floor keeps near-zero comparisons
/// meaningful as absolute ones.
inline double rel_gap(double a, double b, double floor = 1.0) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

inline double rel_gap(cplx a, cplx b, double floor = 1.0) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

using rnd::Rng;
using rnd::random_field;
using rnd::random_graph_field;
using rnd::random_point;

/// Find a root of r along the y2 axis through (x1, y1, x2); bisection to
/// near machine precision.  Returns nullopt when no sign change brackets.
inline std::optional<Point> root_along_y2(const expr::Field& r, double x1, double y1, double x2,
                                          double lo = -1.5, double hi = 1.5) {
    auto at = [&](double y2) { return r.eval(Point::from_reals(x1, y1, x2, y2)); };
    const int scan = 96;
    double prev_y = lo, prev_v = at(lo);
    for (int i = 1; i <= scan; ++i) {
        double y = lo + (hi - lo) * i / scan;
        double v = at(y);
        if (prev_v == 0.0) return Point::from_reals(x1, y1, x2, prev_y);
        if ((prev_v < 0.0) != (v < 0.0)) {
            double a = prev_y, b = y, fa = prev_v;
            for (int k = 0; k < 100; ++k) {
                double m = 0.5 * (a + b);
                double fm = at(m);
                if (fm == 0.0) return Point::from_reals(x1, y1, x2, m);
                if ((fa < 0.0) != (fm < 0.0))
                    b = m;
                else
                    a = m, fa = fm;
            }
            return Point::from_reals(x1, y1, x2, 0.5 * (a + b));
        }
        prev_y = y;
        prev_v = v;
    }
    return std::nullopt;
}

/// Least-squares slope of log(err) against log(x) over a decaying sequence;
/// pairs with err below the noise floor are skipped.  Returns +inf when the
/// errors vanish identically (exact truncation).
inline double empirical_order(const std::vector<double>& xs, const std::vector<double>& errs,
                              double noise_floor = 1e-14) {
    std::vector<double> lx, le;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (errs[i] > noise_floor && xs[i] > 0) {
            lx.push_back(std::log(xs[i]));
            le.push_back(std::log(errs[i]));
        }
    }
    if (lx.size() < 2) return std::numeric_limits<double>::infinity();
    double mx = 0, me = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i], me += le[i];
    mx /= static_cast<double>(lx.size());
    me /= static_cast<double>(lx.size());
    double num = 0, den = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        num += (lx[i] - mx) * (le[i] - me);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    return num / den;
}

// Shared domains.
inline expr::Field field_halfspace() { return expr::Field::parse("Im(w)"); }
inline expr::Field field_ball() { return expr::Field::parse("abs2(z)+abs2(w)-1"); }
inline expr::Field field_example6() {
    return expr::Field::parse(
        "Re(w)+abs2(w)+Re(w)*abs2(z)+abs2(z)*abs2(w)+abs2(z)^2+abs2(z)^3");
}

/// A boundary point of the example domain on {z = 0}: the circle
/// Re w + |w|^2 = 0, parameterized by angle about its center -1/2.
inline Point example6_weak_point(double theta) {
    cplx w = cplx{-0.5, 0.0} + 0.5 * cplx{std::cos(theta), std::sin(theta)};
    return Point{cplx{0.0, 0.0}, w};
}

/// A boundary point of the example domain with given z: solves
/// Re w + |w|^2 = -|z|^4 for real w near 0.
inline Point example6_boundary_point(cplx z) {
    double t2 = std::norm(z) * std::norm(z);
    double x = 0.5 * (-1.0 + std::sqrt(1.0 - 4.0 * t2));
    return Point{z, cplx{x, 0.0}};
}

}  // namespace pshdef::testing
