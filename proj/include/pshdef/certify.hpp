#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pshdef/boundary.hpp"
#include "pshdef/expansion.hpp"
#include "pshdef/expr.hpp"
#include "pshdef/geometry.hpp"

namespace pshdef::certify {

enum class PointKind { Strong, Weak, NonPseudoconvex };

const char* to_string(PointKind k);

struct BoundarySample {
    Point p;
    double levi = 0.0;
    double hdet_r = 0.0;
    PointKind kind = PointKind::Strong;
};

enum class Verdict { Pass, Fail, Inconclusive };

const char* to_string(Verdict v);

struct Witness {
    Point p;
    double value = 0.0;
};

/// Structured outcome of one condition check.
struct CertReport {
    std::string condition;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<Witness> witnesses;  // nonempty whenever verdict == Fail
    std::map<std::string, double> tolerances;
    std::map<std::string, double> parameters;
    std::string note;

    bool passed() const { return verdict == Verdict::Pass; }
};

/// Scan/sampling region in C^2.
struct Region {
    enum class Shape { Box, Polydisc, Ball, Annulus };

    Point center;
    double radius = 1.0;
    Shape shape = Shape::Box;
    double inner_radius = 0.0;  // Annulus only

    bool contains(const Point& q) const;
};

/// Up to n boundary points found by 1-D root bracketing of r along axis
/// rays through a deterministic grid, refined to |r| <= 1e-12 and classified
/// by the sign of the Levi form against tol_weak * (local scale).
std::vector<BoundarySample> sample_boundary(const expr::Field& r, const Region& region, int n,
                                            double tol_weak = 1e-9);

/// Classify one boundary point.
BoundarySample classify_point(const expr::Field& r, const Point& p, double tol_weak = 1e-9);

/// Nudge a weak candidate toward the local minimum of the Levi form along
/// the boundary (derivative-free bisection in tangent directions).
Point refine_weak(const expr::Field& r, const Point& p, int rounds = 3);

/// Necessary condition on the boundary: exists C <= c_max with
/// -det H_{(1+X)r} <= C * levi_r at all samples; Weak samples use the
/// absolute form -det H <= tol * scale.  X is passed already scaled by L.
CertReport check_necessary_boundary(const expr::Field& r, const expr::Field& X,
                                    const std::vector<BoundarySample>& samples,
                                    double c_max = 1e6, double tol = 1e-9);

/// Necessary condition at weak points: B_P = 0 and L_r(P) = 0 (equivalent;
/// both are checked) over the given weak samples.
CertReport check_necessary_BP(const expr::Field& r, const expr::Field& P,
                              const std::vector<BoundarySample>& weak_samples,
                              double tol = 1e-9);

/// Admissible half-line of modification strengths L, from the sign of
/// H_{1+X}(L_r, L_r)(p0).
struct ILResult {
    enum class Side { Empty, Negative, Positive };
    Side side = Side::Empty;
    double h_value = 0.0;

    bool admits(double L) const {
        switch (side) {
            case Side::Negative: return L < 0.0;
            case Side::Positive: return L > 0.0;
            default: return false;
        }
    }
};

ILResult interval_IL(const expr::Field& r, const expr::Field& X, const Point& p0,
                     double tol = 1e-12);

/// Sylvester-criterion scan of rho over a grid in the region, restricted to
/// the sublevel set {rho <= 0}.  Failing points are reported sorted by
/// violation magnitude.
CertReport scan_psh(const expr::Field& rho, const Region& region, int grid_n,
                    double tol = 1e-12);

struct FeasiblePair {
    double K = 0.0;
    double L = 0.0;
};

/// Full sufficiency pipeline over parameter grids.
struct SufficiencyReport {
    CertReport cond_bp;                                       // condition (1)
    ILResult il;                                              // condition (2)
    std::vector<std::pair<double, CertReport>> cond_boundary; // condition (3), per L
    std::vector<FeasiblePair> feasible;
    std::vector<BoundarySample> samples;
    int n_weak = 0;
    Verdict verdict = Verdict::Inconclusive;
    std::string note;
};

SufficiencyReport check_sufficient(const expr::Field& r, const expr::Field& X, const Point& p0,
                                   const Region& region, const std::vector<double>& K_grid,
                                   const std::vector<double>& L_magnitudes, int n_samples = 300,
                                   int grid_n = 8, double tol_psd = 1e-12);

/// Sign pattern of the series coefficients G_0..G_Nmax over normal frames:
/// the first nonzero G_k must satisfy (-1)^k G_k > 0; frames with all
/// coefficients below tolerance are inconclusive at finite order.
CertReport series_necessity(const expr::Field& r, const expr::Field& P, double K,
                            const std::vector<boundary::NormalFrame>& frames, int n_max = 2,
                            double tol = 1e-9);

std::vector<double> default_K_grid();
std::vector<double> default_L_magnitudes();

}  // namespace pshdef::certify
