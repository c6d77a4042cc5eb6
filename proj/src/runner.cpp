#include "pshdef/runner.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

#include "pshdef/boundary.hpp"
#include "pshdef/certify.hpp"
#include "pshdef/expansion.hpp"
#include "pshdef/random.hpp"

namespace pshdef::runner {

using config::DomainConfig;
using expr::Field;
using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json point_json(const Point& p) {
    return json{{"x1", p.x1()}, {"y1", p.y1()}, {"x2", p.x2()}, {"y2", p.y2()}};
}

json witness_json(const certify::Witness& w) {
    json j = point_json(w.p);
    j["value"] = w.value;
    return j;
}

json report_json(const certify::CertReport& rep) {
    json j;
    j["condition"] = rep.condition;
    j["verdict"] = certify::to_string(rep.verdict);
    j["tolerances"] = rep.tolerances;
    j["parameters"] = rep.parameters;
    if (!rep.note.empty()) j["note"] = rep.note;
    j["witnesses"] = json::array();
    for (const auto& w : rep.witnesses) j["witnesses"].push_back(witness_json(w));
    return j;
}

json base_report(const DomainConfig& cfg, const std::string& command) {
    json j;
    j["schema"] = "pshdef/1";
    j["command"] = command;
    j["domain"] = json{{"name", cfg.name}, {"r", cfg.r}, {"X", cfg.X}};
    return j;
}

/// Reference-constant checks for the worked example: values this library
/// computes versus the constants printed elsewhere for the same quantities.
json example6_discrepancies(const DomainConfig& cfg) {
    json out = json::array();
    Field r = cfg.r_field();
    Field X = expr::Field::parse("abs2(z)");
    Point p0 = Point::from_reals(0, 0, 0, 0);

    certify::ILResult il = certify::interval_IL(r, X, p0);
    out.push_back(json{{"quantity", "H_P(L_r,L_r)(p0) per unit L"},
                       {"computed", il.h_value},
                       {"printed_reference", 0.5},
                       {"agrees", std::abs(il.h_value - 0.5) <= 1e-12}});

    // |z|^2-coefficient of det H_r at the origin.
    jets::CJet jr = jets::cjet_of(r, p0, 4);
    jets::CJet hd = geometry::hdet_of(geometry::derivs_field(jr));
    double z2 = jets::wirtinger(hd, {1, 1, 0, 0}).real();
    out.push_back(json{{"quantity", "det H_r |z|^2-coefficient at 0"},
                       {"computed", z2},
                       {"printed_reference", 15.0 / 16.0},
                       {"agrees", std::abs(z2 - 15.0 / 16.0) <= 1e-12}});

    // Levi form against the printed closed form, over boundary samples.
    auto samples = certify::sample_boundary(r, cfg.region(), 120);
    double worst = 0.0;
    for (const auto& s : samples) {
        double t = std::norm(s.p.z);
        double m = std::norm(cplx{0.5, 0.0} + s.p.w);
        double printed = (1 + t) * t * (4 * m + t * t);
        worst = std::max(worst, std::abs(s.levi - printed) / std::max(1.0, std::abs(s.levi)));
    }
    out.push_back(json{{"quantity", "Levi form vs printed closed form (max rel gap)"},
                       {"computed", worst},
                       {"printed_reference", 0.0},
                       {"agrees", worst <= 1e-10}});
    return out;
}

}  // namespace

std::string format_point(const Point& p) {
    return "(" + fmt(p.x1()) + "," + fmt(p.y1()) + "," + fmt(p.x2()) + "," + fmt(p.y2()) + ")";
}

Point parse_point(const std::string& text) {
    double a, b, c, d;
    if (std::sscanf(text.c_str(), " ( %lf , %lf , %lf , %lf )", &a, &b, &c, &d) != 4)
        throw DomainError("cannot parse point: " + text + " (expected (x1,y1,x2,y2))");
    return Point::from_reals(a, b, c, d);
}

RunOutput run_identity(const DomainConfig& cfg, int n_random, std::uint64_t seed,
                       Mutation mutation) {
    RunOutput out;
    out.report = base_report(cfg, "identity");
    out.report["seed"] = seed;
    out.report["n"] = n_random;

    Field r_cfg = cfg.r_field();
    Field p_cfg = cfg.has_x()
                      ? expansion::build_p(cfg.x_field(), cfg.L.empty() ? -1.0 : cfg.L.front())
                      : expr::constant(1.0);

    rnd::Rng rng(seed);
    double worst_full = 0.0;
    double worst_rr = 0.0, worst_pr = 0.0, worst_a = 0.0;
    for (int i = 0; i < n_random; ++i) {
        bool domain_case = (i % 2 == 0);
        Field r = domain_case ? r_cfg : rnd::random_field(rng);
        Field P = domain_case ? p_cfg : rnd::random_field(rng);
        double K = domain_case
                       ? cfg.K[static_cast<std::size_t>(rng.uniform_int(
                             0, static_cast<int>(cfg.K.size()) - 1))]
                       : rng.uniform(-5.0, 5.0);
        Point q = domain_case ? Point{cfg.center.z + cplx{rng.uniform(-cfg.radius, cfg.radius),
                                                          rng.uniform(-cfg.radius, cfg.radius)},
                                      cfg.center.w + cplx{rng.uniform(-cfg.radius, cfg.radius),
                                                          rng.uniform(-cfg.radius, cfg.radius)}}
                              : rnd::random_point(rng);

        if (mutation == Mutation::QpSignFlip) {
            jets::Jet jr = jets::jet_of(r, q, 2);
            jets::Jet jp = jets::jet_of(P, q, 2);
            expansion::ExpansionCoeffs c =
                expansion::detail::coeffs_mutated(jr, jp, K, q, true);
            Field rho = r * (expr::constant(K) * r + P);
            double lhs = geometry::hdet(rho, q);
            double rv = jr.value();
            double res = std::abs(lhs - c.combined(rv)) /
                         std::max({1.0, std::abs(lhs), std::abs(c.c0)});
            worst_full = std::max(worst_full, res);
        } else {
            worst_full = std::max(worst_full, expansion::residual_full(r, P, K, q));
        }
        worst_rr = std::max(worst_rr,
                            expansion::residual_term(expansion::TermIdentity::HessianRR, r, P,
                                                     K, q));
        worst_pr = std::max(worst_pr,
                            expansion::residual_term(expansion::TermIdentity::HessianPR, r, P,
                                                     K, q));
        worst_a = std::max(
            worst_a,
            expansion::residual_term(expansion::TermIdentity::HessianA, r, P, K, q));
    }

    double threshold = cfg.tolerances.identity;
    out.report["max_residual"] = worst_full;
    out.report["per_term"] =
        json{{"HessianRR", worst_rr}, {"HessianPR", worst_pr}, {"HessianA", worst_a}};
    out.report["threshold"] = threshold;
    bool pass = worst_full <= threshold && worst_rr <= threshold && worst_pr <= threshold &&
                worst_a <= threshold;
    out.report["pass"] = pass;
    out.exit_code = pass ? kExitPass : kExitIdentityFailure;
    return out;
}

RunOutput run_classify(const DomainConfig& cfg) {
    RunOutput out;
    out.report = base_report(cfg, "classify");

    Field r = cfg.r_field();
    auto samples =
        certify::sample_boundary(r, cfg.region(), cfg.n_samples, cfg.tolerances.weak);

    std::ostringstream csv;
    csv << "x1,y1,x2,y2,levi,hdet,kind\r\n";
    int n_weak = 0, n_strong = 0, n_nonpsc = 0;
    for (const auto& s : samples) {
        csv << fmt(s.p.x1()) << ',' << fmt(s.p.y1()) << ',' << fmt(s.p.x2()) << ','
            << fmt(s.p.y2()) << ',' << fmt(s.levi) << ',' << fmt(s.hdet_r) << ','
            << certify::to_string(s.kind) << "\r\n";
        if (s.kind == certify::PointKind::Weak) ++n_weak;
        else if (s.kind == certify::PointKind::Strong) ++n_strong;
        else ++n_nonpsc;
    }
    out.csv = csv.str();
    out.report["n_samples"] = samples.size();
    out.report["counts"] = json{{"weak", n_weak},
                                {"strong", n_strong},
                                {"non_pseudoconvex", n_nonpsc}};
    if (samples.empty())
        out.report["note"] = "no boundary points found in the region";
    out.exit_code = kExitPass;
    return out;
}

RunOutput run_certify(const DomainConfig& cfg) {
    RunOutput out;
    out.report = base_report(cfg, "certify");
    if (!cfg.has_x()) throw DomainError("certify needs a modification X in the config");

    Field r = cfg.r_field();
    Field X = cfg.x_field();

    std::vector<double> L_mags;
    if (cfg.L.empty()) {
        L_mags = certify::default_L_magnitudes();
    } else {
        for (double l : cfg.L) L_mags.push_back(std::abs(l));
    }

    certify::SufficiencyReport rep =
        certify::check_sufficient(r, X, cfg.center, cfg.region(), cfg.K, L_mags,
                                  cfg.n_samples, cfg.grid_n, cfg.tolerances.psd);

    out.report["verdict"] = certify::to_string(rep.verdict);
    if (!rep.note.empty()) out.report["note"] = rep.note;
    out.report["n_weak_samples"] = rep.n_weak;
    out.report["n_samples"] = rep.samples.size();
    out.report["condition_1_bp"] = report_json(rep.cond_bp);

    json il;
    il["h_value"] = rep.il.h_value;
    il["side"] = rep.il.side == certify::ILResult::Side::Empty
                     ? "empty"
                     : (rep.il.side == certify::ILResult::Side::Negative ? "negative"
                                                                         : "positive");
    out.report["condition_2_interval"] = il;

    json c3 = json::array();
    for (const auto& [L, crep] : rep.cond_boundary) {
        json e = report_json(crep);
        e["L"] = L;
        c3.push_back(e);
    }
    out.report["condition_3_boundary"] = c3;

    json feas = json::array();
    for (const auto& fp : rep.feasible) feas.push_back(json{{"K", fp.K}, {"L", fp.L}});
    out.report["feasible"] = feas;

    if (cfg.name == "example6")
        out.report["reference_constant_checks"] = example6_discrepancies(cfg);

    switch (rep.verdict) {
        case certify::Verdict::Pass: out.exit_code = kExitPass; break;
        case certify::Verdict::Fail: out.exit_code = kExitCertifyFail; break;
        default: out.exit_code = kExitInconclusive; break;
    }
    return out;
}

RunOutput run_taylor(const DomainConfig& cfg, const std::string& field, const Point& p,
                     int kmax) {
    RunOutput out;
    out.report = base_report(cfg, "taylor");
    out.report["field"] = field;
    out.report["p"] = point_json(p);
    if (kmax < 0) throw DomainError("kmax must be nonnegative");

    Field r = cfg.r_field();

    // Pin p to the boundary for off-by-rounding inputs.
    boundary::NormalFrame frame = boundary::project(r, p, cfg.tolerances.projection);
    Point pb = frame.p;
    out.report["p_boundary"] = point_json(pb);

    // Field evaluator and, for k <= 2, the analytic jet at pb.
    std::function<double(const Point&)> eval;
    jets::CJet analytic_jet;
    bool have_jet = true;
    if (field == "r") {
        eval = [r](const Point& q) { return r.eval(q); };
        analytic_jet = jets::cjet_of(r, pb, 4);
    } else if (field == "levi" || field == "hdet") {
        bool is_levi = field == "levi";
        eval = [r, is_levi](const Point& q) {
            jets::Jet j = jets::jet_of(r, q, 2);
            return is_levi ? geometry::levi(j) : geometry::hdet(j);
        };
        auto dr = geometry::derivs_field(jets::cjet_of(r, pb, 4));
        analytic_jet = is_levi ? geometry::levi_of(dr) : geometry::hdet_of(dr);
    } else if (field == "B") {
        if (!cfg.has_x()) throw DomainError("field B needs a modification X in the config");
        Field P = expansion::build_p(cfg.x_field(), cfg.L.empty() ? -1.0 : cfg.L.front());
        eval = [r, P](const Point& q) {
            return geometry::error_B(jets::jet_of(r, q, 1), jets::jet_of(P, q, 1));
        };
        auto dr = geometry::derivs_field(jets::cjet_of(r, pb, 4));
        auto dp = geometry::derivs_field(jets::cjet_of(P, pb, 4));
        analytic_jet = geometry::bp_of(dr, dp);
    } else {
        throw DomainError("unknown field: " + field + " (expected r, levi, hdet, or B)");
    }

    boundary::TaylorFit fit = boundary::taylor_A_fit(r, eval, pb, kmax);
    geometry::CVec n = geometry::field_N(jets::jet_of(r, pb, 1));

    json arr = json::array();
    for (int k = 0; k <= kmax; ++k) {
        json e;
        e["k"] = k;
        double fitted = fit.coeffs[static_cast<std::size_t>(k)];
        e["fit"] = fitted;
        if (k <= 2 && have_jet) {
            double a = boundary::taylor_A_from_jet(analytic_jet, n, k);
            e["analytic"] = a;
            e["rel_gap"] = std::abs(a - fitted) / std::max({1.0, std::abs(a), std::abs(fitted)});
        } else {
            e["analytic"] = nullptr;
        }
        arr.push_back(e);
    }
    out.report["A"] = arr;
    out.report["fit"] = json{{"cond", fit.cond}, {"s_max", fit.s_max}, {"n", fit.n}};
    out.exit_code = kExitPass;
    return out;
}

}  // namespace pshdef::runner
