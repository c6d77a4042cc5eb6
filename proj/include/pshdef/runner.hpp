#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "pshdef/config.hpp"

namespace pshdef::runner {

// Exit codes shared by every command.
inline constexpr int kExitPass = 0;
inline constexpr int kExitIdentityFailure = 1;
inline constexpr int kExitCertifyFail = 2;
inline constexpr int kExitInconclusive = 3;
inline constexpr int kExitInputError = 4;

struct RunOutput {
    int exit_code = 0;
    nlohmann::json report;
    std::string csv;  // classify only
};

enum class Mutation { None, QpSignFlip };

/// Identity suite: random (r, P, K, q) draws plus the config's own domain at
/// random points; reports the worst residual of the full grouping and of each
/// intermediate identity.
RunOutput run_identity(const config::DomainConfig& cfg, int n_random, std::uint64_t seed,
                       Mutation mutation = Mutation::None);

/// Boundary sampling and classification as CSV (x1,y1,x2,y2,levi,hdet,kind).
RunOutput run_classify(const config::DomainConfig& cfg);

/// Full certification pipeline: necessary conditions, admissible L half-line,
/// boundary ratio bound per L, psd scans over the (K, L) grid.
RunOutput run_certify(const config::DomainConfig& cfg);

/// Taylor coefficients of a named field (r, levi, hdet, B) along the normal
/// through p: analytic A_k for k <= 2 against the polynomial fit.
RunOutput run_taylor(const config::DomainConfig& cfg, const std::string& field, const Point& p,
                     int kmax);

std::string format_point(const Point& p);
Point parse_point(const std::string& text);

}  // namespace pshdef::runner
