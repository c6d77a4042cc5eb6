#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pshdef/certify.hpp"
#include "pshdef/core.hpp"

namespace pshdef::config {

struct Tolerances {
    double identity = 1e-9;   // identity-suite residual threshold
    double psd = 1e-12;       // Sylvester test
    double weak = 1e-9;       // weak-point classification
    double cert = 1e-9;       // necessary-condition checks
    double il = 1e-12;        // H_P(L_r,L_r) sign cut
    double projection = 1e-12;
};

/// One domain setup: defining function, optional modification X, parameter
/// grids, and the scan region.
struct DomainConfig {
    std::string name;
    std::string r;                 // DSL text
    std::string X;                 // DSL text; empty = no modification
    std::vector<double> K{0.0};    // value or grid
    std::vector<double> L;         // value or grid; empty = derived half-line
    Point center;
    double radius = 0.3;
    int grid_n = 8;
    Tolerances tolerances;

    // Optional extras beyond the required fields.
    std::string shape = "box";  // box | polydisc | ball | annulus
    double inner_radius = 0.0;
    int n_samples = 300;

    expr::Field r_field() const;
    expr::Field x_field() const;  // throws when X is empty
    bool has_x() const { return !X.empty(); }
    certify::Region region() const;
};

/// Parse the key/value configuration format:
///   key = value          value: number | "string" | (a,b,c,d) | [v1, v2]
///   section { ... }      nested record (tolerances)
///   # comment to end of line
/// Unknown keys are rejected.  A config that names a built-in domain may omit
/// r/X; registry defaults fill the gaps.
DomainConfig parse_config(const std::string& text);
DomainConfig load_config_file(const std::string& path);

}  // namespace pshdef::config
