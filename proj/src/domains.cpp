#include "pshdef/domains.hpp"

namespace pshdef::domains {

using config::DomainConfig;

std::optional<DomainConfig> builtin(const std::string& name) {
    DomainConfig c;
    c.name = name;
    if (name == "halfspace") {
        c.r = "Im(w)";
        c.X = "0";
        c.center = Point::from_reals(0, 0, 0, 0);
        c.radius = 0.4;
        c.shape = "box";
        return c;
    }
    if (name == "ball") {
        c.r = "abs2(z)+abs2(w)-1";
        c.X = "0";
        c.center = Point::from_reals(1, 0, 0, 0);
        c.radius = 0.25;
        c.shape = "box";
        c.K = {0.0, 0.5, 1.0, 2.0};
        return c;
    }
    if (name == "example6") {
        c.r = "Re(w)+abs2(w)+Re(w)*abs2(z)+abs2(z)*abs2(w)+abs2(z)^2+abs2(z)^3";
        c.X = "abs2(z)";
        c.center = Point::from_reals(0, 0, 0, 0);
        c.radius = 0.3;
        c.shape = "polydisc";
        c.K = {0.0, 1.0, 10.0};
        c.L = {-1.0};
        return c;
    }
    return std::nullopt;
}

std::vector<std::string> builtin_names() { return {"halfspace", "ball", "example6"}; }

}  // namespace pshdef::domains
