#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pshdef/config.hpp"

namespace pshdef::domains {

/// Built-in domains: "halfspace", "ball", and "example6" (the worked
/// example Re(w)+|w|^2+Re(w)|z|^2+|z|^2|w|^2+|z|^4+|z|^6 < 0).
std::optional<config::DomainConfig> builtin(const std::string& name);
std::vector<std::string> builtin_names();

}  // namespace pshdef::domains
