#pragma once

#include <cstdint>

#include "pshdef/expr.hpp"

namespace pshdef::rnd {

/// Deterministic splitmix64 generator with portable double mapping; used for
/// every seeded suite so that identical seeds give identical runs on any
/// platform (std::uniform_real_distribution is implementation-defined).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    double uniform(double lo, double hi) {
        double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    int uniform_int(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

  private:
    std::uint64_t state_;
};

Point random_point(Rng& rng, double radius = 1.0);

/// Random real polynomial field: monomials in Re z, Im z, Re w, Im w of total
/// degree <= max_degree with coefficients in [-coeff_scale, coeff_scale].
expr::Field random_field(Rng& rng, int max_degree = 4, int min_terms = 3, int max_terms = 8,
                         double coeff_scale = 1.0);

/// Graph-style perturbation with no constant term and degree >= 2 monomials;
/// Im(w) + random_graph_field(...) is a defining function whose zero set
/// passes near the origin.
expr::Field random_graph_field(Rng& rng, double coeff_scale = 0.25);

}  // namespace pshdef::rnd
