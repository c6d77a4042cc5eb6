#include "pshdef/random.hpp"

namespace pshdef::rnd {

using expr::Field;

Point random_point(Rng& rng, double radius) {
    return Point::from_reals(rng.uniform(-radius, radius), rng.uniform(-radius, radius),
                             rng.uniform(-radius, radius), rng.uniform(-radius, radius));
}

Field random_field(Rng& rng, int max_degree, int min_terms, int max_terms, double coeff_scale) {
    using namespace expr;
    const Field vars[4] = {var_re_z(), var_im_z(), var_re_w(), var_im_w()};
    int n_terms = rng.uniform_int(min_terms, max_terms);
    Field acc = constant(rng.uniform(-coeff_scale, coeff_scale));
    for (int t = 0; t < n_terms; ++t) {
        Field term = constant(rng.uniform(-coeff_scale, coeff_scale));
        int degree_left = max_degree;
        int n_factors = rng.uniform_int(1, max_degree);
        for (int f = 0; f < n_factors && degree_left > 0; ++f) {
            int e = rng.uniform_int(1, degree_left);
            const Field& v = vars[rng.uniform_int(0, 3)];
            term = term * (e == 1 ? v : pow(v, e));
            degree_left -= e;
        }
        acc = acc + term;
    }
    return acc;
}

Field random_graph_field(Rng& rng, double coeff_scale) {
    using namespace expr;
    const Field vars[4] = {var_re_z(), var_im_z(), var_re_w(), var_im_w()};
    int n_terms = rng.uniform_int(3, 6);
    Field acc = constant(0.0);
    for (int t = 0; t < n_terms; ++t) {
        Field term = constant(rng.uniform(-coeff_scale, coeff_scale));
        int degree = rng.uniform_int(2, 4);
        int degree_left = degree;
        while (degree_left > 0) {
            int e = rng.uniform_int(1, degree_left);
            const Field& v = vars[rng.uniform_int(0, 3)];
            term = term * (e == 1 ? v : pow(v, e));
            degree_left -= e;
        }
        acc = acc + term;
    }
    return acc;
}

}  // namespace pshdef::rnd
