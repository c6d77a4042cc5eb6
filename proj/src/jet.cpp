#include "pshdef/jet.hpp"

#include <algorithm>
#include <mutex>

namespace pshdef::jets {

namespace {

constexpr int kMaxOrder = 16;

double binom(int n, int k) {
    double acc = 1.0;
    for (int i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
    return acc;
}

// i^e for e mod 4
cplx ipow(int e) {
    switch (((e % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

}  // namespace

JetLayout::JetLayout(int order) : order_(order) {
    for (int deg = 0; deg <= order; ++deg)
        for (int a = deg; a >= 0; --a)
            for (int b = deg - a; b >= 0; --b)
                for (int c = deg - a - b; c >= 0; --c) {
                    int d = deg - a - b - c;
                    indices_.push_back({a, b, c, d});
                    degrees_.push_back(deg);
                }
    weights_.resize(indices_.size());
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        double w = 1.0;
        for (int v : indices_[i])
            for (int k = 2; k <= v; ++k) w *= k;
        weights_[i] = w;
    }
    const int stride = order + 1;
    lookup_.assign(static_cast<std::size_t>(stride) * stride * stride * stride, -1);
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        const auto& mi = indices_[i];
        std::size_t packed = static_cast<std::size_t>(
            ((mi[0] * stride + mi[1]) * stride + mi[2]) * stride + mi[3]);
        lookup_[packed] = static_cast<int>(i);
    }
}

int JetLayout::position(const std::array<int, 4>& mi) const {
    if (mi[0] + mi[1] + mi[2] + mi[3] > order_) return -1;
    const int stride = order_ + 1;
    return lookup_[static_cast<std::size_t>(((mi[0] * stride + mi[1]) * stride + mi[2]) * stride +
                                            mi[3])];
}

const JetLayout& JetLayout::of(int order) {
    if (order < 0 || order > kMaxOrder) throw DomainError("jet order out of range");
    static std::mutex mu;
    static std::array<std::unique_ptr<JetLayout>, kMaxOrder + 1> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[static_cast<std::size_t>(order)];
    if (!slot) slot.reset(new JetLayout(order));
    return *slot;
}

namespace {

CJet eval_jet(const expr::Node* n, const Point& p, int order) {
    using expr::NodeKind;
    switch (n->kind) {
        case NodeKind::Constant: return CJet::constant(order, {n->value, 0.0});
        case NodeKind::VarZ: {
            // z = x1 + i y1
            CJet x = CJet::variable(order, 0, {p.x1(), 0.0});
            CJet y = CJet::variable(order, 1, {p.y1(), 0.0});
            return x + cplx{0.0, 1.0} * y;
        }
        case NodeKind::VarW: {
            CJet x = CJet::variable(order, 2, {p.x2(), 0.0});
            CJet y = CJet::variable(order, 3, {p.y2(), 0.0});
            return x + cplx{0.0, 1.0} * y;
        }
        case NodeKind::Conj: return conj(eval_jet(n->lhs.get(), p, order));
        case NodeKind::Re: {
            CJet e = eval_jet(n->lhs.get(), p, order);
            return cplx{0.5, 0.0} * (e + conj(e));
        }
        case NodeKind::Im: {
            CJet e = eval_jet(n->lhs.get(), p, order);
            return cplx{0.0, -0.5} * (e - conj(e));
        }
        case NodeKind::Abs2: {
            CJet e = eval_jet(n->lhs.get(), p, order);
            return e * conj(e);
        }
        case NodeKind::Add:
            return eval_jet(n->lhs.get(), p, order) + eval_jet(n->rhs.get(), p, order);
        case NodeKind::Sub:
            return eval_jet(n->lhs.get(), p, order) - eval_jet(n->rhs.get(), p, order);
        case NodeKind::Mul:
            return eval_jet(n->lhs.get(), p, order) * eval_jet(n->rhs.get(), p, order);
        case NodeKind::Neg: return -eval_jet(n->lhs.get(), p, order);
        case NodeKind::Pow: return eval_jet(n->lhs.get(), p, order).pow(n->exponent);
    }
    return CJet::zero(order);
}

template <class S>
cplx wirtinger_impl(const TaylorJet<S>& j, const std::array<int, 4>& index) {
    const auto [a, b, c, d] = index;
    if (a < 0 || b < 0 || c < 0 || d < 0) throw DomainError("negative derivative order");
    if (a + b + c + d > j.order()) throw DomainError("jet order exceeded in wirtinger");
    const double half = std::pow(0.5, a + b + c + d);
    cplx acc{0.0, 0.0};
    for (int j1 = 0; j1 <= a; ++j1)
        for (int j2 = 0; j2 <= b; ++j2)
            for (int j3 = 0; j3 <= c; ++j3)
                for (int j4 = 0; j4 <= d; ++j4) {
                    double coef = binom(a, j1) * binom(b, j2) * binom(c, j3) * binom(d, j4);
                    cplx phase = ipow(j2 + j4 - j1 - j3);
                    std::array<int, 4> mi{a + b - j1 - j2, j1 + j2, c + d - j3 - j4, j3 + j4};
                    acc += coef * phase * cplx(j.partial(mi));
                }
    return half * acc;
}

}  // namespace

CJet cjet_of(const expr::Field& f, const Point& p, int order) {
    return eval_jet(f.root().get(), p, order);
}

Jet jet_of(const expr::Field& f, const Point& p, int order) {
    CJet cj = cjet_of(f, p, order);
    Jet out = Jet::zero(order);
    double scale = 0.0;
    for (int i = 0; i < cj.size(); ++i) scale = std::max(scale, std::abs(cj.coeff(i).real()));
    for (int i = 0; i < cj.size(); ++i) {
        cplx c = cj.coeff(i);
        if (std::abs(c.imag()) > 1e-9 * (1.0 + scale))
            throw DomainError("jet of a non-real-valued field");
        out.coeff(i) = c.real();
    }
    return out;
}

cplx wirtinger(const Jet& j, const std::array<int, 4>& index) { return wirtinger_impl(j, index); }
cplx wirtinger(const CJet& j, const std::array<int, 4>& index) { return wirtinger_impl(j, index); }

CJet wirtinger_field(const CJet& j, const std::array<int, 4>& index) {
    const auto [a, b, c, d] = index;
    const int total = a + b + c + d;
    if (total > j.order()) throw DomainError("jet order exceeded in wirtinger_field");
    CJet out = CJet::zero(j.order() - total);
    const cplx half{0.5, 0.0};
    // Expand (dz)^a (dz_bar)^b (dw)^c (dw_bar)^d over the real axes.
    for (int j1 = 0; j1 <= a; ++j1)
        for (int j2 = 0; j2 <= b; ++j2)
            for (int j3 = 0; j3 <= c; ++j3)
                for (int j4 = 0; j4 <= d; ++j4) {
                    double coef = binom(a, j1) * binom(b, j2) * binom(c, j3) * binom(d, j4);
                    cplx phase = ipow(j2 + j4 - j1 - j3);
                    CJet term = j;
                    for (int k = 0; k < a + b - j1 - j2; ++k) term = term.diff(0);
                    for (int k = 0; k < j1 + j2; ++k) term = term.diff(1);
                    for (int k = 0; k < c + d - j3 - j4; ++k) term = term.diff(2);
                    for (int k = 0; k < j3 + j4; ++k) term = term.diff(3);
                    out += (coef * phase) * term;
                }
    for (int k = 0; k < total; ++k) out *= half;
    return out;
}

}  // namespace pshdef::jets
