#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "pshdef/core.hpp"
#include "pshdef/expr.hpp"

namespace pshdef::jets {

/// Multi-index bookkeeping for truncated Taylor polynomials in the four real
/// coordinates (x1, y1, x2, y2).  Layouts are cached per order and shared.
class JetLayout {
  public:
    static const JetLayout& of(int order);

    int order() const { return order_; }
    int size() const { return static_cast<int>(indices_.size()); }
    const std::array<int, 4>& index(int i) const { return indices_[static_cast<std::size_t>(i)]; }
    int degree(int i) const { return degrees_[static_cast<std::size_t>(i)]; }

    /// Position of a multi-index, or -1 when its total degree exceeds the order.
    int position(const std::array<int, 4>& mi) const;

    /// Taylor coefficient -> partial derivative multiplier (product of factorials).
    double factorial_weight(int i) const { return weights_[static_cast<std::size_t>(i)]; }

  private:
    explicit JetLayout(int order);

    int order_;
    std::vector<std::array<int, 4>> indices_;
    std::vector<int> degrees_;
    std::vector<double> weights_;
    std::vector<int> lookup_;  // (order+1)^4 packed table
};

/// Truncated Taylor polynomial of a function of (x1, y1, x2, y2) about a
/// center point, with scalar coefficients S.  Arithmetic is exact truncation:
/// products keep the degree <= order part of the coefficient convolution.
template <class S>
class TaylorJet {
  public:
    TaylorJet() : layout_(&JetLayout::of(0)) { c_.setZero(1); }

    static TaylorJet zero(int order) {
        TaylorJet j;
        j.layout_ = &JetLayout::of(order);
        j.c_.setZero(j.layout_->size());
        return j;
    }

    static TaylorJet constant(int order, S v) {
        TaylorJet j = zero(order);
        j.c_[0] = v;
        return j;
    }

    /// Jet of the coordinate function x_axis (value v at the center).
    static TaylorJet variable(int order, int axis, S v) {
        TaylorJet j = zero(order);
        j.c_[0] = v;
        if (order >= 1) {
            std::array<int, 4> mi{0, 0, 0, 0};
            mi[static_cast<std::size_t>(axis)] = 1;
            j.c_[j.layout_->position(mi)] = S(1);
        }
        return j;
    }

    int order() const { return layout_->order(); }
    int size() const { return layout_->size(); }
    const JetLayout& layout() const { return *layout_; }

    S value() const { return c_[0]; }
    S coeff(int i) const { return c_[i]; }
    S& coeff(int i) { return c_[i]; }

    S coeff(const std::array<int, 4>& mi) const {
        int pos = layout_->position(mi);
        return pos >= 0 ? c_[pos] : S(0);
    }

    /// Partial derivative value at the center: coefficient times factorials.
    S partial(const std::array<int, 4>& mi) const {
        int pos = layout_->position(mi);
        return pos >= 0 ? S(layout_->factorial_weight(pos)) * c_[pos] : S(0);
    }

    TaylorJet& operator+=(const TaylorJet& o) {
        c_ += o.c_;
        return *this;
    }
    TaylorJet& operator-=(const TaylorJet& o) {
        c_ -= o.c_;
        return *this;
    }
    TaylorJet& operator*=(S s) {
        c_ *= s;
        return *this;
    }

    friend TaylorJet operator+(TaylorJet a, const TaylorJet& b) { return a += b; }
    friend TaylorJet operator-(TaylorJet a, const TaylorJet& b) { return a -= b; }
    friend TaylorJet operator-(TaylorJet a) {
        a.c_ = -a.c_;
        return a;
    }
    friend TaylorJet operator*(TaylorJet a, S s) { return a *= s; }
    friend TaylorJet operator*(S s, TaylorJet a) { return a *= s; }

    friend TaylorJet operator*(const TaylorJet& a, const TaylorJet& b) {
        const JetLayout& L = *a.layout_;
        TaylorJet out = zero(L.order());
        const int n = L.size();
        const int order = L.order();
        for (int i = 0; i < n; ++i) {
            if (a.c_[i] == S(0)) continue;
            const auto& mi = L.index(i);
            const int di = L.degree(i);
            for (int j = 0; j < n; ++j) {
                if (L.degree(j) + di > order) break;  // indices sorted by degree
                if (b.c_[j] == S(0)) continue;
                const auto& mj = L.index(j);
                std::array<int, 4> sum{mi[0] + mj[0], mi[1] + mj[1], mi[2] + mj[2], mi[3] + mj[3]};
                out.c_[L.position(sum)] += a.c_[i] * b.c_[j];
            }
        }
        return out;
    }

    TaylorJet pow(int e) const {
        TaylorJet acc = constant(order(), S(1));
        TaylorJet base = *this;
        for (int k = e; k > 0; k >>= 1) {
            if (k & 1) acc = acc * base;
            if (k > 1) base = base * base;
        }
        return acc;
    }

    /// Derivative with respect to one real coordinate; drops the order by one.
    TaylorJet diff(int axis) const {
        if (order() == 0) throw DomainError("jet order exceeded in diff");
        TaylorJet out = zero(order() - 1);
        const JetLayout& OL = out.layout();
        for (int i = 0; i < out.size(); ++i) {
            std::array<int, 4> mi = OL.index(i);
            ++mi[static_cast<std::size_t>(axis)];
            int src = layout_->position(mi);
            out.c_[i] = c_[src] * S(mi[static_cast<std::size_t>(axis)]);
        }
        return out;
    }

    TaylorJet truncated(int new_order) const {
        if (new_order >= order()) return *this;
        TaylorJet out = zero(new_order);
        for (int i = 0; i < out.size(); ++i) out.c_[i] = c_[i];  // shared prefix ordering
        return out;
    }

  private:
    const JetLayout* layout_;
    Eigen::Array<S, Eigen::Dynamic, 1> c_;
};

using Jet = TaylorJet<double>;
using CJet = TaylorJet<cplx>;

inline CJet conj(const CJet& j) {
    CJet out = j;
    for (int i = 0; i < out.size(); ++i) out.coeff(i) = std::conj(out.coeff(i));
    return out;
}

inline CJet real(const CJet& j) {
    CJet out = j;
    for (int i = 0; i < out.size(); ++i) out.coeff(i) = cplx{out.coeff(i).real(), 0.0};
    return out;
}

inline CJet to_complex(const Jet& j) {
    CJet out = CJet::zero(j.order());
    for (int i = 0; i < j.size(); ++i) out.coeff(i) = cplx{j.coeff(i), 0.0};
    return out;
}

/// Evaluate a field as a complex-coefficient jet at p.  Intermediate
/// subexpressions are complex; real-valued roots come out with exactly real
/// coefficients.
CJet cjet_of(const expr::Field& f, const Point& p, int order);

/// Jet of a real-valued field at p up to total order `order` (default 4).
/// Coefficients are the real partial derivatives divided by factorials.
Jet jet_of(const expr::Field& f, const Point& p, int order = 4);

/// Mixed Wirtinger derivative at the jet center:
/// d^{a+b+c+d} f / dz^a dz_bar^b dw^c dw_bar^d for index (a, b, c, d).
/// Throws when a+b+c+d exceeds the jet order.
cplx wirtinger(const Jet& j, const std::array<int, 4>& index);
cplx wirtinger(const CJet& j, const std::array<int, 4>& index);

/// The same derivative as a jet of the derivative *field*; the order drops by
/// the total order of the index.
CJet wirtinger_field(const CJet& j, const std::array<int, 4>& index);

}  // namespace pshdef::jets
