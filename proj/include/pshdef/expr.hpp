#pragma once

#include <array>
#include <memory>
#include <string>
#include <string_view>

#include "pshdef/core.hpp"

namespace pshdef::expr {

enum class NodeKind {
    Constant,  // real literal
    VarZ,
    VarW,
    Conj,
    Re,
    Im,
    Abs2,
    Add,
    Sub,
    Mul,
    Pow,  // integer exponent >= 1
    Neg,
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    NodeKind kind;
    double value = 0.0;  // Constant
    int exponent = 0;    // Pow
    NodePtr lhs;
    NodePtr rhs;
};

/// Immutable AST of a real-valued function of (z, w).
///
/// Built either by parse() (which enforces the real-valued-root check) or by
/// the combinators below, which only combine already-real fields and so
/// preserve real-valuedness by construction.
class Field {
  public:
    Field() = default;
    explicit Field(NodePtr root) : root_(std::move(root)) {}

    /// Parse the DSL grammar:
    ///   expr   := term (('+'|'-') term)*
    ///   term   := factor ('*' factor)*
    ///   factor := base ('^' INT)?
    ///   base   := REAL | 'z' | 'w' | 'Re(' expr ')' | 'Im(' expr ')'
    ///           | 'abs2(' expr ')' | 'conj(' expr ')' | '(' expr ')' | '-' base
    /// Throws ParseError on syntax errors (with position) and when the root is
    /// not structurally real-valued.
    static Field parse(std::string_view text);

    double eval(const Point& p) const;

    /// Canonical text form; parse(str()) evaluates identically.
    std::string str() const;

    const NodePtr& root() const { return root_; }
    bool empty() const { return root_ == nullptr; }

  private:
    NodePtr root_;
};

// Combinators (inputs must be real-valued fields).
Field constant(double v);
Field var_re_z();  // Re(z)
Field var_im_z();  // Im(z)
Field var_re_w();  // Re(w)
Field var_im_w();  // Im(w)
Field abs2_z();
Field abs2_w();
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(const Field& a, const Field& b);
Field operator-(const Field& a);
Field pow(const Field& a, int n);

/// True when the node is structurally real-valued: constants and
/// Re/Im/abs2 roots combined with +, -, *, ^, neg.
bool is_real_valued(const NodePtr& n);

// --- Symbolic Wirtinger oracle ------------------------------------------
//
// A second, independent expression form over the variables z, z_bar, w,
// w_bar with complex constants.  Used as the reference for the jet engine:
// derivatives are taken symbolically and evaluated pointwise.

enum class CKind { Const, Z, W, Conj, Add, Sub, Mul, Pow, Neg };

struct CNode;
using CNodePtr = std::shared_ptr<const CNode>;

struct CNode {
    CKind kind;
    cplx value{0.0, 0.0};
    int exponent = 0;
    CNodePtr lhs;
    CNodePtr rhs;
};

class CExpr {
  public:
    CExpr() = default;
    explicit CExpr(CNodePtr root) : root_(std::move(root)) {}

    /// Lower a Field into the complex core: Re(e) -> (e + conj e)/2,
    /// Im(e) -> -i/2 (e - conj e), abs2(e) -> e * conj(e).
    static CExpr from_field(const Field& f);

    cplx eval(const Point& p) const;

    const CNodePtr& root() const { return root_; }

  private:
    CNodePtr root_;
};

/// One Wirtinger derivative: 0 = d/dz, 1 = d/dz_bar, 2 = d/dw, 3 = d/dw_bar.
CExpr wirtinger_derivative(const CExpr& e, int which);

/// Mixed symbolic derivative d^{a+b+c+d} f / dz^a dz_bar^b dw^c dw_bar^d.
CExpr symbolic_wirtinger(const Field& f, const std::array<int, 4>& index);
CExpr symbolic_wirtinger(const CExpr& e, const std::array<int, 4>& index);

}  // namespace pshdef::expr
