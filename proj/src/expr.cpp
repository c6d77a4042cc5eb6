#include "pshdef/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace pshdef::expr {

namespace {

NodePtr make(NodeKind k, NodePtr l = nullptr, NodePtr r = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
}

NodePtr make_const(double v) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Constant;
    n->value = v;
    return n;
}

NodePtr make_pow(NodePtr base, int e) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Pow;
    n->exponent = e;
    n->lhs = std::move(base);
    return n;
}

class Parser {
  public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr run() {
        NodePtr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

  private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    bool accept_word(std::string_view w) {
        skip_ws();
        if (text_.substr(pos_, w.size()) == w) {
            pos_ += w.size();
            return true;
        }
        return false;
    }

    NodePtr parse_expr() {
        NodePtr e = parse_term();
        for (;;) {
            if (accept('+'))
                e = make(NodeKind::Add, e, parse_term());
            else if (accept('-'))
                e = make(NodeKind::Sub, e, parse_term());
            else
                return e;
        }
    }

    NodePtr parse_term() {
        NodePtr e = parse_factor();
        while (accept('*')) e = make(NodeKind::Mul, e, parse_factor());
        return e;
    }

    NodePtr parse_factor() {
        NodePtr b = parse_base();
        if (accept('^')) {
            int n = parse_int();
            if (n < 1) fail("exponent must be a positive integer");
            return make_pow(b, n);
        }
        return b;
    }

    int parse_int() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected integer");
        return std::stoi(std::string(text_.substr(start, pos_ - start)));
    }

    NodePtr parse_base() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '-') {
            ++pos_;
            return make(NodeKind::Neg, parse_base());
        }
        if (c == '(') {
            ++pos_;
            NodePtr e = parse_expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (accept_word("abs2")) return parse_call(NodeKind::Abs2);
        if (accept_word("conj")) return parse_call(NodeKind::Conj);
        if (accept_word("Re")) return parse_call(NodeKind::Re);
        if (accept_word("Im")) return parse_call(NodeKind::Im);
        if (c == 'z') {
            ++pos_;
            return make(NodeKind::VarZ);
        }
        if (c == 'w') {
            ++pos_;
            return make(NodeKind::VarW);
        }
        fail("expected a number, variable, function call, or '('");
    }

    NodePtr parse_call(NodeKind k) {
        expect('(');
        NodePtr arg = parse_expr();
        expect(')');
        return make(k, arg);
    }

    NodePtr parse_number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            } else {
                pos_ = mark;  // 'e' was not an exponent
            }
        }
        if (pos_ == start) fail("expected number");
        return make_const(std::stod(std::string(text_.substr(start, pos_ - start))));
    }
};

cplx eval_node(const Node* n, const Point& p) {
    switch (n->kind) {
        case NodeKind::Constant: return {n->value, 0.0};
        case NodeKind::VarZ: return p.z;
        case NodeKind::VarW: return p.w;
        case NodeKind::Conj: return std::conj(eval_node(n->lhs.get(), p));
        case NodeKind::Re: return {eval_node(n->lhs.get(), p).real(), 0.0};
        case NodeKind::Im: return {eval_node(n->lhs.get(), p).imag(), 0.0};
        case NodeKind::Abs2: return {std::norm(eval_node(n->lhs.get(), p)), 0.0};
        case NodeKind::Add: return eval_node(n->lhs.get(), p) + eval_node(n->rhs.get(), p);
        case NodeKind::Sub: return eval_node(n->lhs.get(), p) - eval_node(n->rhs.get(), p);
        case NodeKind::Mul: return eval_node(n->lhs.get(), p) * eval_node(n->rhs.get(), p);
        case NodeKind::Neg: return -eval_node(n->lhs.get(), p);
        case NodeKind::Pow: {
            cplx b = eval_node(n->lhs.get(), p);
            cplx acc{1.0, 0.0};
            for (int i = 0; i < n->exponent; ++i) acc *= b;
            return acc;
        }
    }
    return {};
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void print_node(const Node* n, std::ostringstream& out);

void print_child(const Node* n, std::ostringstream& out, bool needs_parens) {
    if (needs_parens) out << '(';
    print_node(n, out);
    if (needs_parens) out << ')';
}

int precedence(NodeKind k) {
    switch (k) {
        case NodeKind::Add:
        case NodeKind::Sub: return 1;
        case NodeKind::Mul: return 2;
        case NodeKind::Neg: return 3;
        case NodeKind::Pow: return 4;
        default: return 5;
    }
}

void print_node(const Node* n, std::ostringstream& out) {
    switch (n->kind) {
        case NodeKind::Constant: out << fmt_double(n->value); return;
        case NodeKind::VarZ: out << 'z'; return;
        case NodeKind::VarW: out << 'w'; return;
        case NodeKind::Conj:
            out << "conj(";
            print_node(n->lhs.get(), out);
            out << ')';
            return;
        case NodeKind::Re:
            out << "Re(";
            print_node(n->lhs.get(), out);
            out << ')';
            return;
        case NodeKind::Im:
            out << "Im(";
            print_node(n->lhs.get(), out);
            out << ')';
            return;
        case NodeKind::Abs2:
            out << "abs2(";
            print_node(n->lhs.get(), out);
            out << ')';
            return;
        case NodeKind::Add:
            print_child(n->lhs.get(), out, precedence(n->lhs->kind) < 1);
            out << '+';
            print_child(n->rhs.get(), out, precedence(n->rhs->kind) < 2);
            return;
        case NodeKind::Sub:
            print_child(n->lhs.get(), out, precedence(n->lhs->kind) < 1);
            out << '-';
            // Subtrahend needs parens when it is itself a sum/difference.
            print_child(n->rhs.get(), out, precedence(n->rhs->kind) <= 1);
            return;
        case NodeKind::Mul:
            print_child(n->lhs.get(), out, precedence(n->lhs->kind) < 2);
            out << '*';
            print_child(n->rhs.get(), out, precedence(n->rhs->kind) < 3);
            return;
        case NodeKind::Neg:
            out << '-';
            print_child(n->lhs.get(), out, precedence(n->lhs->kind) < 3);
            return;
        case NodeKind::Pow:
            print_child(n->lhs.get(), out, precedence(n->lhs->kind) < 5);
            out << '^' << n->exponent;
            return;
    }
}

}  // namespace

bool is_real_valued(const NodePtr& n) {
    switch (n->kind) {
        case NodeKind::Constant:
        case NodeKind::Re:
        case NodeKind::Im:
        case NodeKind::Abs2: return true;
        case NodeKind::VarZ:
        case NodeKind::VarW:
        case NodeKind::Conj: return false;
        case NodeKind::Add:
        case NodeKind::Sub:
        case NodeKind::Mul: return is_real_valued(n->lhs) && is_real_valued(n->rhs);
        case NodeKind::Neg:
        case NodeKind::Pow: return is_real_valued(n->lhs);
    }
    return false;
}

Field Field::parse(std::string_view text) {
    Parser p(text);
    NodePtr root = p.run();
    if (!is_real_valued(root))
        throw ParseError(0, "expression is not structurally real-valued at the root");
    return Field(root);
}

double Field::eval(const Point& p) const {
    double v = eval_node(root_.get(), p).real();
    if (!std::isfinite(v)) throw DomainError("field evaluation produced a non-finite value");
    return v;
}

std::string Field::str() const {
    std::ostringstream out;
    print_node(root_.get(), out);
    return out.str();
}

Field constant(double v) { return Field(make_const(v)); }
Field var_re_z() { return Field(make(NodeKind::Re, make(NodeKind::VarZ))); }
Field var_im_z() { return Field(make(NodeKind::Im, make(NodeKind::VarZ))); }
Field var_re_w() { return Field(make(NodeKind::Re, make(NodeKind::VarW))); }
Field var_im_w() { return Field(make(NodeKind::Im, make(NodeKind::VarW))); }
Field abs2_z() { return Field(make(NodeKind::Abs2, make(NodeKind::VarZ))); }
Field abs2_w() { return Field(make(NodeKind::Abs2, make(NodeKind::VarW))); }
Field operator+(const Field& a, const Field& b) { return Field(make(NodeKind::Add, a.root(), b.root())); }
Field operator-(const Field& a, const Field& b) { return Field(make(NodeKind::Sub, a.root(), b.root())); }
Field operator*(const Field& a, const Field& b) { return Field(make(NodeKind::Mul, a.root(), b.root())); }
Field operator-(const Field& a) { return Field(make(NodeKind::Neg, a.root())); }
Field pow(const Field& a, int n) { return Field(make_pow(a.root(), n)); }

// --- CExpr ---------------------------------------------------------------

namespace {

CNodePtr cmake(CKind k, CNodePtr l = nullptr, CNodePtr r = nullptr) {
    auto n = std::make_shared<CNode>();
    n->kind = k;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
}

CNodePtr cconst(cplx v) {
    auto n = std::make_shared<CNode>();
    n->kind = CKind::Const;
    n->value = v;
    return n;
}

bool is_zero(const CNodePtr& n) { return n->kind == CKind::Const && n->value == cplx{0.0, 0.0}; }
bool is_one(const CNodePtr& n) { return n->kind == CKind::Const && n->value == cplx{1.0, 0.0}; }

CNodePtr cadd(CNodePtr a, CNodePtr b) {
    if (is_zero(a)) return b;
    if (is_zero(b)) return a;
    if (a->kind == CKind::Const && b->kind == CKind::Const) return cconst(a->value + b->value);
    return cmake(CKind::Add, std::move(a), std::move(b));
}

CNodePtr csub(CNodePtr a, CNodePtr b) {
    if (is_zero(b)) return a;
    if (a->kind == CKind::Const && b->kind == CKind::Const) return cconst(a->value - b->value);
    if (is_zero(a)) return cmake(CKind::Neg, std::move(b));
    return cmake(CKind::Sub, std::move(a), std::move(b));
}

CNodePtr cmul(CNodePtr a, CNodePtr b) {
    if (is_zero(a) || is_zero(b)) return cconst({0.0, 0.0});
    if (is_one(a)) return b;
    if (is_one(b)) return a;
    if (a->kind == CKind::Const && b->kind == CKind::Const) return cconst(a->value * b->value);
    return cmake(CKind::Mul, std::move(a), std::move(b));
}

CNodePtr cneg(CNodePtr a) {
    if (a->kind == CKind::Const) return cconst(-a->value);
    return cmake(CKind::Neg, std::move(a));
}

CNodePtr cpow(CNodePtr a, int n) {
    if (n == 0) return cconst({1.0, 0.0});
    if (n == 1) return a;
    if (is_zero(a)) return cconst({0.0, 0.0});
    auto node = std::make_shared<CNode>();
    node->kind = CKind::Pow;
    node->exponent = n;
    node->lhs = std::move(a);
    return node;
}

CNodePtr cconj(CNodePtr a) {
    if (a->kind == CKind::Const) return cconst(std::conj(a->value));
    if (a->kind == CKind::Conj) return a->lhs;
    return cmake(CKind::Conj, std::move(a));
}

CNodePtr lower(const Node* n) {
    switch (n->kind) {
        case NodeKind::Constant: return cconst({n->value, 0.0});
        case NodeKind::VarZ: return cmake(CKind::Z);
        case NodeKind::VarW: return cmake(CKind::W);
        case NodeKind::Conj: return cconj(lower(n->lhs.get()));
        case NodeKind::Re: {
            CNodePtr e = lower(n->lhs.get());
            return cmul(cconst({0.5, 0.0}), cadd(e, cconj(e)));
        }
        case NodeKind::Im: {
            CNodePtr e = lower(n->lhs.get());
            return cmul(cconst({0.0, -0.5}), csub(e, cconj(e)));
        }
        case NodeKind::Abs2: {
            CNodePtr e = lower(n->lhs.get());
            return cmul(e, cconj(e));
        }
        case NodeKind::Add: return cadd(lower(n->lhs.get()), lower(n->rhs.get()));
        case NodeKind::Sub: return csub(lower(n->lhs.get()), lower(n->rhs.get()));
        case NodeKind::Mul: return cmul(lower(n->lhs.get()), lower(n->rhs.get()));
        case NodeKind::Neg: return cneg(lower(n->lhs.get()));
        case NodeKind::Pow: return cpow(lower(n->lhs.get()), n->exponent);
    }
    return nullptr;
}

// Derivative with respect to variable `which`:
// 0 = z, 1 = z_bar, 2 = w, 3 = w_bar.  conj swaps within each pair.
CNodePtr cderiv(const CNodePtr& n, int which) {
    switch (n->kind) {
        case CKind::Const: return cconst({0.0, 0.0});
        case CKind::Z: return cconst(which == 0 ? cplx{1.0, 0.0} : cplx{0.0, 0.0});
        case CKind::W: return cconst(which == 2 ? cplx{1.0, 0.0} : cplx{0.0, 0.0});
        case CKind::Conj: return cconj(cderiv(n->lhs, which ^ 1));
        case CKind::Add: return cadd(cderiv(n->lhs, which), cderiv(n->rhs, which));
        case CKind::Sub: return csub(cderiv(n->lhs, which), cderiv(n->rhs, which));
        case CKind::Mul:
            return cadd(cmul(cderiv(n->lhs, which), n->rhs), cmul(n->lhs, cderiv(n->rhs, which)));
        case CKind::Neg: return cneg(cderiv(n->lhs, which));
        case CKind::Pow:
            return cmul(cconst({static_cast<double>(n->exponent), 0.0}),
                        cmul(cpow(n->lhs, n->exponent - 1), cderiv(n->lhs, which)));
    }
    return nullptr;
}

cplx ceval(const CNode* n, const Point& p) {
    switch (n->kind) {
        case CKind::Const: return n->value;
        case CKind::Z: return p.z;
        case CKind::W: return p.w;
        case CKind::Conj: return std::conj(ceval(n->lhs.get(), p));
        case CKind::Add: return ceval(n->lhs.get(), p) + ceval(n->rhs.get(), p);
        case CKind::Sub: return ceval(n->lhs.get(), p) - ceval(n->rhs.get(), p);
        case CKind::Mul: return ceval(n->lhs.get(), p) * ceval(n->rhs.get(), p);
        case CKind::Neg: return -ceval(n->lhs.get(), p);
        case CKind::Pow: {
            cplx b = ceval(n->lhs.get(), p);
            cplx acc{1.0, 0.0};
            for (int i = 0; i < n->exponent; ++i) acc *= b;
            return acc;
        }
    }
    return {};
}

}  // namespace

CExpr CExpr::from_field(const Field& f) { return CExpr(lower(f.root().get())); }

cplx CExpr::eval(const Point& p) const { return ceval(root_.get(), p); }

CExpr wirtinger_derivative(const CExpr& e, int which) { return CExpr(cderiv(e.root(), which)); }

CExpr symbolic_wirtinger(const CExpr& e, const std::array<int, 4>& index) {
    CExpr cur = e;
    for (int which = 0; which < 4; ++which)
        for (int i = 0; i < index[static_cast<std::size_t>(which)]; ++i)
            cur = wirtinger_derivative(cur, which);
    return cur;
}

CExpr symbolic_wirtinger(const Field& f, const std::array<int, 4>& index) {
    return symbolic_wirtinger(CExpr::from_field(f), index);
}

}  // namespace pshdef::expr
