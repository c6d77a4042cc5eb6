#include "pshdef/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "pshdef/domains.hpp"

namespace pshdef::config {

expr::Field DomainConfig::r_field() const {
    if (r.empty()) throw DomainError("config has no defining function r");
    return expr::Field::parse(r);
}

expr::Field DomainConfig::x_field() const {
    if (X.empty()) throw DomainError("config has no modification X");
    return expr::Field::parse(X);
}

certify::Region DomainConfig::region() const {
    certify::Region reg;
    reg.center = center;
    reg.radius = radius;
    reg.inner_radius = inner_radius;
    if (shape == "box")
        reg.shape = certify::Region::Shape::Box;
    else if (shape == "polydisc")
        reg.shape = certify::Region::Shape::Polydisc;
    else if (shape == "ball")
        reg.shape = certify::Region::Shape::Ball;
    else if (shape == "annulus")
        reg.shape = certify::Region::Shape::Annulus;
    else
        throw DomainError("unknown region shape: " + shape);
    return reg;
}

namespace {

struct Lexer {
    std::string_view text;
    std::size_t pos = 0;

    void skip() {
        for (;;) {
            while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
                ++pos;
            if (pos < text.size() && text[pos] == '#') {
                while (pos < text.size() && text[pos] != '\n') ++pos;
                continue;
            }
            return;
        }
    }

    bool eof() {
        skip();
        return pos >= text.size();
    }

    char peek() {
        skip();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) throw ParseError(pos, std::string("expected '") + c + "' in config");
    }

    std::string ident() {
        skip();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        if (pos == start) throw ParseError(pos, "expected identifier in config");
        return std::string(text.substr(start, pos - start));
    }

    double number() {
        skip();
        std::size_t start = pos;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
                text[pos] == 'e' || text[pos] == 'E' ||
                ((text[pos] == '+' || text[pos] == '-') && pos > start &&
                 (text[pos - 1] == 'e' || text[pos - 1] == 'E'))))
            ++pos;
        if (pos == start) throw ParseError(pos, "expected number in config");
        return std::stod(std::string(text.substr(start, pos - start)));
    }

    std::string quoted() {
        skip();
        expect('"');
        std::size_t start = pos;
        while (pos < text.size() && text[pos] != '"') ++pos;
        if (pos >= text.size()) throw ParseError(start, "unterminated string in config");
        std::string out(text.substr(start, pos - start));
        ++pos;
        return out;
    }

    std::vector<double> list() {
        std::vector<double> out;
        expect('[');
        if (!accept(']')) {
            out.push_back(number());
            while (accept(',')) out.push_back(number());
            expect(']');
        }
        return out;
    }

    Point tuple4() {
        expect('(');
        double a = number();
        expect(',');
        double b = number();
        expect(',');
        double c = number();
        expect(',');
        double d = number();
        expect(')');
        return Point::from_reals(a, b, c, d);
    }
};

void apply_tolerance(Tolerances& t, const std::string& key, double v, std::size_t pos) {
    if (key == "identity")
        t.identity = v;
    else if (key == "psd")
        t.psd = v;
    else if (key == "weak")
        t.weak = v;
    else if (key == "cert")
        t.cert = v;
    else if (key == "il")
        t.il = v;
    else if (key == "projection")
        t.projection = v;
    else
        throw ParseError(pos, "unknown tolerance: " + key);
}

}  // namespace

DomainConfig parse_config(const std::string& text) {
    Lexer lx{text};
    DomainConfig c;
    bool saw_r = false, saw_x = false, saw_k = false, saw_l = false, saw_center = false,
         saw_radius = false, saw_grid = false, saw_shape = false, saw_samples = false,
         saw_inner = false;

    while (!lx.eof()) {
        std::size_t at = lx.pos;
        std::string key = lx.ident();
        if (key == "tolerances") {
            lx.expect('{');
            while (!lx.accept('}')) {
                std::size_t kat = lx.pos;
                std::string tk = lx.ident();
                lx.expect('=');
                apply_tolerance(c.tolerances, tk, lx.number(), kat);
            }
            continue;
        }
        lx.expect('=');
        if (key == "name")
            c.name = lx.peek() == '"' ? lx.quoted() : lx.ident();
        else if (key == "r")
            c.r = lx.quoted(), saw_r = true;
        else if (key == "X")
            c.X = lx.quoted(), saw_x = true;
        else if (key == "K")
            c.K = lx.peek() == '[' ? lx.list() : std::vector<double>{lx.number()}, saw_k = true;
        else if (key == "L")
            c.L = lx.peek() == '[' ? lx.list() : std::vector<double>{lx.number()}, saw_l = true;
        else if (key == "center")
            c.center = lx.tuple4(), saw_center = true;
        else if (key == "radius")
            c.radius = lx.number(), saw_radius = true;
        else if (key == "grid_n")
            c.grid_n = static_cast<int>(lx.number()), saw_grid = true;
        else if (key == "shape")
            c.shape = lx.peek() == '"' ? lx.quoted() : lx.ident(), saw_shape = true;
        else if (key == "inner_radius")
            c.inner_radius = lx.number(), saw_inner = true;
        else if (key == "n_samples")
            c.n_samples = static_cast<int>(lx.number()), saw_samples = true;
        else
            throw ParseError(at, "unknown config key: " + key);
    }

    // Fill gaps from the registry when the name matches a built-in domain.
    if (auto base = domains::builtin(c.name)) {
        if (!saw_r) c.r = base->r;
        if (!saw_x) c.X = base->X;
        if (!saw_k) c.K = base->K;
        if (!saw_l) c.L = base->L;
        if (!saw_center) c.center = base->center;
        if (!saw_radius) c.radius = base->radius;
        if (!saw_grid) c.grid_n = base->grid_n;
        if (!saw_shape) c.shape = base->shape;
        if (!saw_inner) c.inner_radius = base->inner_radius;
        if (!saw_samples) c.n_samples = base->n_samples;
    }
    if (c.r.empty())
        throw DomainError("config needs r (or a built-in domain name: halfspace, ball, example6)");
    if (c.radius <= 0) throw DomainError("config radius must be positive");
    if (c.K.empty()) c.K = {0.0};
    return c;
}

DomainConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace pshdef::config
