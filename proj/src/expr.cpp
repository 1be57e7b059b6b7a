#include "bonnetlab/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace bonnetlab {

// ---------------------------------------------------------------------------
// Jet arithmetic
// ---------------------------------------------------------------------------

namespace {

Jet jadd(const Jet& a, const Jet& b) {
    return {a.v + b.v, a.ds + b.ds, a.dt + b.dt, a.dss + b.dss, a.dst + b.dst, a.dtt + b.dtt};
}

Jet jsub(const Jet& a, const Jet& b) {
    return {a.v - b.v, a.ds - b.ds, a.dt - b.dt, a.dss - b.dss, a.dst - b.dst, a.dtt - b.dtt};
}

Jet jneg(const Jet& a) {
    return {-a.v, -a.ds, -a.dt, -a.dss, -a.dst, -a.dtt};
}

Jet jmul(const Jet& a, const Jet& b) {
    Jet w;
    w.v = a.v * b.v;
    w.ds = a.ds * b.v + a.v * b.ds;
    w.dt = a.dt * b.v + a.v * b.dt;
    w.dss = a.dss * b.v + 2.0 * a.ds * b.ds + a.v * b.dss;
    w.dst = a.dst * b.v + a.ds * b.dt + a.dt * b.ds + a.v * b.dst;
    w.dtt = a.dtt * b.v + 2.0 * a.dt * b.dt + a.v * b.dtt;
    return w;
}

/// Chain rule through a scalar function with derivatives f', f'' at a.v.
Jet jchain(const Jet& a, double f, double f1, double f2) {
    Jet w;
    w.v = f;
    w.ds = f1 * a.ds;
    w.dt = f1 * a.dt;
    w.dss = f2 * a.ds * a.ds + f1 * a.dss;
    w.dst = f2 * a.ds * a.dt + f1 * a.dst;
    w.dtt = f2 * a.dt * a.dt + f1 * a.dtt;
    return w;
}

std::string node_site(const ExprNode& n) {
    return " (byte " + std::to_string(n.offset) + ")";
}

Jet jinv(const Jet& a, const ExprNode& site) {
    if (a.v == 0.0) throw DomainError("division by zero" + node_site(site));
    const double iv = 1.0 / a.v;
    return jchain(a, iv, -iv * iv, 2.0 * iv * iv * iv);
}

Jet jpow(const Jet& a, int n, const ExprNode& site) {
    if (n == 0) return Jet::constant(1.0);
    if (n < 0) return jinv(jpow(a, -n, site), site);
    Jet w = a;
    for (int k = 1; k < n; ++k) w = jmul(w, a);
    return w;
}

} // namespace

Jet eval_node(const Expr& e, int idx, const std::map<std::string, double>& params,
              double s, double t) {
    const ExprNode& n = e.nodes[idx];
    switch (n.kind) {
        case ExprKind::Constant: return Jet::constant(n.value);
        case ExprKind::VarS: return Jet::var_s(s);
        case ExprKind::VarT: return Jet::var_t(t);
        case ExprKind::Param: {
            auto it = params.find(n.name);
            if (it == params.end()) throw UnboundName(n.name);
            return Jet::constant(it->second);
        }
        case ExprKind::Add: return jadd(eval_node(e, n.a, params, s, t), eval_node(e, n.b, params, s, t));
        case ExprKind::Sub: return jsub(eval_node(e, n.a, params, s, t), eval_node(e, n.b, params, s, t));
        case ExprKind::Mul: return jmul(eval_node(e, n.a, params, s, t), eval_node(e, n.b, params, s, t));
        case ExprKind::Div: {
            const Jet num = eval_node(e, n.a, params, s, t);
            const Jet den = eval_node(e, n.b, params, s, t);
            return jmul(num, jinv(den, n));
        }
        case ExprKind::Pow: return jpow(eval_node(e, n.a, params, s, t), n.exponent, n);
        case ExprKind::Neg: return jneg(eval_node(e, n.a, params, s, t));
        case ExprKind::Sin: {
            const Jet a = eval_node(e, n.a, params, s, t);
            return jchain(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v));
        }
        case ExprKind::Cos: {
            const Jet a = eval_node(e, n.a, params, s, t);
            return jchain(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v));
        }
        case ExprKind::Sinh: {
            const Jet a = eval_node(e, n.a, params, s, t);
            return jchain(a, std::sinh(a.v), std::cosh(a.v), std::sinh(a.v));
        }
        case ExprKind::Cosh: {
            const Jet a = eval_node(e, n.a, params, s, t);
            return jchain(a, std::cosh(a.v), std::sinh(a.v), std::cosh(a.v));
        }
        case ExprKind::Exp: {
            const Jet a = eval_node(e, n.a, params, s, t);
            const double ev = std::exp(a.v);
            return jchain(a, ev, ev, ev);
        }
        case ExprKind::Ln: {
            const Jet a = eval_node(e, n.a, params, s, t);
            if (a.v <= 0.0) throw DomainError("ln of non-positive value" + node_site(n));
            return jchain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v));
        }
        case ExprKind::Sqrt: {
            const Jet a = eval_node(e, n.a, params, s, t);
            if (a.v < 0.0) throw DomainError("sqrt of negative value" + node_site(n));
            if (a.v == 0.0) throw DomainError("sqrt at zero has unbounded derivatives" + node_site(n));
            const double r = std::sqrt(a.v);
            return jchain(a, r, 0.5 / r, -0.25 / (a.v * r));
        }
    }
    throw std::logic_error("eval_node: unreachable");
}

Jet eval_expr(const Expr& e, const std::map<std::string, double>& params, double s, double t) {
    return eval_node(e, e.root, params, s, t);
}

SurfaceJet eval_jet(const ImmersionExpr& im, const std::map<std::string, double>& params,
                    double s, double t) {
    Jet c[3];
    for (int k = 0; k < 3; ++k) c[k] = eval_expr(im.comp[k], params, s, t);
    SurfaceJet j;
    j.x = {c[0].v, c[1].v, c[2].v};
    j.xs = {c[0].ds, c[1].ds, c[2].ds};
    j.xt = {c[0].dt, c[1].dt, c[2].dt};
    j.xss = {c[0].dss, c[1].dss, c[2].dss};
    j.xst = {c[0].dst, c[1].dst, c[2].dst};
    j.xtt = {c[0].dtt, c[1].dtt, c[2].dtt};
    return j;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Parser {
    const std::string& src;
    std::size_t pos = 0;
    Expr* out = nullptr;

    explicit Parser(const std::string& text) : src(text) {}

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    bool eof() {
        skip_ws();
        return pos >= src.size();
    }

    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }

    bool accept(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c, const std::string& what) {
        skip_ws();
        if (!accept(c)) throw ParseError(pos, what);
    }

    int push(ExprNode n) {
        out->nodes.push_back(std::move(n));
        return static_cast<int>(out->nodes.size()) - 1;
    }

    // expr := term (('+'|'-') term)*
    int parse_expr() {
        int lhs = parse_term();
        for (;;) {
            skip_ws();
            const std::size_t at = pos;
            if (accept('+')) {
                int rhs = parse_term();
                lhs = push({ExprKind::Add, 0, "", 0, lhs, rhs, at});
            } else if (accept('-')) {
                int rhs = parse_term();
                lhs = push({ExprKind::Sub, 0, "", 0, lhs, rhs, at});
            } else {
                return lhs;
            }
        }
    }

    // term := power (('*'|'/') power)*
    int parse_term() {
        int lhs = parse_power();
        for (;;) {
            skip_ws();
            const std::size_t at = pos;
            if (accept('*')) {
                int rhs = parse_power();
                lhs = push({ExprKind::Mul, 0, "", 0, lhs, rhs, at});
            } else if (accept('/')) {
                int rhs = parse_power();
                lhs = push({ExprKind::Div, 0, "", 0, lhs, rhs, at});
            } else {
                return lhs;
            }
        }
    }

    // power := unary ('^' int)*     exponents are integer literals only
    int parse_power() {
        int base = parse_unary();
        for (;;) {
            skip_ws();
            const std::size_t at = pos;
            if (!accept('^')) return base;
            skip_ws();
            int exponent = parse_int_literal();
            base = push({ExprKind::Pow, 0, "", exponent, base, -1, at});
        }
    }

    // unary := '-' unary | atom     (unary minus binds tighter than '^')
    int parse_unary() {
        skip_ws();
        const std::size_t at = pos;
        if (accept('-')) {
            int a = parse_unary();
            return push({ExprKind::Neg, 0, "", 0, a, -1, at});
        }
        return parse_atom();
    }

    int parse_int_literal() {
        skip_ws();
        const std::size_t at = pos;
        bool negative = false;
        if (pos < src.size() && src[pos] == '-') {
            negative = true;
            ++pos;
        }
        if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
            throw ParseError(pos, "integer exponent");
        long val = 0;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
            val = val * 10 + (src[pos] - '0');
            if (val > 1000) throw ParseError(at, "integer exponent with |n| <= 1000");
            ++pos;
        }
        return static_cast<int>(negative ? -val : val);
    }

    int parse_atom() {
        skip_ws();
        const std::size_t at = pos;
        if (pos >= src.size()) throw ParseError(pos, "number, name or '('");
        const char c = src[pos];
        if (c == '(') {
            ++pos;
            int inner = parse_expr();
            expect(')', "')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name();
        throw ParseError(at, "number, name or '('");
    }

    int parse_number() {
        const std::size_t at = pos;
        std::size_t end = pos;
        while (end < src.size() &&
               (std::isdigit(static_cast<unsigned char>(src[end])) || src[end] == '.'))
            ++end;
        if (end < src.size() && (src[end] == 'e' || src[end] == 'E')) {
            std::size_t e = end + 1;
            if (e < src.size() && (src[e] == '+' || src[e] == '-')) ++e;
            if (e < src.size() && std::isdigit(static_cast<unsigned char>(src[e]))) {
                ++e;
                while (e < src.size() && std::isdigit(static_cast<unsigned char>(src[e]))) ++e;
                end = e;
            }
        }
        const std::string lit = src.substr(at, end - at);
        char* stop = nullptr;
        const double v = std::strtod(lit.c_str(), &stop);
        if (stop != lit.c_str() + lit.size()) throw ParseError(at, "numeric literal");
        pos = end;
        return push({ExprKind::Constant, v, "", 0, -1, -1, at});
    }

    int parse_name() {
        const std::size_t at = pos;
        std::size_t end = pos;
        while (end < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[end])) || src[end] == '_'))
            ++end;
        const std::string name = src.substr(at, end - at);
        pos = end;
        skip_ws();
        const bool call = pos < src.size() && src[pos] == '(';
        if (call) {
            ExprKind kind;
            if (name == "sin") kind = ExprKind::Sin;
            else if (name == "cos") kind = ExprKind::Cos;
            else if (name == "sinh") kind = ExprKind::Sinh;
            else if (name == "cosh") kind = ExprKind::Cosh;
            else if (name == "exp") kind = ExprKind::Exp;
            else if (name == "ln") kind = ExprKind::Ln;
            else if (name == "sqrt") kind = ExprKind::Sqrt;
            else throw ParseError(at, "known function name (sin cos sinh cosh exp ln sqrt)");
            ++pos; // '('
            int arg = parse_expr();
            expect(')', "')'");
            return push({kind, 0, "", 0, arg, -1, at});
        }
        if (name == "s") return push({ExprKind::VarS, 0, "", 0, -1, -1, at});
        if (name == "t") return push({ExprKind::VarT, 0, "", 0, -1, -1, at});
        return push({ExprKind::Param, 0, name, 0, -1, -1, at});
    }
};

void collect_params(const Expr& e, int idx, std::set<std::string>& out) {
    const ExprNode& n = e.nodes[idx];
    if (n.kind == ExprKind::Param) out.insert(n.name);
    if (n.a >= 0) collect_params(e, n.a, out);
    if (n.b >= 0) collect_params(e, n.b, out);
}

} // namespace

std::set<std::string> ImmersionExpr::parameter_names() const {
    std::set<std::string> out;
    for (const Expr& e : comp)
        if (e.root >= 0) collect_params(e, e.root, out);
    return out;
}

ImmersionExpr parse_immersion(const std::string& text) {
    Parser p(text);
    ImmersionExpr im;
    im.source = text;
    p.expect('(', "'('");
    for (int k = 0; k < 3; ++k) {
        p.out = &im.comp[k];
        im.comp[k].root = p.parse_expr();
        if (k < 2) p.expect(',', "','");
    }
    p.expect(')', "',' or ')'");
    if (!p.eof()) throw ParseError(p.pos, "end of input");
    return im;
}

// ---------------------------------------------------------------------------
// Printer and structural equality
// ---------------------------------------------------------------------------

namespace {

void print_node(const Expr& e, int idx, std::ostringstream& os) {
    const ExprNode& n = e.nodes[idx];
    switch (n.kind) {
        case ExprKind::Constant: {
            std::ostringstream num;
            num.precision(17);
            num << n.value;
            os << num.str();
            return;
        }
        case ExprKind::VarS: os << "s"; return;
        case ExprKind::VarT: os << "t"; return;
        case ExprKind::Param: os << n.name; return;
        case ExprKind::Add: os << "("; print_node(e, n.a, os); os << " + "; print_node(e, n.b, os); os << ")"; return;
        case ExprKind::Sub: os << "("; print_node(e, n.a, os); os << " - "; print_node(e, n.b, os); os << ")"; return;
        case ExprKind::Mul: os << "("; print_node(e, n.a, os); os << " * "; print_node(e, n.b, os); os << ")"; return;
        case ExprKind::Div: os << "("; print_node(e, n.a, os); os << " / "; print_node(e, n.b, os); os << ")"; return;
        case ExprKind::Pow: os << "("; print_node(e, n.a, os); os << "^" << n.exponent; os << ")"; return;
        case ExprKind::Neg: os << "(-"; print_node(e, n.a, os); os << ")"; return;
        case ExprKind::Sin: os << "sin("; print_node(e, n.a, os); os << ")"; return;
        case ExprKind::Cos: os << "cos("; print_node(e, n.a, os); os << ")"; return;
        case ExprKind::Sinh: os << "sinh("; print_node(e, n.a, os); os << ")"; return;
        case ExprKind::Cosh: os << "cosh("; print_node(e, n.a, os); os << ")"; return;
        case ExprKind::Exp: os << "exp("; print_node(e, n.a, os); os << ")"; return;
        case ExprKind::Ln: os << "ln("; print_node(e, n.a, os); os << ")"; return;
        case ExprKind::Sqrt: os << "sqrt("; print_node(e, n.a, os); os << ")"; return;
    }
}

bool equal_nodes(const Expr& x, int ix, const Expr& y, int iy) {
    const ExprNode& a = x.nodes[ix];
    const ExprNode& b = y.nodes[iy];
    if (a.kind != b.kind) return false;
    if (a.kind == ExprKind::Constant && a.value != b.value) return false;
    if (a.kind == ExprKind::Param && a.name != b.name) return false;
    if (a.kind == ExprKind::Pow && a.exponent != b.exponent) return false;
    if ((a.a >= 0) != (b.a >= 0) || (a.b >= 0) != (b.b >= 0)) return false;
    if (a.a >= 0 && !equal_nodes(x, a.a, y, b.a)) return false;
    if (a.b >= 0 && !equal_nodes(x, a.b, y, b.b)) return false;
    return true;
}

} // namespace

std::string print_expr(const Expr& e) {
    std::ostringstream os;
    print_node(e, e.root, os);
    return os.str();
}

std::string print_immersion(const ImmersionExpr& im) {
    std::ostringstream os;
    os << "(" << print_expr(im.comp[0]) << ", " << print_expr(im.comp[1]) << ", "
       << print_expr(im.comp[2]) << ")";
    return os.str();
}

bool equal_trees(const Expr& a, const Expr& b) {
    if ((a.root >= 0) != (b.root >= 0)) return false;
    if (a.root < 0) return true;
    return equal_nodes(a, a.root, b, b.root);
}

} // namespace bonnetlab
