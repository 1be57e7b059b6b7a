#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bonnetlab/errors.hpp"
#include "bonnetlab/lorentz.hpp"

namespace bonnetlab {

/// Second-order forward-mode jet in the two surface parameters (s, t):
/// value, gradient and Hessian of a scalar expression. The single dst slot
/// makes mixed-partial symmetry exact by construction.
struct Jet {
    double v = 0.0;
    double ds = 0.0, dt = 0.0;
    double dss = 0.0, dst = 0.0, dtt = 0.0;

    static Jet constant(double c) { return {c, 0, 0, 0, 0, 0}; }
    static Jet var_s(double s) { return {s, 1, 0, 0, 0, 0}; }
    static Jet var_t(double t) { return {t, 0, 1, 0, 0, 0}; }
};

enum class ExprKind {
    Constant, VarS, VarT, Param,
    Add, Sub, Mul, Div, Pow, Neg,
    Sin, Cos, Sinh, Cosh, Exp, Ln, Sqrt
};

struct ExprNode {
    ExprKind kind;
    double value = 0.0;        // Constant
    std::string name;          // Param
    int exponent = 0;          // Pow
    int a = -1, b = -1;        // children (indices into the arena)
    std::size_t offset = 0;    // byte offset in the source text
};

/// One scalar expression over s, t and named parameters, stored as an
/// immutable arena of nodes; `root` indexes the top node.
struct Expr {
    std::vector<ExprNode> nodes;
    int root = -1;
};

/// Immersion into the Lorentzian ambient: one expression per component.
struct ImmersionExpr {
    std::array<Expr, 3> comp;
    std::string source;

    /// All parameter names referenced anywhere (variables s, t excluded).
    std::set<std::string> parameter_names() const;
};

/// Parse a parenthesized triple of infix expressions, e.g.
/// "(t, r*cos(s), r*sin(s))". Grammar and precedence are documented in
/// docs/dsl.md. Throws ParseError with a byte offset on malformed input.
ImmersionExpr parse_immersion(const std::string& text);

/// Canonical printer; parse(print(e)) reproduces the identical tree.
std::string print_expr(const Expr& e);
std::string print_immersion(const ImmersionExpr& e);

bool equal_trees(const Expr& a, const Expr& b);

/// Evaluate one scalar expression as a second-order jet at (s, t).
/// Throws UnboundName for parameters missing from `params` and DomainError
/// (naming the offending node and its byte offset) outside function domains.
Jet eval_expr(const Expr& e, const std::map<std::string, double>& params, double s, double t);

/// Value, first and second partials of the immersion at (s, t).
struct SurfaceJet {
    LVec3 x, xs, xt, xss, xst, xtt;
};

SurfaceJet eval_jet(const ImmersionExpr& im, const std::map<std::string, double>& params,
                    double s, double t);

} // namespace bonnetlab
