#pragma once

#include <stdexcept>
#include <string>

namespace bonnetlab {

/// Base class for every error this library raises on bad input or bad
/// geometry. Programmer errors (basis misuse, shape mismatches) throw
/// std::logic_error instead and are not meant to be caught.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// DSL text could not be parsed. `offset` is the byte offset into the
/// input, `expected` a human-readable set of acceptable tokens.
struct ParseError : Error {
    std::size_t offset;
    std::string expected;
    ParseError(std::size_t off, const std::string& exp)
        : Error("parse error at byte " + std::to_string(off) + ": expected " + exp),
          offset(off), expected(exp) {}
};

/// An identifier is neither s, t nor a bound parameter.
struct UnboundName : Error {
    std::string name;
    explicit UnboundName(const std::string& n)
        : Error("unbound name '" + n + "'"), name(n) {}
};

/// Evaluation left the domain of a partial function (ln, sqrt, division).
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

struct GeometryError : Error {
    int i, j;
    GeometryError(const std::string& what, int i_, int j_)
        : Error(what + " at node (" + std::to_string(i_) + "," + std::to_string(j_) + ")"),
          i(i_), j(j_) {}
};

/// Induced metric not Lorentzian (EG - F^2 >= 0) at a grid node.
struct NotTimelike : GeometryError {
    NotTimelike(int i, int j) : GeometryError("NotTimelike", i, j) {}
};

/// Principal curvatures coincide at a grid node.
struct Umbilic : GeometryError {
    Umbilic(int i, int j) : GeometryError("Umbilic", i, j) {}
};

/// Shape operator has non-real eigenvalues (or principal directions fail
/// to split into one timelike and one spacelike) at a grid node.
struct ComplexPrincipal : GeometryError {
    ComplexPrincipal(int i, int j) : GeometryError("ComplexPrincipal", i, j) {}
};

/// Coframe matrix numerically singular at a grid node.
struct SingularCoframe : GeometryError {
    SingularCoframe(int i, int j) : GeometryError("SingularCoframe", i, j) {}
};

/// Gram-Schmidt hit a (near-)null intermediate vector.
struct DegenerateFrame : Error {
    DegenerateFrame() : Error("DegenerateFrame: near-null vector in orthonormalization") {}
};

/// No grid node satisfies |T| > 1 + eps_phi.
struct EmptyMask : Error {
    EmptyMask() : Error("EmptyMask: |T| <= 1 + eps_phi everywhere") {}
};

/// Deformation angle not defined on the full bundle grid.
struct MaskMismatch : Error {
    explicit MaskMismatch(const std::string& msg) : Error("MaskMismatch: " + msg) {}
};

/// Run configuration invalid.
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error("config error: " + msg) {}
};

} // namespace bonnetlab
