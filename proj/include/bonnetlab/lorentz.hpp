#pragma once

#include <array>
#include <cmath>

#include "bonnetlab/errors.hpp"

namespace bonnetlab {

/// Vector in the 3-dimensional Lorentzian ambient with signature (-,+,+);
/// the timelike coordinate comes first.
struct LVec3 {
    double x0 = 0.0, x1 = 0.0, x2 = 0.0;

    constexpr LVec3() = default;
    constexpr LVec3(double a, double b, double c) : x0(a), x1(b), x2(c) {}

    constexpr LVec3 operator+(const LVec3& o) const { return {x0 + o.x0, x1 + o.x1, x2 + o.x2}; }
    constexpr LVec3 operator-(const LVec3& o) const { return {x0 - o.x0, x1 - o.x1, x2 - o.x2}; }
    constexpr LVec3 operator-() const { return {-x0, -x1, -x2}; }
    constexpr LVec3 operator*(double s) const { return {x0 * s, x1 * s, x2 * s}; }
    LVec3& operator+=(const LVec3& o) { x0 += o.x0; x1 += o.x1; x2 += o.x2; return *this; }
};

constexpr LVec3 operator*(double s, const LVec3& v) { return v * s; }

enum class Causal { Timelike, Spacelike, Null };

/// Lorentzian inner product <u,v> = -u0 v0 + u1 v1 + u2 v2.
constexpr double inner(const LVec3& u, const LVec3& v) {
    return -u.x0 * v.x0 + u.x1 * v.x1 + u.x2 * v.x2;
}

/// Squared Euclidean length of the component triple (tolerance scale only).
constexpr double euclid_sq(const LVec3& u) {
    return u.x0 * u.x0 + u.x1 * u.x1 + u.x2 * u.x2;
}

inline double euclid_norm(const LVec3& u) { return std::sqrt(euclid_sq(u)); }

/// Lorentzian vector product, defined by <u x v, z> = det[u; v; z] for all z
/// (rows are component triples). Solving that identity for the components of
/// w = u x v against the (-,+,+) metric gives
///   w = (u2 v1 - u1 v2,  u2 v0 - u0 v2,  u0 v1 - u1 v0),
/// i.e. cross((1,0,0),(0,1,0)) = (0,0,1). See docs/conventions.md.
constexpr LVec3 cross(const LVec3& u, const LVec3& v) {
    return {u.x2 * v.x1 - u.x1 * v.x2,
            u.x2 * v.x0 - u.x0 * v.x2,
            u.x0 * v.x1 - u.x1 * v.x0};
}

/// Scale-aware tolerance separating null from timelike/spacelike.
inline double null_tolerance(const LVec3& u) {
    return 1e-10 * (1.0 + euclid_sq(u));
}

inline Causal causal_character(const LVec3& u) {
    const double q = inner(u, u);
    const double tau = null_tolerance(u);
    if (q < -tau) return Causal::Timelike;
    if (q > tau) return Causal::Spacelike;
    return Causal::Null;
}

/// Metric Gram-Schmidt in the order f1, f2, f3 for a near-orthonormal triple
/// with f1 near-timelike and f2, f3 near-spacelike. The result has Gram
/// matrix exactly diag(-1,1,1) up to rounding. Throws DegenerateFrame if an
/// intermediate vector is within null_tolerance of the light cone.
inline std::array<LVec3, 3> lorentz_orthonormalize(const LVec3& f1, const LVec3& f2, const LVec3& f3) {
    const double n1 = inner(f1, f1);
    if (std::abs(n1) < null_tolerance(f1) || n1 >= 0.0) throw DegenerateFrame();
    const LVec3 e1 = f1 * (1.0 / std::sqrt(-n1));

    // <e1,e1> = -1, so the e1-component of v is -<v,e1>.
    LVec3 u2 = f2 + inner(f2, e1) * e1;
    const double n2 = inner(u2, u2);
    if (std::abs(n2) < null_tolerance(u2) || n2 <= 0.0) throw DegenerateFrame();
    const LVec3 e2 = u2 * (1.0 / std::sqrt(n2));

    LVec3 u3 = f3 + inner(f3, e1) * e1 - inner(f3, e2) * e2;
    const double n3 = inner(u3, u3);
    if (std::abs(n3) < null_tolerance(u3) || n3 <= 0.0) throw DegenerateFrame();
    const LVec3 e3 = u3 * (1.0 / std::sqrt(n3));

    return {e1, e2, e3};
}

} // namespace bonnetlab
