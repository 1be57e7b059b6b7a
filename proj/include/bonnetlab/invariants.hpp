#pragma once

#include <functional>

#include "bonnetlab/forms.hpp"
#include "bonnetlab/lorentz.hpp"
#include "bonnetlab/patch.hpp"

namespace bonnetlab {

/// Frame sample handed to a custom ambient curvature callback.
struct FramePoint {
    double s = 0.0, t = 0.0;
    LVec3 e1, e2, e3;
    double a = 0.0, c = 0.0;
};

/// Ambient curvature data: rho1 = g(R(e1,e2)e1,e3), rho2 = g(R(e1,e2)e2,e3),
/// sigma = g(R(e1,e2)e1,e2). Flat and constant-curvature ambients have
/// rho1 = rho2 = 0 identically; constant curvature contributes sigma = ctilde.
struct AmbientModel {
    enum class Kind { MinkowskiFlat, ConstantCurvature, Custom };
    Kind kind = Kind::MinkowskiFlat;
    double ctilde = 0.0;
    std::function<std::array<double, 3>(int, int, const FramePoint&)> custom;

    static AmbientModel minkowski() { return {}; }
    static AmbientModel constant_curvature(double c) {
        AmbientModel m;
        m.kind = Kind::ConstantCurvature;
        m.ctilde = c;
        return m;
    }
    static AmbientModel custom_model(std::function<std::array<double, 3>(int, int, const FramePoint&)> fn) {
        AmbientModel m;
        m.kind = Kind::Custom;
        m.custom = std::move(fn);
        return m;
    }

    std::array<double, 3> curvature(int i, int j, const FramePoint& p) const {
        switch (kind) {
            case Kind::MinkowskiFlat: return {0.0, 0.0, 0.0};
            case Kind::ConstantCurvature: return {0.0, 0.0, ctilde};
            case Kind::Custom: return custom(i, j, p);
        }
        return {0.0, 0.0, 0.0};
    }
};

/// Per-node orthonormal frame of principal directions (e1 timelike and
/// future-pointing, e2 spacelike, e3 = cross(e1, e2) the unit normal aligned
/// with cross(x_s, x_t)) plus the principal curvatures a (on e1) and c (on e2).
struct PrincipalFrame {
    Grid2D<LVec3> e1, e2, e3;
    GridScalar a, c;
    GridScalar H, K, J;

    const GridShape& shape() const { return a.shape(); }
};

/// Max-norm residuals of the structure/Codazzi identities, each in a
/// geometrically normalized view (frame-basis coefficients or the
/// omega^1 ^ omega^2 view), together with the grid spacings so convergence
/// order can be read off two-resolution runs.
struct ResidualReport {
    double eq3 = 0.0;   // structure-equation connection vs frame-derivative connection
    double eq4 = 0.0;   // Gauss, sup over nodes >= 2 rings from the boundary
    double eq4_boundary = 0.0; // Gauss, global sup (the outer rings decay at O(h) only)
    double eq5a = 0.0;  // first Codazzi
    double eq5b = 0.0;  // second Codazzi
    double eq10 = 0.0;  // 2dH = (a-c)(u w1 + v w2)
    double eq13 = 0.0;  // gradient form of eq10
    double eq20 = 0.0;  // d ln|a-c| = alpha1 - 2*star(connection + beta)
    double hs = 0.0, ht = 0.0;

    // Per-node residual magnitudes (eq5 is the max of the Codazzi pair).
    GridScalar eq3_field, eq4_field, eq5_field, eq10_field, eq13_field, eq20_field;

    double scale() const;
};

/// Every scalar and 1-form invariant of the moving frame on the grid.
/// The frame-defined forms (theta, alpha, beta, gamma) are stored in the
/// frame basis; the coframe and connection form also carry coordinate data.
struct InvariantBundle {
    GridShape shape;

    Grid2D<LVec3> x;            // immersion values
    GridScalar E, F, G;         // induced metric in the (s,t) chart
    PrincipalFrame frame;
    Coframe coframe;

    GridScalar h, k;            // omega_1^2 = h omega^1 + k omega^2
    GridOneForm omega12;        // frame basis (h, k)

    GridScalar rho1, rho2, sigma;
    GridScalar lambda13, lambda23;
    bool lambda_exactly_zero = false;
    GridOneForm beta, star_beta;

    GridScalar p, q, u, v;
    GridOneForm theta1, theta2, alpha1, alpha2, gamma1, gamma2;

    double codazzi_residual = 0.0;   // cross-coefficient mismatch of Eq. (7)
    double connection_mismatch = 0.0; // frame-derivative vs structure-equation connection
    ResidualReport residuals;
};

/// Principal frame from exact jets. Throws NotTimelike, Umbilic or
/// ComplexPrincipal with the offending node.
PrincipalFrame principal_frame(const Grid2D<SurfaceJet>& jets, double eps_umb_factor = 1e-6);

/// Coframe dual to (e1, e2): omega^1 = -<dx, e1>, omega^2 = <dx, e2>.
Coframe build_coframe(const PrincipalFrame& frame, const Grid2D<SurfaceJet>& jets);

struct ConnectionCoeffs {
    GridScalar h, k;
    GridOneForm omega12;       // frame basis
    double recheck_residual;   // frame-derivative route vs Eq. (3) solve
};

/// Solve the first structure equations per node for (h, k); the stored
/// residual compares against the independent frame-derivative estimate
/// omega_1^2(d_i) = <D_i e1, e2>.
ConnectionCoeffs connection_coeffs(const PrincipalFrame& frame, const Coframe& coframe);

struct AmbientLambdas {
    GridScalar rho1, rho2, sigma;
    GridScalar lambda13, lambda23;
    GridOneForm beta, star_beta;
    bool exactly_zero;
};

AmbientLambdas ambient_lambdas(const AmbientModel& ambient, const PrincipalFrame& frame);

struct CodazziCoeffs {
    GridScalar p, q, u, v;
    double residual; // mismatch of the Eq. (7) cross-coefficients
};

CodazziCoeffs codazzi_coeffs(const PrincipalFrame& frame, const Coframe& coframe,
                             const GridScalar& h, const GridScalar& k,
                             const AmbientLambdas& lambdas);

struct GammaForms {
    GridOneForm theta1, theta2, alpha1, alpha2, gamma1, gamma2; // frame basis
};

GammaForms gamma_forms(const GridScalar& u, const GridScalar& v,
                       const GridScalar& lambda13, const GridScalar& lambda23);

ResidualReport identity_suite(const InvariantBundle& bundle);

/// Full pipeline: jets -> frame -> coframe -> connection -> ambient ->
/// Codazzi -> gamma forms -> residual diagnostics.
InvariantBundle analyze_grid(const Grid2D<SurfaceJet>& jets, const AmbientModel& ambient,
                             double eps_umb_factor = 1e-6);
InvariantBundle analyze_patch(const SurfacePatch& patch, const AmbientModel& ambient,
                              double eps_umb_factor = 1e-6);

} // namespace bonnetlab
