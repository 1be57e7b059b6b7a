#pragma once

#include <cstdint>
#include <string>

#include "bonnetlab/invariants.hpp"

namespace bonnetlab {

enum class BonnetClass {
    CMCFlatNormalBonnet,
    IntegrableBonnet,
    NotIntegrable,
    Indeterminate
};

std::string to_string(BonnetClass c);

/// The data bonnet_check and solve_T actually consume. Built from an
/// InvariantBundle or synthesized directly in tests (gamma forms in the
/// coordinate basis over a trivial coframe).
struct GammaSystem {
    GridShape shape;
    Coframe coframe;
    GridOneForm gamma1, gamma2; // coordinate basis
    double dH_norm = 0.0;       // sup of frame-basis dH coefficients
    double beta_norm = 0.0;     // sup of |lambda| coefficients
    bool beta_exactly_zero = true;
    double HsqK_min = 0.0;      // min over nodes of H^2 - K
};

GammaSystem gamma_system(const InvariantBundle& bundle);
GammaSystem synthetic_system(const GridShape& shape, const GridOneForm& gamma1,
                             const GridOneForm& gamma2);

struct BonnetReport {
    GridTwoForm R1;       // d gamma1
    GridTwoForm R2;       // d gamma2 - gamma1 ^ gamma2
    double normR1 = 0.0;  // sup, omega^1 ^ omega^2 view
    double normR2 = 0.0;
    double dH_norm = 0.0;
    double beta_norm = 0.0;
    BonnetClass classification = BonnetClass::Indeterminate;
    double tol = 0.0;
};

/// Decision table:
///  (i)  dH ~ 0, beta exactly zero and H^2 > K pointwise -> CMCFlatNormalBonnet
///  (ii) both integrability residuals below tol          -> IntegrableBonnet
///  (iii) a residual above 10 tol                        -> NotIntegrable
///  (iv) otherwise                                       -> Indeterminate
BonnetReport bonnet_check(const GammaSystem& sys, double tol);

/// Default tolerance: ten times the identity-suite residual scale, floored
/// at 1e-12 so homogeneous surfaces (all residuals at rounding level) do not
/// flap.
double default_bonnet_tol(const InvariantBundle& bundle);

struct DeformationScalar {
    GridScalar T;
    double path_residual = 0.0; // max plaquette-loop mismatch
};

/// Integrate dT = T gamma1 + gamma2 from the center node outward (center ->
/// center row -> columns), one classical 4th-order step per grid edge with
/// linearly interpolated form coefficients. Always returns; path_residual
/// carries the integrability defect.
DeformationScalar solve_T(const GammaSystem& sys, double T0);

struct PhiField {
    GridScalar phi;
    Grid2D<std::uint8_t> mask;
    bool full = false;
    int masked_count = 0;
};

/// phi = arccoth(T) where |T| > 1 + eps_phi; throws EmptyMask if no node
/// qualifies.
PhiField phi_field(const GridScalar& T, double eps_phi = 1e-6);

/// Largest axis-aligned all-true sub-rectangle of the mask, grown greedily
/// from the masked node closest to the grid center. Returns {i0,i1,j0,j1}
/// (inclusive).
std::array<int, 4> mask_rectangle(const Grid2D<std::uint8_t>& mask);

} // namespace bonnetlab
