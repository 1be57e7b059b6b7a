#pragma once

#include "bonnetlab/grid.hpp"

namespace bonnetlab {

using GridScalar = Grid2D<double>;

enum class FormBasis {
    Coordinate, // coefficients of ds, dt
    Frame       // coefficients of omega^1, omega^2
};

/// 1-form on the parameter grid: per-node coefficient pair (a, b) meaning
/// a ds + b dt in the coordinate basis or a omega^1 + b omega^2 in the frame
/// basis. d and wedge act on the coordinate basis; the Hodge star acts on
/// the frame basis.
struct GridOneForm {
    FormBasis basis = FormBasis::Coordinate;
    GridScalar a, b;

    GridOneForm() = default;
    GridOneForm(const GridShape& shape, FormBasis bas)
        : basis(bas), a(shape), b(shape) {}

    const GridShape& shape() const { return a.shape(); }
};

/// 2-form: single coefficient w.r.t. ds^dt. The omega^1^omega^2 view is the
/// coefficient divided by the coframe area coefficient W.
struct GridTwoForm {
    GridScalar w;

    GridTwoForm() = default;
    explicit GridTwoForm(const GridShape& shape) : w(shape) {}

    const GridShape& shape() const { return w.shape(); }
};

/// Moving coframe (omega^1, omega^2) in the coordinate basis, plus the area
/// coefficient W = coefficient of omega^1 ^ omega^2 w.r.t. ds ^ dt.
struct Coframe {
    GridOneForm omega1, omega2; // both coordinate basis
    GridScalar det;             // W per node

    const GridShape& shape() const { return omega1.shape(); }
};

Coframe make_coframe(const GridOneForm& omega1, const GridOneForm& omega2);

/// Trivial coframe omega^1 = ds, omega^2 = dt (synthetic bundles, tests).
Coframe identity_coframe(const GridShape& shape);

/// Exterior derivative of a scalar: (D_s f) ds + (D_t f) dt with 2nd-order
/// central stencils in the interior and 2nd-order one-sided 3-point stencils
/// on the boundary.
GridOneForm d_scalar(const GridScalar& f);

/// Exterior derivative of a coordinate-basis 1-form: (D_s b - D_t a) ds^dt.
GridTwoForm d_oneform(const GridOneForm& theta);
GridTwoForm d_oneform(const GridOneForm& theta, const Coframe& cf);

/// Pointwise wedge, convention (theta^eta)(X,Y) = theta(X)eta(Y) - theta(Y)eta(X)
/// (no 1/2 factor), so (ds^dt)(d/ds, d/dt) = 1.
GridTwoForm wedge(const GridOneForm& theta, const GridOneForm& eta);
GridTwoForm wedge(const GridOneForm& theta, const GridOneForm& eta, const Coframe& cf);

/// Lorentzian Hodge star on the frame basis: coefficient swap,
/// star(a omega^1 + b omega^2) = b omega^1 + a omega^2; an exact involution.
GridOneForm hodge_star(const GridOneForm& theta);
GridOneForm hodge_star(const GridOneForm& theta, const Coframe& cf);

/// Change of basis. Exact per-node 2x2 solves; throws SingularCoframe when
/// |det| < 1e-12 * (coframe matrix scale) at some node.
GridOneForm to_frame(const GridOneForm& theta, const Coframe& cf);
GridOneForm to_coord(const GridOneForm& theta, const Coframe& cf);

/// Coefficient of the 2-form w.r.t. omega^1 ^ omega^2 (divide by W).
GridScalar frame_view(const GridTwoForm& w, const Coframe& cf);

double sup_abs(const GridScalar& g);
double sup_abs(const GridOneForm& f);

// Pointwise helpers used throughout the invariant assembly.
GridScalar gs_add(const GridScalar& x, const GridScalar& y);
GridScalar gs_sub(const GridScalar& x, const GridScalar& y);
GridScalar gs_mul(const GridScalar& x, const GridScalar& y);
GridScalar gs_div(const GridScalar& x, const GridScalar& y);
GridScalar gs_scale(const GridScalar& x, double c);
GridScalar gs_map(const GridScalar& x, double (*fn)(double));
GridOneForm form_lincomb(const GridScalar& ca, const GridOneForm& fa,
                         const GridScalar& cb, const GridOneForm& fb);
GridOneForm form_scale_add(double ca, const GridOneForm& fa, double cb, const GridOneForm& fb);

/// Frame-basis form from two scalar coefficient fields.
GridOneForm frame_form(const GridScalar& c1, const GridScalar& c2);

} // namespace bonnetlab
