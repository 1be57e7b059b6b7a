#include <doctest.h>

#include <cmath>
#include <random>

#include "bonnetlab/deform.hpp"

using namespace bonnetlab;

namespace {

InvariantBundle cylinder_bundle(int n, double r = 1.0) {
    SurfacePatch p = catalog_patch("cylinder");
    p.parameters["r"] = r;
    p.ns = p.nt = n;
    return analyze_patch(p, AmbientModel::minkowski());
}

GridScalar constant_phi(const GridShape& sh, double value) {
    GridScalar g(sh);
    for (double& v : g.data()) v = value;
    return g;
}

std::mt19937 rng(4242);

} // namespace

TEST_CASE("phi = 0 deformation is the identity on every field") {
    const InvariantBundle b = cylinder_bundle(17);
    const DeformedBundle d = deform_bundle(b, GridScalar(b.shape));
    double dev = 0.0;
    for (int i = 0; i < 17; ++i)
        for (int j = 0; j < 17; ++j) {
            dev = std::max(dev, euclid_norm(d.e1(i, j) - b.frame.e1(i, j)));
            dev = std::max(dev, euclid_norm(d.e2(i, j) - b.frame.e2(i, j)));
            dev = std::max(dev, std::abs(d.coframe.omega1.a(i, j) - b.coframe.omega1.a(i, j)));
            dev = std::max(dev, std::abs(d.coframe.omega2.b(i, j) - b.coframe.omega2.b(i, j)));
            dev = std::max(dev, std::abs(d.ubar(i, j) - b.u(i, j)));
        }
    CHECK(dev == 0.0);
    CHECK(d.checks.gram_deviation < 1e-12);
}

TEST_CASE("e3 is carried over unchanged (exactly)") {
    const InvariantBundle b = cylinder_bundle(17);
    GridScalar phi(b.shape);
    std::uniform_real_distribution<double> dist(-0.8, 0.8);
    for (double& v : phi.data()) v = dist(rng);
    const DeformedBundle d = deform_bundle(b, phi);
    for (int i = 0; i < 17; ++i)
        for (int j = 0; j < 17; ++j) {
            CHECK(d.e3(i, j).x0 == b.frame.e3(i, j).x0);
            CHECK(d.e3(i, j).x1 == b.frame.e3(i, j).x1);
            CHECK(d.e3(i, j).x2 == b.frame.e3(i, j).x2);
        }
}

TEST_CASE("hyperbolic rotation preserves the Lorentz Gram matrix") {
    const InvariantBundle b = cylinder_bundle(17);
    GridScalar phi(b.shape);
    std::uniform_real_distribution<double> dist(-1.5, 1.5);
    for (double& v : phi.data()) v = dist(rng);
    const DeformedBundle d = deform_bundle(b, phi);
    CHECK(d.checks.gram_deviation < 1e-12);
    // spot-check the quadratic-form identity (omega-bar^1)^2 - (omega-bar^2)^2
    // = (omega^1)^2 - (omega^2)^2 on coordinate vectors
    for (int i = 0; i < 17; i += 3)
        for (int j = 0; j < 17; j += 3) {
            const double w1s = b.coframe.omega1.a(i, j), w2s = b.coframe.omega2.a(i, j);
            const double b1s = d.coframe.omega1.a(i, j), b2s = d.coframe.omega2.a(i, j);
            CHECK(b1s * b1s - b2s * b2s == doctest::Approx(w1s * w1s - w2s * w2s).epsilon(1e-9));
        }
}

TEST_CASE("constant phi: connection unchanged, cylinder stays trivial") {
    const InvariantBundle b = cylinder_bundle(33);
    const DeformedBundle d = deform_bundle(b, constant_phi(b.shape, 0.7));
    // d phi vanishes to rounding for constant phi, so omega12 is untouched
    const GridOneForm w12c = to_coord(b.omega12, b.coframe);
    double dev = 0.0;
    for (std::size_t k = 0; k < w12c.a.data().size(); ++k) {
        dev = std::max(dev, std::abs(d.omega12.a.data()[k] - w12c.a.data()[k]));
        dev = std::max(dev, std::abs(d.omega12.b.data()[k] - w12c.b.data()[k]));
    }
    CHECK(dev < 1e-12);
    CHECK(sup_abs(d.ubar) < 1e-10);
    CHECK(sup_abs(d.vbar) < 1e-10);
    CHECK(sup_abs(d.betabar) == 0.0);
}

TEST_CASE("alpha-bar^2 cross-check and barred-lambda consistency are exact") {
    SurfacePatch gq = catalog_patch("graph-quadratic");
    gq.ns = gq.nt = 33;
    const InvariantBundle b = analyze_patch(gq, AmbientModel::minkowski());
    GridScalar phi(b.shape);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& v : phi.data()) v = dist(rng);
    const DeformedBundle d = deform_bundle(b, phi);
    CHECK(d.checks.alpha2_crosscheck < 1e-12);
    CHECK(d.checks.lambda_beta_consistency < 1e-12);
}

TEST_CASE("deformation invariant (eq25) holds at the residual noise floor") {
    const InvariantBundle b = cylinder_bundle(33);
    const DeformedBundle d = deform_bundle(b, constant_phi(b.shape, 0.5));
    const double floor = std::max(1e-10, 100.0 * b.residuals.scale());
    CHECK(d.checks.eq25_residual < floor);
}

TEST_CASE("shape mismatch raises MaskMismatch") {
    const InvariantBundle b = cylinder_bundle(17);
    GridShape other = b.shape;
    other.ns = 9;
    CHECK_THROWS_AS(deform_bundle(b, GridScalar(other)), MaskMismatch);
}

TEST_CASE("phi = 0 reconstruction reproduces the immersion grid") {
    const InvariantBundle b = cylinder_bundle(129);
    const DeformedBundle d = deform_bundle(b, GridScalar(b.shape));
    const ReconstructedSurface rec = reconstruct(d, center_seed(d));
    double dist = 0.0;
    for (int i = 0; i < 129; ++i)
        for (int j = 0; j < 129; ++j)
            dist = std::max(dist, euclid_norm(rec.x(i, j) - b.x(i, j)));
    CHECK(dist < 1e-5);
    CHECK(rec.max_gram_drift < 1e-8);
}

TEST_CASE("cylinder phi = 0.5: metric and curvatures preserved through FD re-extraction") {
    const InvariantBundle b = cylinder_bundle(129);
    const DeformedBundle d = deform_bundle(b, constant_phi(b.shape, 0.5));
    const ReconstructedSurface rec = reconstruct(d, center_seed(d));
    CHECK(rec.metric_error < 1e-4);
    CHECK(rec.curvature_error < 1e-3);

    // reconstructed frames stay Lorentz-orthonormal after renormalization
    double gram = 0.0;
    for (int i = 0; i < 129; i += 16)
        for (int j = 0; j < 129; j += 16) {
            gram = std::max(gram, std::abs(inner(rec.e1(i, j), rec.e1(i, j)) + 1.0));
            gram = std::max(gram, std::abs(inner(rec.e2(i, j), rec.e2(i, j)) - 1.0));
            gram = std::max(gram, std::abs(inner(rec.e1(i, j), rec.e2(i, j))));
            gram = std::max(gram, std::abs(inner(rec.e2(i, j), rec.e3(i, j))));
        }
    CHECK(gram < 1e-8);
}

TEST_CASE("reconstruction errors decay at 2nd order or better") {
    double me[2], ce[2];
    const int res[2] = {65, 129};
    for (int k = 0; k < 2; ++k) {
        const InvariantBundle b = cylinder_bundle(res[k]);
        const DeformedBundle d = deform_bundle(b, constant_phi(b.shape, 0.5));
        const ReconstructedSurface rec = reconstruct(d, center_seed(d));
        me[k] = rec.metric_error;
        ce[k] = rec.curvature_error;
    }
    CHECK(me[0] / me[1] > 3.0);
    CHECK(ce[0] / ce[1] > 3.0);
}

TEST_CASE("a null seed leg raises DegenerateFrame") {
    const InvariantBundle b = cylinder_bundle(17);
    const DeformedBundle d = deform_bundle(b, GridScalar(b.shape));
    FrameSeed seed = center_seed(d);
    seed.e1 = {1, 1, 0};
    CHECK_THROWS_AS(reconstruct(d, seed), DegenerateFrame);
}

TEST_CASE("frame transport around plaquettes closes at 3rd order") {
    double defect[2];
    const int res[2] = {33, 65};
    for (int k = 0; k < 2; ++k) {
        const InvariantBundle b = cylinder_bundle(res[k]);
        const DeformedBundle d = deform_bundle(b, constant_phi(b.shape, 0.3));
        defect[k] = max_frame_loop_defect(d);
    }
    CHECK(defect[0] / defect[1] > 6.0); // h -> h/2 shrinks an O(h^3) defect ~8x
}

TEST_CASE("masked angle field: crop, deform and reconstruct the valid block") {
    const InvariantBundle b = cylinder_bundle(33);
    // Hand-crafted T straddling |T| = 1: valid only for i >= 8.
    GridScalar T(b.shape);
    for (int i = 0; i < 33; ++i)
        for (int j = 0; j < 33; ++j) T(i, j) = i >= 8 ? 2.0 : 0.5;
    const PhiField pf = phi_field(T);
    CHECK(!pf.full);
    const auto [i0, i1, j0, j1] = mask_rectangle(pf.mask);
    CHECK(i0 == 8);
    CHECK(i1 == 32);
    CHECK(j0 == 0);
    CHECK(j1 == 32);

    const InvariantBundle sub = crop_bundle(b, i0, i1, j0, j1);
    GridScalar phi(sub.shape);
    for (int i = 0; i < sub.shape.ns; ++i)
        for (int j = 0; j < sub.shape.nt; ++j) phi(i, j) = pf.phi(i0 + i, j0 + j);
    const DeformedBundle d = deform_bundle(sub, phi);
    const ReconstructedSurface rec = reconstruct(d, center_seed(d));
    CHECK(rec.metric_error < 1e-2);
    CHECK(rec.curvature_error < 1e-1);
}

TEST_CASE("crop_bundle restricts every field consistently") {
    const InvariantBundle b = cylinder_bundle(17);
    const InvariantBundle c = crop_bundle(b, 2, 10, 4, 12);
    CHECK(c.shape.ns == 9);
    CHECK(c.shape.nt == 9);
    CHECK(c.shape.s0 == doctest::Approx(b.shape.s(2)));
    CHECK(c.shape.t0 == doctest::Approx(b.shape.t(4)));
    CHECK(c.frame.a(0, 0) == b.frame.a(2, 4));
    CHECK(c.u(3, 3) == b.u(5, 7));
    CHECK(euclid_norm(c.x(1, 2) - b.x(3, 6)) == 0.0);
    // residuals recomputed on the sub-grid stay at rounding level
    CHECK(c.residuals.scale() < 1e-8);
}
