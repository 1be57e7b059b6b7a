#include <doctest.h>

#include <cmath>

#include "bonnetlab/bonnet.hpp"

using namespace bonnetlab;

namespace {

GridShape unit_square(int n) {
    return {n, n, 0.0, 0.0, 1.0 / (n - 1), 1.0 / (n - 1)};
}

GammaSystem t_ds_system(int n) {
    const GridShape sh = unit_square(n);
    GridOneForm g1(sh, FormBasis::Coordinate), g2(sh, FormBasis::Coordinate);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g2.a(i, j) = sh.t(j);
    return synthetic_system(sh, g1, g2);
}

InvariantBundle cylinder_bundle(int n) {
    SurfacePatch p = catalog_patch("cylinder");
    p.ns = p.nt = n;
    return analyze_patch(p, AmbientModel::minkowski());
}

} // namespace

TEST_CASE("cylinder classifies as CMCFlatNormalBonnet") {
    const InvariantBundle b = cylinder_bundle(65);
    const GammaSystem sys = gamma_system(b);
    const BonnetReport rep = bonnet_check(sys, default_bonnet_tol(b));
    CHECK(rep.classification == BonnetClass::CMCFlatNormalBonnet);
    CHECK(rep.beta_norm == 0.0);
    CHECK(rep.dH_norm < rep.tol);
    CHECK(sys.HsqK_min > 0.0); // H^2 - K = J^2 = 1/4
    CHECK(sys.HsqK_min == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("zero gamma system satisfies the criterion trivially") {
    const GridShape sh = unit_square(17);
    const GammaSystem sys = synthetic_system(sh, GridOneForm(sh, FormBasis::Coordinate),
                                             GridOneForm(sh, FormBasis::Coordinate));
    const BonnetReport rep = bonnet_check(sys, 1e-10);
    CHECK(rep.normR1 == 0.0);
    CHECK(rep.normR2 == 0.0);
    // H = K = 0 in the synthetic system, so the CMC clause cannot fire.
    CHECK(rep.classification == BonnetClass::IntegrableBonnet);
}

TEST_CASE("gamma2 = t ds is a falsifier: R2 = -1, NotIntegrable") {
    const GammaSystem sys = t_ds_system(33);
    const BonnetReport rep = bonnet_check(sys, 1e-6);
    CHECK(rep.normR1 == 0.0);
    CHECK(rep.normR2 == doctest::Approx(1.0).epsilon(1e-12));
    // coefficient of ds^dt is -1 everywhere
    for (double v : rep.R2.w.data()) CHECK(v == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(rep.classification == BonnetClass::NotIntegrable);
}

TEST_CASE("tolerance semantics: tol = 0 never yields a Bonnet label") {
    const InvariantBundle b = cylinder_bundle(33);
    const BonnetReport rep = bonnet_check(gamma_system(b), 0.0);
    CHECK(rep.classification != BonnetClass::CMCFlatNormalBonnet);
    CHECK(rep.classification != BonnetClass::IntegrableBonnet);
}

TEST_CASE("solve_T: zero forms give the constant solution") {
    const GridShape sh = unit_square(17);
    const GammaSystem sys = synthetic_system(sh, GridOneForm(sh, FormBasis::Coordinate),
                                             GridOneForm(sh, FormBasis::Coordinate));
    const DeformationScalar T = solve_T(sys, 2.0);
    for (double v : T.T.data()) CHECK(v == 2.0);
    CHECK(T.path_residual == 0.0);
}

TEST_CASE("solve_T on the cylinder: T stays at T0 for any T0") {
    const InvariantBundle b = cylinder_bundle(33);
    const GammaSystem sys = gamma_system(b);
    for (double T0 : {-3.0, 0.0, 2.0}) {
        const DeformationScalar T = solve_T(sys, T0);
        double dev = 0.0;
        for (double v : T.T.data()) dev = std::max(dev, std::abs(v - T0));
        CHECK(dev < 1e-10);
        CHECK(T.path_residual < 1e-10);
    }
}

TEST_CASE("solve_T path residual matches the loop-integral oracle within 10%") {
    const GammaSystem sys = t_ds_system(33);
    const DeformationScalar T = solve_T(sys, 0.0);

    // Independent oracle: brute-force midpoint line integral of gamma2
    // around each plaquette (gamma1 = 0, so the defect is the loop integral).
    const GridShape& sh = sys.shape;
    double oracle = 0.0;
    for (int i = 0; i + 1 < sh.ns; ++i)
        for (int j = 0; j + 1 < sh.nt; ++j) {
            auto edge = [&](double fa, double fb, double step) {
                return 0.5 * (fa + fb) * step;
            };
            // bottom (s+), right (t+), top (s-), left (t-) with g2 = t ds
            const double loop = edge(sh.t(j), sh.t(j), sh.hs) + 0.0 +
                                edge(sh.t(j + 1), sh.t(j + 1), -sh.hs) + 0.0;
            oracle = std::max(oracle, std::abs(loop));
        }
    CHECK(oracle == doctest::Approx(sh.hs * sh.ht).epsilon(1e-12));
    CHECK(T.path_residual == doctest::Approx(oracle).epsilon(0.1));
}

TEST_CASE("solve_T is affine in T0") {
    // a non-integrable system still propagates affinely in T0
    const GridShape sh = unit_square(17);
    GridOneForm g1(sh, FormBasis::Coordinate), g2(sh, FormBasis::Coordinate);
    for (int i = 0; i < sh.ns; ++i)
        for (int j = 0; j < sh.nt; ++j) {
            g1.a(i, j) = 0.2 * std::cos(sh.s(i));
            g1.b(i, j) = 0.1 * sh.t(j);
            g2.a(i, j) = 0.3 * sh.t(j);
            g2.b(i, j) = -0.2 * std::sin(sh.s(i));
        }
    const GammaSystem sys = synthetic_system(sh, g1, g2);
    const DeformationScalar S0 = solve_T(sys, 0.0);
    const DeformationScalar S1 = solve_T(sys, 1.0);
    const DeformationScalar S = solve_T(sys, 3.7);
    double dev = 0.0;
    for (std::size_t k = 0; k < S.T.data().size(); ++k) {
        const double expect = S0.T.data()[k] + 3.7 * (S1.T.data()[k] - S0.T.data()[k]);
        dev = std::max(dev, std::abs(S.T.data()[k] - expect));
    }
    CHECK(dev < 1e-8);
}

TEST_CASE("integrable synthetic system reproduces its analytic solution") {
    // gamma1 = dF closed, gamma2 = dThat - That gamma1: That solves exactly.
    double err[2], path[2];
    const int res[2] = {33, 65};
    for (int k = 0; k < 2; ++k) {
        const int n = res[k];
        const GridShape sh = unit_square(n);
        GridOneForm g1(sh, FormBasis::Coordinate), g2(sh, FormBasis::Coordinate);
        GridScalar that(sh);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double s = sh.s(i), t = sh.t(j);
                const double Fs = 0.2 * std::cos(s) * t, Ft = 0.2 * std::sin(s);
                const double Th = 2.0 + 0.5 * std::sin(s) * std::cos(t);
                that(i, j) = Th;
                g1.a(i, j) = Fs;
                g1.b(i, j) = Ft;
                g2.a(i, j) = 0.5 * std::cos(s) * std::cos(t) - Th * Fs;
                g2.b(i, j) = -0.5 * std::sin(s) * std::sin(t) - Th * Ft;
            }
        const GammaSystem sys = synthetic_system(sh, g1, g2);
        const BonnetReport rep = bonnet_check(sys, 1e-3);
        CHECK(rep.classification == BonnetClass::IntegrableBonnet);
        const DeformationScalar T = solve_T(sys, that(n / 2, n / 2));
        double e = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) e = std::max(e, std::abs(T.T(i, j) - that(i, j)));
        err[k] = e;
        path[k] = T.path_residual;
    }
    CHECK(err[0] / err[1] > 3.3);   // 2nd-order solution error
    CHECK(path[0] / path[1] > 3.5); // path residual decays at >= 2nd order
}

TEST_CASE("phi_field: arccoth values, mask and odd symmetry") {
    const GridShape sh = unit_square(9);
    GridScalar T(sh);
    for (double& v : T.data()) v = 2.0;
    const PhiField pf = phi_field(T);
    CHECK(pf.full);
    for (double v : pf.phi.data()) CHECK(v == doctest::Approx(0.5493061443340548).epsilon(1e-12));
    // coth(phi) reproduces T
    for (double v : pf.phi.data())
        CHECK(1.0 / std::tanh(v) == doctest::Approx(2.0).epsilon(1e-10));

    GridScalar Tneg(sh);
    for (double& v : Tneg.data()) v = -2.0;
    const PhiField pn = phi_field(Tneg);
    for (double v : pn.phi.data()) CHECK(v == doctest::Approx(-0.5493061443340548).epsilon(1e-12));

    GridScalar Thalf(sh);
    for (double& v : Thalf.data()) v = 0.5;
    CHECK_THROWS_AS(phi_field(Thalf), EmptyMask);

    // varying field straddling |T| = 1: coth(phi) reproduces T on the mask
    GridScalar Tv(sh);
    for (int i = 0; i < sh.ns; ++i)
        for (int j = 0; j < sh.nt; ++j) Tv(i, j) = 1.5 * std::sin(3.0 * sh.s(i) + sh.t(j));
    const PhiField pv = phi_field(Tv);
    CHECK(!pv.full);
    CHECK(pv.masked_count > 0);
    for (int i = 0; i < sh.ns; ++i)
        for (int j = 0; j < sh.nt; ++j)
            if (pv.mask(i, j))
                CHECK(1.0 / std::tanh(pv.phi(i, j)) ==
                      doctest::Approx(Tv(i, j)).epsilon(1e-10));
}

TEST_CASE("mask_rectangle grows the largest usable block around the center") {
    const GridShape sh = unit_square(9);
    Grid2D<std::uint8_t> mask(sh);
    for (int i = 1; i < 8; ++i)
        for (int j = 2; j < 9; ++j) mask(i, j) = 1;
    const auto [i0, i1, j0, j1] = mask_rectangle(mask);
    CHECK(i0 == 1);
    CHECK(i1 == 7);
    CHECK(j0 == 2);
    CHECK(j1 == 8);
}

TEST_CASE("constant-curvature ambient keeps the CMC classification") {
    SurfacePatch p = catalog_patch("cylinder");
    p.ns = p.nt = 33;
    const InvariantBundle b = analyze_patch(p, AmbientModel::constant_curvature(0.2));
    CHECK(b.lambda_exactly_zero);
    CHECK(sup_abs(b.beta) == 0.0);
    // the flat-chart jets cannot satisfy the curved Gauss equation; the
    // residual honestly reports sigma (a documented approximation scope)
    CHECK(b.residuals.eq4 == doctest::Approx(0.2).epsilon(1e-8));
    const BonnetReport rep = bonnet_check(gamma_system(b), default_bonnet_tol(b));
    CHECK(rep.classification == BonnetClass::CMCFlatNormalBonnet);
}

TEST_CASE("classification is invariant under the e3 flip") {
    SurfacePatch flipped;
    flipped.immersion = parse_immersion("(t, cos(s), -sin(s))");
    flipped.s0 = 0;
    flipped.s1 = 6.283185307179586;
    flipped.t0 = -1;
    flipped.t1 = 1;
    flipped.ns = flipped.nt = 33;
    const InvariantBundle f = analyze_patch(flipped, AmbientModel::minkowski());
    const BonnetReport rep = bonnet_check(gamma_system(f), default_bonnet_tol(f));
    CHECK(rep.classification == BonnetClass::CMCFlatNormalBonnet);
}
