// Acceptance suite: runs every acceptance criterion end to end and prints
// one PASS/FAIL line per criterion. Exit status is nonzero if any fails.

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "bonnetlab/bonnet.hpp"
#include "bonnetlab/deform.hpp"
#include "bonnetlab/pipeline.hpp"

using namespace bonnetlab;

namespace {

int g_failures = 0;

void report(int id, const char* label, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, label, detail.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

InvariantBundle cylinder_bundle(double r, int n) {
    SurfacePatch p = catalog_patch("cylinder");
    p.parameters["r"] = r;
    p.ns = p.nt = n;
    return analyze_patch(p, AmbientModel::minkowski());
}

GridShape unit_square(int n) {
    return {n, n, 0.0, 0.0, 1.0 / (n - 1), 1.0 / (n - 1)};
}

// --- 1: cylinder pipeline, closed-form values and classification ---------
void criterion1() {
    bool pass = true;
    std::string detail;
    for (double r : {1.0, 2.0}) {
        const InvariantBundle b = cylinder_bundle(r, 129);
        double ea = 0, ec = 0, eH = 0, eK = 0;
        for (int i = 0; i < 129; ++i)
            for (int j = 0; j < 129; ++j) {
                ea = std::max(ea, std::abs(b.frame.a(i, j)));
                ec = std::max(ec, std::abs(std::abs(b.frame.c(i, j)) - 1.0 / r));
                eH = std::max(eH, std::abs(std::abs(b.frame.H(i, j)) - 0.5 / r));
                eK = std::max(eK, std::abs(b.frame.K(i, j)));
            }
        const double emax = std::max(std::max(ea, ec), std::max(eH, eK));
        pass = pass && emax < 1e-8;
        const BonnetReport rep = bonnet_check(gamma_system(b), default_bonnet_tol(b));
        pass = pass && rep.classification == BonnetClass::CMCFlatNormalBonnet;
        detail += "r=" + fmt(r) + ": err=" + fmt(emax) + " class=" + to_string(rep.classification) +
                  (r == 1.0 ? "; " : "");
    }
    report(1, "cylinder pipeline (a, |c|, |H|, K, classification)", pass, detail);
}

// --- 2: identity residual suite decays at 2nd order ----------------------
void criterion2() {
    ResidualReport rep[2];
    const int res[2] = {65, 129};
    for (int k = 0; k < 2; ++k) {
        SurfacePatch p = catalog_patch("graph-quadratic");
        p.ns = p.nt = res[k];
        rep[k] = analyze_patch(p, AmbientModel::minkowski()).residuals;
    }
    struct Entry {
        const char* name;
        double ratio;
    };
    const Entry entries[] = {
        {"eq3", rep[0].eq3 / rep[1].eq3},    {"eq4", rep[0].eq4 / rep[1].eq4},
        {"eq5a", rep[0].eq5a / rep[1].eq5a}, {"eq5b", rep[0].eq5b / rep[1].eq5b},
        {"eq10", rep[0].eq10 / rep[1].eq10}, {"eq13", rep[0].eq13 / rep[1].eq13},
        {"eq20", rep[0].eq20 / rep[1].eq20},
    };
    bool pass = true;
    std::string detail;
    for (const Entry& e : entries) {
        pass = pass && e.ratio > 3.3 && e.ratio < 4.7;
        detail += std::string(e.name) + "=" + fmt(e.ratio) + " ";
    }
    report(2, "structure/Codazzi residual ratios in [3.3, 4.7] (graph-quadratic 65->129)",
           pass, detail);
}

// --- 3: CMC surface realizes u = v = 0 and T == T0 ------------------------
void criterion3() {
    double m[2], h2[2];
    const int res[2] = {65, 129};
    for (int k = 0; k < 2; ++k) {
        const InvariantBundle b = cylinder_bundle(1.0, res[k]);
        m[k] = std::max(sup_abs(b.u), sup_abs(b.v));
        h2[k] = b.shape.hs * b.shape.hs;
    }
    // C fitted over the two resolutions, plus an absolute backstop that keeps
    // the fit honest (for the homogeneous cylinder u, v are rounding-level).
    const double C = std::max(m[0] / h2[0], m[1] / h2[1]) * (1.0 + 1e-9) + 1e-300;
    bool pass = m[0] <= C * h2[0] && m[1] <= C * h2[1] && C < 1e-3;

    const InvariantBundle b = cylinder_bundle(1.0, 65);
    const GammaSystem sys = gamma_system(b);
    double tdev = 0.0, path = 0.0;
    for (double T0 : {2.0, -1.5}) {
        const DeformationScalar T = solve_T(sys, T0);
        for (double v : T.T.data()) tdev = std::max(tdev, std::abs(v - T0));
        path = std::max(path, T.path_residual);
    }
    pass = pass && tdev < 1e-10 && path < 1e-10;
    report(3, "CMC: max(|u|,|v|) < C h^2 and T == T0 with tiny path residual", pass,
           "maxUV=" + fmt(m[1]) + " C=" + fmt(C) + " Tdev=" + fmt(tdev) + " path=" + fmt(path));
}

// --- 4: integrability falsifier with loop-integral oracle -----------------
void criterion4() {
    const GridShape sh = unit_square(33);
    GridOneForm g1(sh, FormBasis::Coordinate), g2(sh, FormBasis::Coordinate);
    for (int i = 0; i < sh.ns; ++i)
        for (int j = 0; j < sh.nt; ++j) g2.a(i, j) = sh.t(j);
    const GammaSystem sys = synthetic_system(sh, g1, g2);
    const BonnetReport rep = bonnet_check(sys, 1e-6);
    bool pass = std::abs(rep.normR2 - 1.0) < 1e-8 && rep.normR1 < 1e-8;

    const DeformationScalar T = solve_T(sys, 0.0);
    // Green's-theorem estimate: |closed-loop integral of t ds| = cell area.
    const double estimate = sh.hs * sh.ht;
    pass = pass && std::abs(T.path_residual - estimate) <= 0.1 * estimate;
    report(4, "synthetic gamma2 = t ds: |R2| = 1 and path residual = cell area (10%)", pass,
           "normR2=" + fmt(rep.normR2) + " path=" + fmt(T.path_residual) +
           " est=" + fmt(estimate) + " class=" + to_string(rep.classification));
}

// --- 5: deformation round-trip and preservation ---------------------------
void criterion5() {
    const InvariantBundle b = cylinder_bundle(1.0, 129);

    // phi == 0 reproduces the immersion grid after seed alignment.
    const DeformedBundle d0 = deform_bundle(b, GridScalar(b.shape));
    const ReconstructedSurface r0 = reconstruct(d0, center_seed(d0));
    double dist = 0.0;
    for (int i = 0; i < 129; ++i)
        for (int j = 0; j < 129; ++j)
            dist = std::max(dist, euclid_norm(r0.x(i, j) - b.x(i, j)));
    bool pass = dist < 1e-5;

    // phi == 0.5 preserves I and the principal curvatures.
    auto run = [](int n) {
        const InvariantBundle bb = cylinder_bundle(1.0, n);
        GridScalar phi(bb.shape);
        for (double& v : phi.data()) v = 0.5;
        const DeformedBundle dd = deform_bundle(bb, phi);
        return reconstruct(dd, center_seed(dd));
    };
    const ReconstructedSurface r129 = run(129);
    const ReconstructedSurface r257 = run(257);
    pass = pass && r129.metric_error < 1e-4 && r129.curvature_error < 1e-3;
    const double mr = r129.metric_error / r257.metric_error;
    const double cr = r129.curvature_error / r257.curvature_error;
    pass = pass && mr > 3.0 && cr > 3.0;
    report(5, "reconstruction: phi=0 round-trip, phi=0.5 preservation, 2nd-order decay", pass,
           "roundTrip=" + fmt(dist) + " metric=" + fmt(r129.metric_error) +
           " curv=" + fmt(r129.curvature_error) + " ratios=" + fmt(mr) + "/" + fmt(cr));
}

// --- 6: exact pointwise identities on random fields ------------------------
void criterion6() {
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const GridShape sh = unit_square(17);

    double worst = 0.0;
    // star is an exact involution on random frame-basis forms
    GridOneForm theta(sh, FormBasis::Frame);
    for (double& v : theta.a.data()) v = dist(rng);
    for (double& v : theta.b.data()) v = dist(rng);
    const GridOneForm twice = hodge_star(hodge_star(theta));
    for (std::size_t k = 0; k < theta.a.data().size(); ++k) {
        worst = std::max(worst, std::abs(twice.a.data()[k] - theta.a.data()[k]));
        worst = std::max(worst, std::abs(twice.b.data()[k] - theta.b.data()[k]));
    }

    // star theta1 = theta2, star alpha1 = alpha2 from random (u, v, lambda)
    GridScalar u(sh), v(sh), l13(sh), l23(sh);
    for (double& x : u.data()) x = dist(rng);
    for (double& x : v.data()) x = dist(rng);
    for (double& x : l13.data()) x = dist(rng);
    for (double& x : l23.data()) x = dist(rng);
    const GammaForms gf = gamma_forms(u, v, l13, l23);
    const GridOneForm st = hodge_star(gf.theta1);
    const GridOneForm sa = hodge_star(gf.alpha1);
    for (std::size_t k = 0; k < st.a.data().size(); ++k) {
        worst = std::max(worst, std::abs(st.a.data()[k] - gf.theta2.a.data()[k]));
        worst = std::max(worst, std::abs(st.b.data()[k] - gf.theta2.b.data()[k]));
        worst = std::max(worst, std::abs(sa.a.data()[k] - gf.alpha2.a.data()[k]));
        worst = std::max(worst, std::abs(sa.b.data()[k] - gf.alpha2.b.data()[k]));
    }
    bool pass = worst == 0.0; // coefficient swaps and copies are bitwise

    // Gram preservation, e3-bar = e3, and the alpha-bar^2 cross-check on a
    // random angle field over a real bundle.
    const InvariantBundle b = cylinder_bundle(1.0, 17);
    GridScalar phi(b.shape);
    for (double& x : phi.data()) x = 1.5 * dist(rng);
    const DeformedBundle d = deform_bundle(b, phi);
    double e3dev = 0.0;
    for (int i = 0; i < 17; ++i)
        for (int j = 0; j < 17; ++j)
            e3dev = std::max(e3dev, euclid_norm(d.e3(i, j) - b.frame.e3(i, j)));
    pass = pass && e3dev == 0.0;
    pass = pass && d.checks.gram_deviation < 1e-12;
    pass = pass && d.checks.alpha2_crosscheck < 1e-12;
    report(6, "exact identities: star^2, star theta/alpha, Gram, e3, alpha-bar2", pass,
           "swap=" + fmt(worst) + " e3=" + fmt(e3dev) + " gram=" + fmt(d.checks.gram_deviation) +
           " a2x=" + fmt(d.checks.alpha2_crosscheck));
}

// --- 7: byte-identical reports --------------------------------------------
void criterion7() {
    const char* cfg_text = R"({"surface": "cylinder", "resolution": [33, 33],)"
                           R"( "deformations": [{"t0": 2.0}]})";
    const RunConfig cfg = load_config_text(cfg_text);
    bool pass = true;
    std::string detail;
    struct Cmd {
        const char* name;
        CommandResult (*fn)(const RunConfig&, const std::string&);
    };
    const Cmd cmds[] = {{"analyze", cmd_analyze}, {"check", cmd_check}, {"deform", cmd_deform}};
    for (const Cmd& c : cmds) {
        const CommandResult r1 = c.fn(cfg, "");
        const CommandResult r2 = c.fn(cfg, "");
        const bool ok = r1.exit_code == 0 && r2.exit_code == 0 && r1.report_json == r2.report_json;
        pass = pass && ok;
        detail += std::string(c.name) + (ok ? "=identical " : "=DIFFERS ");
    }
    report(7, "repeated CLI runs produce byte-identical reports", pass, detail);
}

} // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    if (g_failures) {
        std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("acceptance: all criteria passed\n");
    return 0;
}
