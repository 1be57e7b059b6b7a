#include "bonnetlab/bonnet.hpp"

#include <cmath>
#include <limits>

namespace bonnetlab {

std::string to_string(BonnetClass c) {
    switch (c) {
        case BonnetClass::CMCFlatNormalBonnet: return "CMCFlatNormalBonnet";
        case BonnetClass::IntegrableBonnet: return "IntegrableBonnet";
        case BonnetClass::NotIntegrable: return "NotIntegrable";
        case BonnetClass::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

GammaSystem gamma_system(const InvariantBundle& b) {
    GammaSystem sys;
    sys.shape = b.shape;
    sys.coframe = b.coframe;
    sys.gamma1 = to_coord(b.gamma1, b.coframe);
    sys.gamma2 = to_coord(b.gamma2, b.coframe);
    sys.dH_norm = sup_abs(to_frame(d_scalar(b.frame.H), b.coframe));
    sys.beta_norm = std::max(sup_abs(b.lambda13), sup_abs(b.lambda23));
    sys.beta_exactly_zero = b.lambda_exactly_zero;
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < b.shape.ns; ++i)
        for (int j = 0; j < b.shape.nt; ++j) {
            const double H = b.frame.H(i, j);
            m = std::min(m, H * H - b.frame.K(i, j));
        }
    sys.HsqK_min = m;
    return sys;
}

GammaSystem synthetic_system(const GridShape& shape, const GridOneForm& gamma1,
                             const GridOneForm& gamma2) {
    if (gamma1.basis != FormBasis::Coordinate || gamma2.basis != FormBasis::Coordinate)
        throw std::logic_error("synthetic_system: gamma forms must be coordinate-basis");
    GammaSystem sys;
    sys.shape = shape;
    sys.coframe = identity_coframe(shape);
    sys.gamma1 = gamma1;
    sys.gamma2 = gamma2;
    sys.dH_norm = 0.0;
    sys.beta_norm = 0.0;
    sys.beta_exactly_zero = true;
    sys.HsqK_min = 0.0; // H = K = 0: the CMC clause never fires
    return sys;
}

double default_bonnet_tol(const InvariantBundle& bundle) {
    return std::max(10.0 * bundle.residuals.scale(), 1e-12);
}

BonnetReport bonnet_check(const GammaSystem& sys, double tol) {
    BonnetReport rep;
    rep.tol = tol;
    rep.dH_norm = sys.dH_norm;
    rep.beta_norm = sys.beta_norm;

    rep.R1 = d_oneform(sys.gamma1);
    const GridTwoForm dg2 = d_oneform(sys.gamma2);
    const GridTwoForm g1g2 = wedge(sys.gamma1, sys.gamma2);
    rep.R2 = GridTwoForm(sys.shape);
    for (std::size_t n = 0; n < rep.R2.w.data().size(); ++n)
        rep.R2.w.data()[n] = dg2.w.data()[n] - g1g2.w.data()[n];

    rep.normR1 = sup_abs(frame_view(rep.R1, sys.coframe));
    rep.normR2 = sup_abs(frame_view(rep.R2, sys.coframe));

    const double rmax = std::max(rep.normR1, rep.normR2);
    if (sys.dH_norm < tol && sys.beta_exactly_zero && sys.HsqK_min > 0.0)
        rep.classification = BonnetClass::CMCFlatNormalBonnet;
    else if (rmax < tol)
        rep.classification = BonnetClass::IntegrableBonnet;
    else if (rmax > 10.0 * tol)
        rep.classification = BonnetClass::NotIntegrable;
    else
        rep.classification = BonnetClass::Indeterminate;
    return rep;
}

// ---------------------------------------------------------------------------
// Total differential equation dT = T gamma1 + gamma2
// ---------------------------------------------------------------------------

namespace {

/// One classical RK4 step over a grid edge. cA/cB are (gamma1(w), gamma2(w))
/// at the edge endpoints, where w is the unit coordinate step actually taken
/// (sign folded in by the caller); the coefficients vary linearly along the
/// edge and h is the parameter length.
double rk4_edge(double T, double g1A, double g2A, double g1B, double g2B, double h) {
    const double g1M = 0.5 * (g1A + g1B);
    const double g2M = 0.5 * (g2A + g2B);
    const double k1 = T * g1A + g2A;
    const double k2 = (T + 0.5 * h * k1) * g1M + g2M;
    const double k3 = (T + 0.5 * h * k2) * g1M + g2M;
    const double k4 = (T + h * k3) * g1B + g2B;
    return T + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct EdgeField {
    const GridOneForm* g1;
    const GridOneForm* g2;
    double hs, ht;

    // Step from node (i,j) to an s-neighbour (dir = +1/-1).
    double step_s(double T, int i, int j, int dir) const {
        return rk4_edge(T, dir * g1->a(i, j), dir * g2->a(i, j),
                        dir * g1->a(i + dir, j), dir * g2->a(i + dir, j), hs);
    }
    double step_t(double T, int i, int j, int dir) const {
        return rk4_edge(T, dir * g1->b(i, j), dir * g2->b(i, j),
                        dir * g1->b(i, j + dir), dir * g2->b(i, j + dir), ht);
    }
};

} // namespace

DeformationScalar solve_T(const GammaSystem& sys, double T0) {
    const GridShape& sh = sys.shape;
    const EdgeField ef{&sys.gamma1, &sys.gamma2, sh.hs, sh.ht};

    DeformationScalar out;
    out.T = GridScalar(sh);
    GridScalar& T = out.T;

    const int ic = sh.ns / 2, jc = sh.nt / 2;
    T(ic, jc) = T0;
    for (int i = ic + 1; i < sh.ns; ++i) T(i, jc) = ef.step_s(T(i - 1, jc), i - 1, jc, +1);
    for (int i = ic - 1; i >= 0; --i) T(i, jc) = ef.step_s(T(i + 1, jc), i + 1, jc, -1);
    for (int i = 0; i < sh.ns; ++i) {
        for (int j = jc + 1; j < sh.nt; ++j) T(i, j) = ef.step_t(T(i, j - 1), i, j - 1, +1);
        for (int j = jc - 1; j >= 0; --j) T(i, j) = ef.step_t(T(i, j + 1), i, j + 1, -1);
    }

    // Path-independence defect: integrate around every plaquette loop.
    double defect = 0.0;
    for (int i = 0; i + 1 < sh.ns; ++i) {
        for (int j = 0; j + 1 < sh.nt; ++j) {
            double Tl = T(i, j);
            Tl = ef.step_s(Tl, i, j, +1);
            Tl = ef.step_t(Tl, i + 1, j, +1);
            Tl = ef.step_s(Tl, i + 1, j + 1, -1);
            Tl = ef.step_t(Tl, i, j + 1, -1);
            defect = std::max(defect, std::abs(Tl - T(i, j)));
        }
    }
    out.path_residual = defect;
    return out;
}

PhiField phi_field(const GridScalar& T, double eps_phi) {
    const GridShape& sh = T.shape();
    PhiField out;
    out.phi = GridScalar(sh);
    out.mask = Grid2D<std::uint8_t>(sh);
    int count = 0;
    for (int i = 0; i < sh.ns; ++i) {
        for (int j = 0; j < sh.nt; ++j) {
            const double Tv = T(i, j);
            if (std::abs(Tv) > 1.0 + eps_phi) {
                // arccoth(T) = (1/2) ln((T+1)/(T-1)); sign matches T.
                out.phi(i, j) = 0.5 * std::log((Tv + 1.0) / (Tv - 1.0));
                out.mask(i, j) = 1;
                ++count;
            }
        }
    }
    if (count == 0) throw EmptyMask();
    out.masked_count = count;
    out.full = count == static_cast<int>(sh.count());
    return out;
}

std::array<int, 4> mask_rectangle(const Grid2D<std::uint8_t>& mask) {
    const GridShape& sh = mask.shape();
    const int ic = sh.ns / 2, jc = sh.nt / 2;

    // Deterministic seed: masked node closest to the center (L1 distance,
    // ties by smaller i then j).
    int bi = -1, bj = -1, best = 1 << 30;
    for (int i = 0; i < sh.ns; ++i)
        for (int j = 0; j < sh.nt; ++j)
            if (mask(i, j)) {
                const int d = std::abs(i - ic) + std::abs(j - jc);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
    if (bi < 0) throw EmptyMask();

    int i0 = bi, i1 = bi, j0 = bj, j1 = bj;
    auto row_ok = [&](int i) {
        for (int j = j0; j <= j1; ++j)
            if (!mask(i, j)) return false;
        return true;
    };
    auto col_ok = [&](int j) {
        for (int i = i0; i <= i1; ++i)
            if (!mask(i, j)) return false;
        return true;
    };
    bool grew = true;
    while (grew) {
        grew = false;
        if (i0 > 0 && row_ok(i0 - 1)) { --i0; grew = true; }
        if (i1 + 1 < sh.ns && row_ok(i1 + 1)) { ++i1; grew = true; }
        if (j0 > 0 && col_ok(j0 - 1)) { --j0; grew = true; }
        if (j1 + 1 < sh.nt && col_ok(j1 + 1)) { ++j1; grew = true; }
    }
    return {i0, i1, j0, j1};
}

} // namespace bonnetlab
