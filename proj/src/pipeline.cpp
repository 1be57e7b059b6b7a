#include "bonnetlab/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <utility>
#include <vector>

#include "bonnetlab/bonnet.hpp"
#include "bonnetlab/deform.hpp"
#include "bonnetlab/report.hpp"

namespace bonnetlab {

namespace {

enum class Stage { Analyze, Check, Deform };

struct FieldStats {
    double min, max, mean_abs, max_abs;
};

FieldStats stats(const GridScalar& g) {
    FieldStats s{g.data()[0], g.data()[0], 0.0, 0.0};
    for (double v : g.data()) {
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
        s.mean_abs += std::abs(v);
        s.max_abs = std::max(s.max_abs, std::abs(v));
    }
    s.mean_abs /= static_cast<double>(g.data().size());
    return s;
}

void write_stats(JsonWriter& w, const char* name, const GridScalar& g) {
    const FieldStats s = stats(g);
    w.key(name).begin_object();
    w.key("min").value(s.min);
    w.key("max").value(s.max);
    w.key("meanAbs").value(s.mean_abs);
    w.key("maxAbs").value(s.max_abs);
    w.end_object();
}

bool wants(const RunConfig& cfg, const char* fmt) {
    return std::find(cfg.formats.begin(), cfg.formats.end(), fmt) != cfg.formats.end();
}

struct DeformOutput {
    DeformRequest request;
    double path_residual = 0.0;
    bool has_path_residual = false;
    double metric_err = 0.0;
    double curv_err = 0.0;
    bool curv_ok = true;
    std::string curv_note;
    int mask_count = 0;
    bool mask_full = true;
    GridScalar T;        // full grid (t0 requests)
    bool has_T = false;
    GridScalar phi;      // defined on the deformed sub-grid
    Grid2D<std::uint8_t> mask;
    Grid2D<LVec3> xbar;
    int index = 0;
};

DeformOutput run_deformation(const InvariantBundle& bundle, const GammaSystem& sys,
                             const DeformRequest& req, double eps_phi, int index) {
    DeformOutput out;
    out.request = req;
    out.index = index;

    const InvariantBundle* working = &bundle;
    InvariantBundle cropped;
    GridScalar phi;

    if (req.phi0) {
        phi = GridScalar(bundle.shape);
        for (double& v : phi.data()) v = *req.phi0;
        out.mask_count = static_cast<int>(bundle.shape.count());
        out.mask_full = true;
    } else {
        const DeformationScalar T = solve_T(sys, *req.t0);
        out.T = T.T;
        out.has_T = true;
        out.path_residual = T.path_residual;
        out.has_path_residual = true;
        const PhiField pf = phi_field(T.T, eps_phi); // throws EmptyMask
        out.mask = pf.mask;
        out.mask_count = pf.masked_count;
        out.mask_full = pf.full;
        if (pf.full) {
            phi = pf.phi;
        } else {
            const auto [i0, i1, j0, j1] = mask_rectangle(pf.mask);
            if (i1 - i0 + 1 < 5 || j1 - j0 + 1 < 5)
                throw MaskMismatch("valid |T|>1 region too small to deform (needs >= 5x5 nodes)");
            cropped = crop_bundle(bundle, i0, i1, j0, j1);
            GridScalar sub(cropped.shape);
            for (int i = 0; i < cropped.shape.ns; ++i)
                for (int j = 0; j < cropped.shape.nt; ++j)
                    sub(i, j) = pf.phi(i0 + i, j0 + j);
            phi = sub;
            working = &cropped;
        }
    }

    const DeformedBundle d = deform_bundle(*working, phi);
    const ReconstructedSurface rec = reconstruct(d, center_seed(d));
    out.phi = phi;
    out.xbar = rec.x;
    out.metric_err = rec.metric_error;
    out.curv_err = rec.curvature_error;
    out.curv_ok = rec.curvature_ok;
    out.curv_note = rec.curvature_note;
    return out;
}

std::string build_report(const RunConfig& cfg, const SurfacePatch& patch,
                         const InvariantBundle& b, Stage stage, const BonnetReport* bonnet,
                         const std::vector<DeformOutput>& deforms) {
    JsonWriter w;
    w.begin_object();

    w.key("meta").begin_object();
    w.key("tool").value(kToolName);
    w.key("version").value(kToolVersion);
    w.key("command").value(stage == Stage::Analyze ? "analyze"
                           : stage == Stage::Check ? "check" : "deform");
    w.key("config").raw(canonical_config(cfg));
    w.end_object();

    w.key("surface").begin_object();
    w.key("definition").value(cfg.surface);
    w.key("immersion").value(print_immersion(patch.immersion));
    w.key("parameters").begin_object();
    for (const auto& [k, v] : patch.parameters) w.key(k).value(v);
    w.end_object();
    w.key("domain").begin_object();
    w.key("s").begin_array().value(patch.s0).value(patch.s1).end_array();
    w.key("t").begin_array().value(patch.t0).value(patch.t1).end_array();
    w.end_object();
    w.key("resolution").begin_array().value(patch.ns).value(patch.nt).end_array();
    w.end_object();

    w.key("invariants").begin_object();
    write_stats(w, "a", b.frame.a);
    write_stats(w, "c", b.frame.c);
    write_stats(w, "H", b.frame.H);
    write_stats(w, "K", b.frame.K);
    write_stats(w, "J", b.frame.J);
    write_stats(w, "h", b.h);
    write_stats(w, "k", b.k);
    write_stats(w, "p", b.p);
    write_stats(w, "q", b.q);
    write_stats(w, "u", b.u);
    write_stats(w, "v", b.v);
    write_stats(w, "lambda13", b.lambda13);
    write_stats(w, "lambda23", b.lambda23);
    w.end_object();

    const ResidualReport& r = b.residuals;
    w.key("residuals").begin_object();
    w.key("eq3").value(r.eq3);
    w.key("eq4").value(r.eq4);
    w.key("eq4Boundary").value(r.eq4_boundary);
    w.key("eq5").value(std::max(r.eq5a, r.eq5b));
    w.key("eq5a").value(r.eq5a);
    w.key("eq5b").value(r.eq5b);
    w.key("eq10").value(r.eq10);
    w.key("eq13").value(r.eq13);
    w.key("eq20").value(r.eq20);
    w.key("codazziCross").value(b.codazzi_residual);
    w.key("gridSpacing").begin_object();
    w.key("hs").value(r.hs);
    w.key("ht").value(r.ht);
    w.end_object();
    w.end_object();

    if (bonnet) {
        w.key("bonnet").begin_object();
        w.key("classification").value(to_string(bonnet->classification));
        w.key("normR1").value(bonnet->normR1);
        w.key("normR2").value(bonnet->normR2);
        w.key("dHnorm").value(bonnet->dH_norm);
        w.key("betaNorm").value(bonnet->beta_norm);
        w.key("tol").value(bonnet->tol);
        w.end_object();
    }

    if (stage == Stage::Deform) {
        w.key("deformations").begin_array();
        for (const DeformOutput& d : deforms) {
            w.begin_object();
            w.key("t0");
            if (d.request.t0) w.value(*d.request.t0);
            else w.value_null();
            w.key("phi0");
            if (d.request.phi0) w.value(*d.request.phi0);
            else w.value_null();
            w.key("pathResidual");
            if (d.has_path_residual) w.value(d.path_residual);
            else w.value_null();
            w.key("metricErr").value(d.metric_err);
            w.key("curvErr");
            if (d.curv_ok) w.value(d.curv_err);
            else w.value_null();
            if (!d.curv_ok) w.key("curvNote").value(d.curv_note);
            w.key("maskCount").value(d.mask_count);
            w.key("maskFull").value_bool(d.mask_full);
            w.key("files").begin_object();
            const std::string stem = "deform_" + std::to_string(d.index);
            w.key("obj").value(stem + ".obj");
            w.key("tCsv");
            if (d.has_T) w.value(stem + "_T.csv");
            else w.value_null();
            w.key("phiCsv").value(stem + "_phi.csv");
            w.end_object();
            w.end_object();
        }
        w.end_array();
    }

    w.end_object();
    return w.str();
}

CommandResult run_stage(const RunConfig& cfg, const std::string& out_dir, Stage stage) {
    CommandResult res;
    try {
        const SurfacePatch patch = cfg.make_patch();
        const InvariantBundle bundle = analyze_patch(patch, cfg.ambient, cfg.eps_umb);

        BonnetReport bonnet;
        const bool with_bonnet = stage != Stage::Analyze;
        GammaSystem sys;
        if (with_bonnet) {
            sys = gamma_system(bundle);
            bonnet = bonnet_check(sys, cfg.tol ? *cfg.tol : default_bonnet_tol(bundle));
        }

        std::vector<DeformOutput> deforms;
        if (stage == Stage::Deform) {
            int idx = 0;
            for (const DeformRequest& req : cfg.deformations)
                deforms.push_back(run_deformation(bundle, sys, req, cfg.eps_phi, idx++));
        }

        res.report_json = build_report(cfg, patch, bundle, stage,
                                       with_bonnet ? &bonnet : nullptr, deforms);

        if (!out_dir.empty()) {
            // Collect everything first; a single writer emits at the end.
            std::vector<std::pair<std::string, std::string>> files;
            files.emplace_back("report.json", res.report_json);

            const std::vector<std::pair<const char*, const GridScalar*>> fields = {
                {"a", &bundle.frame.a}, {"c", &bundle.frame.c}, {"H", &bundle.frame.H},
                {"K", &bundle.frame.K}, {"J", &bundle.frame.J}, {"h", &bundle.h},
                {"k", &bundle.k}, {"p", &bundle.p}, {"q", &bundle.q}, {"u", &bundle.u},
                {"v", &bundle.v}, {"lambda13", &bundle.lambda13}, {"lambda23", &bundle.lambda23},
                {"residual_eq3", &bundle.residuals.eq3_field},
                {"residual_eq4", &bundle.residuals.eq4_field},
                {"residual_eq5", &bundle.residuals.eq5_field},
                {"residual_eq10", &bundle.residuals.eq10_field},
                {"residual_eq13", &bundle.residuals.eq13_field},
                {"residual_eq20", &bundle.residuals.eq20_field}};
            if (wants(cfg, "csv"))
                for (const auto& [name, g] : fields)
                    files.emplace_back(std::string(name) + ".csv", csv_field(*g));
            if (wants(cfg, "dat"))
                for (const auto& [name, g] : fields)
                    files.emplace_back(std::string(name) + ".dat", dat_field(*g));

            for (const DeformOutput& d : deforms) {
                const std::string stem = "deform_" + std::to_string(d.index);
                if (wants(cfg, "obj")) files.emplace_back(stem + ".obj", obj_mesh(d.xbar));
                if (wants(cfg, "csv")) {
                    if (d.has_T) files.emplace_back(stem + "_T.csv", csv_field(d.T));
                    files.emplace_back(stem + "_phi.csv", csv_field(d.phi));
                }
            }

            std::filesystem::create_directories(out_dir);
            for (const auto& [name, content] : files)
                write_file((std::filesystem::path(out_dir) / name).string(), content);
        }
    } catch (const ConfigError& e) {
        res.exit_code = kExitConfig;
        res.message = e.what();
    } catch (const ParseError& e) {
        res.exit_code = kExitConfig;
        res.message = e.what();
    } catch (const UnboundName& e) {
        res.exit_code = kExitConfig;
        res.message = e.what();
    } catch (const DomainError& e) {
        res.exit_code = kExitConfig;
        res.message = e.what();
    } catch (const GeometryError& e) {
        res.exit_code = kExitGeometry;
        res.message = e.what();
    } catch (const DegenerateFrame& e) {
        res.exit_code = kExitGeometry;
        res.message = e.what();
    } catch (const EmptyMask& e) {
        res.exit_code = kExitDeformation;
        res.message = e.what();
    } catch (const MaskMismatch& e) {
        res.exit_code = kExitDeformation;
        res.message = e.what();
    } catch (const std::exception& e) {
        res.exit_code = kExitInternal;
        res.message = e.what();
    }
    return res;
}

} // namespace

CommandResult cmd_analyze(const RunConfig& cfg, const std::string& out_dir) {
    return run_stage(cfg, out_dir, Stage::Analyze);
}

CommandResult cmd_check(const RunConfig& cfg, const std::string& out_dir) {
    return run_stage(cfg, out_dir, Stage::Check);
}

CommandResult cmd_deform(const RunConfig& cfg, const std::string& out_dir) {
    return run_stage(cfg, out_dir, Stage::Deform);
}

} // namespace bonnetlab
