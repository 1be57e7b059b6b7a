#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bonnetlab/invariants.hpp"
#include "bonnetlab/patch.hpp"

namespace bonnetlab {

struct DeformRequest {
    std::optional<double> t0;   // solve dT = T g1 + g2 from this initial value
    std::optional<double> phi0; // or deform directly with a constant angle
};

/// One run configuration, loaded from a JSON document (schema in
/// docs/config.md). Catalog surfaces fill domain/resolution defaults;
/// explicit fields override them.
struct RunConfig {
    std::string surface;                 // catalog name or DSL text
    std::map<std::string, double> parameters;
    std::optional<std::array<double, 2>> domain_s, domain_t;
    std::optional<std::array<int, 2>> resolution;
    AmbientModel ambient;
    std::optional<double> tol;           // bonnet_check tolerance; default: auto
    double eps_umb = 1e-6;
    double eps_phi = 1e-6;
    std::vector<DeformRequest> deformations;
    std::vector<std::string> formats = {"json", "csv", "obj", "dat"};

    SurfacePatch make_patch() const;
};

RunConfig load_config_text(const std::string& json_text);
RunConfig load_config_file(const std::string& path);

/// Flag overrides applied after the file is parsed.
struct ConfigOverrides {
    std::optional<std::array<int, 2>> resolution;
    std::optional<double> tol;
    std::vector<double> t0_values;
};

void apply_overrides(RunConfig& cfg, const ConfigOverrides& ov);

/// Canonical JSON text of the resolved configuration (fixed key order);
/// embedded in report.json so identical configs yield identical reports.
std::string canonical_config(const RunConfig& cfg);

} // namespace bonnetlab
