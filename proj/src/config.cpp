#include "bonnetlab/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bonnetlab/report.hpp"

namespace bonnetlab {

using nlohmann::json;

SurfacePatch RunConfig::make_patch() const {
    SurfacePatch p;
    std::string trimmed = surface;
    const auto b = trimmed.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) throw ConfigError("surface is empty");
    trimmed = trimmed.substr(b);

    if (trimmed[0] == '(') {
        p.immersion = parse_immersion(surface);
    } else {
        p = catalog_patch(trimmed);
    }
    for (const auto& [name, value] : parameters) p.parameters[name] = value;
    if (domain_s) {
        p.s0 = (*domain_s)[0];
        p.s1 = (*domain_s)[1];
    }
    if (domain_t) {
        p.t0 = (*domain_t)[0];
        p.t1 = (*domain_t)[1];
    }
    if (resolution) {
        p.ns = (*resolution)[0];
        p.nt = (*resolution)[1];
    }
    if (trimmed[0] == '(' && (!domain_s || !domain_t))
        throw ConfigError("DSL surfaces need an explicit domain");
    p.validate();
    return p;
}

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

double num(const json& v, const std::string& where) {
    if (!v.is_number()) throw ConfigError(where + " must be a number");
    return v.get<double>();
}

} // namespace

RunConfig load_config_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("top level must be an object");
    check_keys(root, {"surface", "parameters", "domain", "resolution", "ambient",
                      "tolerances", "deformations", "output"},
               "config");

    RunConfig cfg;
    if (!root.contains("surface") || !root["surface"].is_string())
        throw ConfigError("'surface' (string) is required");
    cfg.surface = root["surface"].get<std::string>();

    if (root.contains("parameters")) {
        if (!root["parameters"].is_object()) throw ConfigError("'parameters' must be an object");
        for (auto it = root["parameters"].begin(); it != root["parameters"].end(); ++it)
            cfg.parameters[it.key()] = num(it.value(), "parameter '" + it.key() + "'");
    }

    if (root.contains("domain")) {
        const json& d = root["domain"];
        if (!d.is_object()) throw ConfigError("'domain' must be an object with keys s and t");
        check_keys(d, {"s", "t"}, "domain");
        auto range = [&](const char* axis) -> std::array<double, 2> {
            const json& r = d.at(axis);
            if (!r.is_array() || r.size() != 2)
                throw ConfigError(std::string("domain.") + axis + " must be [lo, hi]");
            return {num(r[0], "domain"), num(r[1], "domain")};
        };
        if (d.contains("s")) cfg.domain_s = range("s");
        if (d.contains("t")) cfg.domain_t = range("t");
    }

    if (root.contains("resolution")) {
        const json& r = root["resolution"];
        if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !r[1].is_number_integer())
            throw ConfigError("'resolution' must be [Ns, Nt] integers");
        cfg.resolution = {{r[0].get<int>(), r[1].get<int>()}};
    }

    if (root.contains("ambient")) {
        const json& a = root["ambient"];
        if (a.is_string()) {
            const std::string s = a.get<std::string>();
            if (s != "minkowski") throw ConfigError("ambient string must be \"minkowski\"");
            cfg.ambient = AmbientModel::minkowski();
        } else if (a.is_object()) {
            check_keys(a, {"constantCurvature"}, "ambient");
            if (!a.contains("constantCurvature"))
                throw ConfigError("ambient object needs 'constantCurvature'");
            cfg.ambient = AmbientModel::constant_curvature(num(a["constantCurvature"], "ambient"));
        } else {
            throw ConfigError("'ambient' must be \"minkowski\" or {\"constantCurvature\": value}");
        }
    }

    if (root.contains("tolerances")) {
        const json& t = root["tolerances"];
        if (!t.is_object()) throw ConfigError("'tolerances' must be an object");
        check_keys(t, {"tol", "epsUmb", "epsPhi"}, "tolerances");
        if (t.contains("tol")) {
            if (t["tol"].is_string()) {
                if (t["tol"].get<std::string>() != "auto")
                    throw ConfigError("tolerances.tol must be a number or \"auto\"");
            } else {
                const double v = num(t["tol"], "tolerances.tol");
                if (v < 0.0) throw ConfigError("tolerances.tol must be >= 0");
                cfg.tol = v;
            }
        }
        if (t.contains("epsUmb")) {
            cfg.eps_umb = num(t["epsUmb"], "tolerances.epsUmb");
            if (cfg.eps_umb <= 0.0) throw ConfigError("tolerances.epsUmb must be > 0");
        }
        if (t.contains("epsPhi")) {
            cfg.eps_phi = num(t["epsPhi"], "tolerances.epsPhi");
            if (cfg.eps_phi <= 0.0) throw ConfigError("tolerances.epsPhi must be > 0");
        }
    }

    if (root.contains("deformations")) {
        const json& ds = root["deformations"];
        if (!ds.is_array()) throw ConfigError("'deformations' must be an array");
        for (const json& d : ds) {
            if (!d.is_object()) throw ConfigError("deformation entries must be objects");
            check_keys(d, {"t0", "phi0"}, "deformations[]");
            DeformRequest req;
            if (d.contains("t0")) req.t0 = num(d["t0"], "deformations[].t0");
            if (d.contains("phi0")) req.phi0 = num(d["phi0"], "deformations[].phi0");
            if (req.t0.has_value() == req.phi0.has_value())
                throw ConfigError("each deformation needs exactly one of t0, phi0");
            cfg.deformations.push_back(req);
        }
    }

    if (root.contains("output")) {
        const json& o = root["output"];
        if (!o.is_object()) throw ConfigError("'output' must be an object");
        check_keys(o, {"formats"}, "output");
        if (o.contains("formats")) {
            if (!o["formats"].is_array()) throw ConfigError("output.formats must be an array");
            cfg.formats.clear();
            for (const json& f : o["formats"]) {
                if (!f.is_string()) throw ConfigError("output.formats entries must be strings");
                const std::string s = f.get<std::string>();
                if (s != "json" && s != "csv" && s != "obj" && s != "dat")
                    throw ConfigError("unknown output format '" + s + "'");
                cfg.formats.push_back(s);
            }
        }
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return load_config_text(ss.str());
}

void apply_overrides(RunConfig& cfg, const ConfigOverrides& ov) {
    if (ov.resolution) cfg.resolution = ov.resolution;
    if (ov.tol) cfg.tol = ov.tol;
    if (!ov.t0_values.empty()) {
        cfg.deformations.clear();
        for (double t0 : ov.t0_values) {
            DeformRequest req;
            req.t0 = t0;
            cfg.deformations.push_back(req);
        }
    }
}

std::string canonical_config(const RunConfig& cfg) {
    JsonWriter w;
    w.begin_object();
    w.key("surface").value(cfg.surface);
    w.key("parameters").begin_object();
    for (const auto& [k, v] : cfg.parameters) w.key(k).value(v);
    w.end_object();
    w.key("domain").begin_object();
    if (cfg.domain_s) {
        w.key("s").begin_array().value((*cfg.domain_s)[0]).value((*cfg.domain_s)[1]).end_array();
    }
    if (cfg.domain_t) {
        w.key("t").begin_array().value((*cfg.domain_t)[0]).value((*cfg.domain_t)[1]).end_array();
    }
    w.end_object();
    if (cfg.resolution)
        w.key("resolution").begin_array().value((*cfg.resolution)[0]).value((*cfg.resolution)[1]).end_array();
    w.key("ambient");
    if (cfg.ambient.kind == AmbientModel::Kind::MinkowskiFlat) {
        w.value("minkowski");
    } else if (cfg.ambient.kind == AmbientModel::Kind::ConstantCurvature) {
        w.begin_object().key("constantCurvature").value(cfg.ambient.ctilde).end_object();
    } else {
        w.value("custom");
    }
    w.key("tolerances").begin_object();
    w.key("tol");
    if (cfg.tol) w.value(*cfg.tol);
    else w.value("auto");
    w.key("epsUmb").value(cfg.eps_umb);
    w.key("epsPhi").value(cfg.eps_phi);
    w.end_object();
    w.key("deformations").begin_array();
    for (const DeformRequest& d : cfg.deformations) {
        w.begin_object();
        if (d.t0) w.key("t0").value(*d.t0);
        if (d.phi0) w.key("phi0").value(*d.phi0);
        w.end_object();
    }
    w.end_array();
    w.key("output").begin_object().key("formats").begin_array();
    for (const std::string& f : cfg.formats) w.value(f);
    w.end_array().end_object();
    w.end_object();
    return w.str();
}

} // namespace bonnetlab
