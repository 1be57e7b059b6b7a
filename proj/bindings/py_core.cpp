#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bonnetlab/pipeline.hpp"

namespace py = pybind11;
using namespace bonnetlab;

namespace {

using Triple = std::array<double, 3>;

LVec3 vec(const Triple& t) { return {t[0], t[1], t[2]}; }
Triple arr(const LVec3& v) { return {v.x0, v.x1, v.x2}; }

std::string causal_str(const Triple& u) {
    switch (causal_character(vec(u))) {
        case Causal::Timelike: return "timelike";
        case Causal::Spacelike: return "spacelike";
        case Causal::Null: return "null";
    }
    return "null";
}

std::string run_command(const std::string& config_json, const std::string& command,
                        const std::string& out_dir) {
    const RunConfig cfg = load_config_text(config_json);
    CommandResult res;
    if (command == "analyze") res = cmd_analyze(cfg, out_dir);
    else if (command == "check") res = cmd_check(cfg, out_dir);
    else if (command == "deform") res = cmd_deform(cfg, out_dir);
    else throw ConfigError("unknown command '" + command + "'");
    if (res.exit_code != 0) throw Error(res.message + " (exit " + std::to_string(res.exit_code) + ")");
    return res.report_json;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Moving-frame invariants and Bonnet deformations of timelike surface patches";

    // Translators run newest-first: register the base before the refinements.
    py::register_exception<Error>(m, "BonnetlabError", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "DslParseError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("inner", [](const Triple& u, const Triple& v) { return inner(vec(u), vec(v)); },
          py::arg("u"), py::arg("v"),
          "Lorentzian inner product with signature (-,+,+)");
    m.def("cross", [](const Triple& u, const Triple& v) { return arr(cross(vec(u), vec(v))); },
          py::arg("u"), py::arg("v"),
          "Lorentzian vector product, <u x v, z> = det[u; v; z]");
    m.def("causal_character", &causal_str, py::arg("u"));
    m.def("lorentz_orthonormalize",
          [](const Triple& f1, const Triple& f2, const Triple& f3) {
              const auto e = lorentz_orthonormalize(vec(f1), vec(f2), vec(f3));
              return std::array<Triple, 3>{arr(e[0]), arr(e[1]), arr(e[2])};
          });

    m.def("parse_immersion",
          [](const std::string& text) { return print_immersion(parse_immersion(text)); },
          py::arg("text"), "Parse DSL text; returns the canonical printed form");
    m.def("eval_jet",
          [](const std::string& text, const std::map<std::string, double>& params, double s,
             double t) {
              const SurfaceJet j = eval_jet(parse_immersion(text), params, s, t);
              py::dict d;
              d["x"] = arr(j.x);
              d["xs"] = arr(j.xs);
              d["xt"] = arr(j.xt);
              d["xss"] = arr(j.xss);
              d["xst"] = arr(j.xst);
              d["xtt"] = arr(j.xtt);
              return d;
          },
          py::arg("text"), py::arg("params"), py::arg("s"), py::arg("t"));

    m.def("analyze",
          [](const std::string& config_json, const std::string& out_dir) {
              return run_command(config_json, "analyze", out_dir);
          },
          py::arg("config_json"), py::arg("out_dir") = std::string(),
          "Run the analyze pipeline; returns the report JSON");
    m.def("check",
          [](const std::string& config_json, const std::string& out_dir) {
              return run_command(config_json, "check", out_dir);
          },
          py::arg("config_json"), py::arg("out_dir") = std::string());
    m.def("deform",
          [](const std::string& config_json, const std::string& out_dir) {
              return run_command(config_json, "deform", out_dir);
          },
          py::arg("config_json"), py::arg("out_dir") = std::string());

    m.attr("__version__") = kToolVersion;
}
