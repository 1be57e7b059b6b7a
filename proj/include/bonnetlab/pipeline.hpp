#pragma once

#include <string>

#include "bonnetlab/config.hpp"

namespace bonnetlab {

inline constexpr const char* kToolName = "bonnetlab";
inline constexpr const char* kToolVersion = "0.1.0";

/// Documented process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,     // config/DSL/parameter problems
    kExitGeometry = 3,   // NotTimelike / Umbilic / ComplexPrincipal / degenerate frames
    kExitDeformation = 4, // empty or unusable deformation mask
    kExitInternal = 5
};

struct CommandResult {
    int exit_code = kExitOk;
    std::string message;      // non-empty on failure
    std::string report_json;  // full report on success
};

/// analyze: invariants + residuals (+ field CSV/dat when requested).
/// check:   analyze + bonnet section.
/// deform:  check + one entry (and mesh/CSV files) per deformation request.
/// Outputs are collected in memory and written once at the end of the run;
/// pass an empty out_dir to skip file emission.
CommandResult cmd_analyze(const RunConfig& cfg, const std::string& out_dir);
CommandResult cmd_check(const RunConfig& cfg, const std::string& out_dir);
CommandResult cmd_deform(const RunConfig& cfg, const std::string& out_dir);

} // namespace bonnetlab
