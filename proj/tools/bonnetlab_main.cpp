#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bonnetlab/pipeline.hpp"

namespace {

int parse_resolution(const std::string& text, std::array<int, 2>& out) {
    const auto x = text.find('x');
    if (x == std::string::npos) return 1;
    try {
        out[0] = std::stoi(text.substr(0, x));
        out[1] = std::stoi(text.substr(x + 1));
    } catch (...) {
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moving-frame invariants, Bonnet integrability check and isometric "
                 "deformations of timelike surface patches"};
    app.require_subcommand(1);

    std::string config_path, out_dir, resolution, t0_list;
    double tol = -1.0;
    bool tol_set = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "run configuration (JSON)")->required();
        cmd->add_option("--out", out_dir, "output directory")->required();
        cmd->add_option("--resolution", resolution, "override grid resolution, e.g. 129x129");
        cmd->add_option("--tol", tol, "override the bonnet_check tolerance")
            ->each([&](const std::string&) { tol_set = true; });
        cmd->add_option("--t0", t0_list, "override deformation requests: v[,v...]");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "compute the invariant bundle and residuals");
    CLI::App* check = app.add_subcommand("check", "analyze plus the Bonnet classification");
    CLI::App* deform = app.add_subcommand("deform", "check plus deformation and reconstruction");
    add_common(analyze);
    add_common(check);
    add_common(deform);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return bonnetlab::kExitConfig;
    }

    bonnetlab::CommandResult result;
    try {
        bonnetlab::RunConfig cfg = bonnetlab::load_config_file(config_path);

        bonnetlab::ConfigOverrides ov;
        if (!resolution.empty()) {
            std::array<int, 2> res{};
            if (parse_resolution(resolution, res)) {
                std::fprintf(stderr, "bonnetlab: bad --resolution '%s' (want NxM)\n",
                             resolution.c_str());
                return bonnetlab::kExitConfig;
            }
            ov.resolution = res;
        }
        if (tol_set) ov.tol = tol;
        if (!t0_list.empty()) {
            std::string item;
            for (std::size_t i = 0; i <= t0_list.size(); ++i) {
                if (i == t0_list.size() || t0_list[i] == ',') {
                    if (!item.empty()) ov.t0_values.push_back(std::stod(item));
                    item.clear();
                } else {
                    item += t0_list[i];
                }
            }
        }
        bonnetlab::apply_overrides(cfg, ov);

        if (analyze->parsed()) result = bonnetlab::cmd_analyze(cfg, out_dir);
        else if (check->parsed()) result = bonnetlab::cmd_check(cfg, out_dir);
        else result = bonnetlab::cmd_deform(cfg, out_dir);
    } catch (const bonnetlab::ConfigError& e) {
        std::fprintf(stderr, "bonnetlab: %s\n", e.what());
        return bonnetlab::kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "bonnetlab: %s\n", e.what());
        return bonnetlab::kExitInternal;
    }

    if (result.exit_code != 0) {
        std::fprintf(stderr, "bonnetlab: %s\n", result.message.c_str());
        return result.exit_code;
    }
    std::printf("%s\n", result.report_json.c_str());
    return 0;
}
