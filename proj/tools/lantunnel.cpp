// Scenario runner CLI: builds the simulated topology from a config file,
// runs a named scenario, and emits traces, captures and a pass/fail verdict.
//
// Exit codes: 0 pass, 1 fail, 2 usage or config error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lantunnel/pcap.hpp"
#include "lantunnel/scenario/config.hpp"
#include "lantunnel/scenario/runner.hpp"

namespace {

using namespace lantunnel;

std::optional<Location> parse_tap(const std::string& name) {
    for (Location loc : {Location::LanSegment, Location::FirewallOut, Location::FirewallIn,
                         Location::Internet, Location::ServerIf}) {
        if (name == location_name(loc)) return loc;
    }
    return std::nullopt;
}

int cmd_run(const std::string& scenario, const std::string& config_path,
            std::optional<uint64_t> seed, const std::string& trace_path,
            const std::vector<std::string>& pcap_specs) {
    ScenarioConfig cfg =
        config_path.empty() ? ScenarioConfig::defaults() : load_config_file(config_path);
    if (seed) cfg.net.seed = *seed;

    ScenarioReport report = run_scenario(scenario, cfg);

    std::cout << "scenario: " << report.name << "\n";
    std::cout << "verdict: " << (report.pass ? "pass" : "fail") << "\n";
    for (const auto& [k, v] : report.metrics) std::cout << "  " << k << " = " << v << "\n";
    for (const auto& n : report.notes) std::cout << "  note: " << n << "\n";

    if (!trace_path.empty()) {
        report.trace().write_file(trace_path);
        std::cout << "trace: " << trace_path << "\n";
    }
    for (const auto& spec : pcap_specs) {
        auto colon = spec.find(':');
        if (colon == std::string::npos) {
            std::cerr << "error: --pcap expects <tap>:<path>, got " << spec << "\n";
            return 2;
        }
        auto tap = parse_tap(spec.substr(0, colon));
        if (!tap) {
            std::cerr << "error: unknown tap '" << spec.substr(0, colon) << "'\n";
            return 2;
        }
        std::string path = spec.substr(colon + 1);
        export_capture(report.trace(), *tap, path);
        std::cout << "pcap: " << path << "\n";
    }
    return report.pass ? 0 : 1;
}

int cmd_validate(const std::string& config_path) {
    ScenarioConfig cfg =
        config_path.empty() ? ScenarioConfig::defaults() : load_config_file(config_path);
    auto violations = validate_config(cfg);
    if (violations.empty()) {
        std::cout << "config ok\n";
        return 0;
    }
    for (const auto& v : violations) std::cout << "violation: " << v << "\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic LAN tunnel simulator"};
    app.require_subcommand(1);

    std::string scenario, config_path, trace_path;
    std::optional<uint64_t> seed;
    std::vector<std::string> pcap_specs;

    auto* run = app.add_subcommand("run", "run a named scenario");
    run->add_option("scenario", scenario, "scenario name (see `scenarios`)")->required();
    run->add_option("--config", config_path, "config file (key=value)");
    run->add_option("--seed", seed, "override the scenario seed");
    run->add_option("--trace", trace_path, "write the event trace to this path");
    run->add_option("--pcap", pcap_specs, "capture export, <tap>:<path>; repeatable");

    auto* validate = app.add_subcommand("validate", "check a config file");
    validate->add_option("--config", config_path, "config file (key=value)");

    auto* scenarios_cmd = app.add_subcommand("scenarios", "list registered scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(scenario, config_path, seed, trace_path, pcap_specs);
        if (validate->parsed()) return cmd_validate(config_path);
        if (scenarios_cmd->parsed()) {
            for (const auto& [name, fn] : lantunnel::scenario_registry()) {
                std::cout << name << "\n";
            }
            return 0;
        }
    } catch (const lantunnel::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const lantunnel::UnknownScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
