#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hazard/cli/commands.hpp"
#include "hazard/cli/config.hpp"

namespace {

using namespace hazard;
using namespace hazard::cli;

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> paths;
    std::optional<std::size_t> steps;
};

void add_common(CLI::App& cmd, Common& c)
{
    cmd.add_option("--config", c.config, "key=value model file")->check(CLI::ExistingFile);
    cmd.add_option("--seed", c.seed, "random seed (overrides config)");
    cmd.add_option("--paths", c.paths, "number of simulated scenarios (overrides n_paths)");
    cmd.add_option("--steps", c.steps, "time steps on [0, T] (overrides config)");
}

RunConfig resolve(const Common& c)
{
    RunConfig cfg = c.config.empty() ? RunConfig{} : read_config_file(c.config);
    if (c.seed)
        cfg.seed = *c.seed;
    if (c.paths)
        cfg.n_paths = *c.paths;
    if (c.steps)
        cfg.steps = *c.steps;
    validate_config(cfg);
    return cfg;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Two-regime hazard-rate credit model: pricing, paths, verification, arbitrage demos"};
    app.require_subcommand(1);

    Common common;

    auto* price = app.add_subcommand("price", "closed-form and Monte Carlo price of the defaultable bond");
    add_common(*price, common);

    std::size_t count = 8;
    std::string paths_out = "paths.csv";
    auto* paths = app.add_subcommand("paths", "export sample paths of c(t) with the envelope curves");
    add_common(*paths, common);
    paths->add_option("--count", count, "number of paths to export");
    paths->add_option("--out", paths_out, "CSV output path");

    std::string suites = "all";
    std::string candidate_file;
    std::string verify_out = "verify_report.json";
    auto* verify = app.add_subcommand("verify", "run verification suites and write a JSON report");
    add_common(*verify, common);
    verify->add_option("--suite", suites, "comma-separated suites, or all");
    verify->add_option("--candidate", candidate_file, "t,c table used as the pre-default value")
        ->check(CLI::ExistingFile);
    verify->add_option("--out", verify_out, "JSON report path");

    std::string broken_name;
    std::string demo_out = "arbitrage_values.csv";
    auto* demo = app.add_subcommand("demo-arbitrage", "run the arbitrage strategy against a broken market");
    add_common(*demo, common);
    demo->add_option("--broken", broken_name, "decreasing_c, postdefault_value, range_violation or none")
        ->required();
    demo->add_option("--out", demo_out, "CSV output path for the strategy value paths");

    auto* config = app.add_subcommand("config", "print the resolved configuration as a config file");
    add_common(*config, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        const RunConfig cfg = resolve(common);
        if (*price)
            return cmd_price(cfg, std::cout);
        if (*paths)
            return cmd_paths(cfg, count, paths_out, std::cout, std::cerr);
        if (*verify) {
            const PreDefaultFn candidate = candidate_file.empty() ? PreDefaultFn{} : read_candidate(candidate_file);
            return cmd_verify(cfg, parse_suites(suites), candidate, verify_out, std::cout, std::cerr);
        }
        if (*demo) {
            const auto broken = parse_broken_model(broken_name);
            if (!broken) {
                std::cerr << "error: unknown market '" << broken_name << "'\n";
                return kExitUsage;
            }
            return cmd_demo(cfg, *broken, demo_out, std::cout, std::cerr);
        }
        std::cout << echo_config(cfg);
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailed;
    }
}
