// Command-line front end: run experiments, print offline optima and bounds.

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "edgehost/arrivals.hpp"
#include "edgehost/experiment.hpp"
#include "edgehost/metrics.hpp"
#include "edgehost/oracles.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

edgehost::HostingLadder parse_ladder_arg(const std::string& text)
{
    std::vector<edgehost::HostingLevel> levels;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw edgehost::ConfigError("ladder entries look like alpha:g, got '" + item + "'");
        levels.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
    }
    return edgehost::HostingLadder(std::move(levels));
}

int cmd_run(const std::string& config_path, const std::string& output_override)
{
    auto cfg = edgehost::load_config(config_path);
    std::filesystem::path out = cfg.output_dir;
    if (const char* env = std::getenv("EDGEHOST_OUTPUT_DIR"); env && *env) out = env;
    if (!output_override.empty()) out = output_override;
    const auto result = edgehost::run_experiment(cfg);
    for (const auto& path : edgehost::write_results(result, out)) std::cout << path.string() << '\n';
    return 0;
}

int cmd_oracle(const std::string& trace, const std::string& config_path)
{
    const auto cfg = edgehost::load_config(config_path);
    const edgehost::CostParams params{cfg.c_values.front(), cfg.M_values.front(), cfg.kappa};
    const auto clip = cfg.arrivals.kind == edgehost::ArrivalKind::Trace ? cfg.arrivals.clip
                                                                        : edgehost::ClipPolicy::Clip;
    edgehost::ArrivalSequence arrivals;
    try {
        arrivals = edgehost::load_trace(trace, params.kappa, clip).arrivals;
    } catch (const std::runtime_error& e) {
        throw edgehost::IoError(e.what());
    }
    const auto opt = edgehost::offline_optimal_dp(arrivals, cfg.ladder, params);
    const auto parts = edgehost::horizon_cost(opt.schedule, arrivals, cfg.ladder, params);

    std::cout << "cost " << edgehost::format_number(opt.cost) << '\n'
              << "rent " << edgehost::format_number(parts.rent) << '\n'
              << "service " << edgehost::format_number(parts.service) << '\n'
              << "fetch " << edgehost::format_number(parts.fetch) << '\n'
              << "schedule ";
    for (std::size_t t = 0; t < opt.schedule.size(); ++t)
        std::cout << (t ? "," : "") << opt.schedule[t];
    std::cout << '\n';
    return 0;
}

int cmd_bounds(const std::string& which, const std::map<std::string, double>& symbols,
               const std::string& ladder)
{
    edgehost::BoundInputs in;
    auto put = [&](const char* key, std::optional<double>& slot) {
        if (auto it = symbols.find(key); it != symbols.end()) slot = it->second;
    };
    put("T", in.T);
    put("K", in.K);
    put("alpha", in.alpha);
    put("kappa", in.kappa);
    put("M", in.M);
    put("c", in.c);
    put("beta", in.beta);
    put("delta", in.delta);
    put("delta-min", in.delta_min);
    put("delta-max", in.delta_max);
    put("alpha2", in.alpha2);
    put("mu", in.mu);
    if (!ladder.empty()) in.ladder = parse_ladder_arg(ladder);

    const auto kind = edgehost::parse_bound_kind(which);
    const auto bound = edgehost::theoretical_bound(kind, in);
    std::cout << which << " = " << edgehost::format_number(bound.value) << '\n';
    for (const auto& [name, value] : bound.symbols)
        std::cout << "  " << name << " = " << edgehost::format_number(value) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Online edge service hosting simulator"};
    app.require_subcommand(1);

    std::string config_path, output_override;
    auto* run = app.add_subcommand("run", "Run an experiment config and write CSV results");
    run->add_option("config", config_path, "Experiment config (JSON)")->required();
    run->add_option("--output-dir", output_override, "Output directory (overrides config and env)");

    std::string trace, oracle_config;
    auto* oracle = app.add_subcommand("oracle", "Offline optimal schedule for a trace");
    oracle->add_option("--trace", trace, "Pre-binned per-slot counts")->required();
    oracle->add_option("--config", oracle_config, "Config providing ladder, c, M, kappa")->required();

    std::string which, ladder;
    std::map<std::string, double> symbols;
    auto* bounds = app.add_subcommand("bounds", "Evaluate a closed-form performance bound");
    bounds->add_option("which", which,
                       "ftpl-adv | wftpl-adv | ftpl-stoch | wftpl-stoch | ftpl-cr | wftpl-cr | "
                       "adv-lower-ftpl")
        ->required();
    for (const char* key : {"T", "K", "alpha", "kappa", "M", "c", "beta", "delta", "delta-min",
                            "delta-max", "alpha2", "mu"}) {
        bounds->add_option_function<double>(
            std::string("--") + key, [&symbols, key](double v) { symbols[key] = v; }, key);
    }
    bounds->add_option("--ladder", ladder, "Hosting ladder as alpha:g,alpha:g,...");

    app.add_subcommand("version", "Print the version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) return cmd_run(config_path, output_override);
        if (*oracle) return cmd_oracle(trace, oracle_config);
        if (*bounds) return cmd_bounds(which, symbols, ladder);
        std::cout << "edgehost " << EDGEHOST_VERSION << '\n';
        return 0;
    } catch (const edgehost::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const edgehost::MissingSymbol& e) {
        std::string flag = e.symbol();
        std::replace(flag.begin(), flag.end(), '_', '-');
        std::cerr << "usage error: " << e.what() << " (pass it as --" << flag << ")\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}
