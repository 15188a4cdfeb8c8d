#include "ensel/errors.hpp"
#include "ensel/harness.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <map>
#include <optional>

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kConfig = 2, kData = 3, kResource = 4, kInternal = 5 };

using Command = std::function<std::vector<std::filesystem::path>(const ensel::ExperimentConfig&)>;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ensel: information-theoretic ensemble selection experiments"};
    app.set_version_flag("--version", std::string(ensel::library_version()));
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;

    const std::map<std::string, std::pair<std::string, Command>> commands{
        {"curve", {"test error vs. ensemble size over seeded splits", ensel::command_curve}},
        {"validate-copula", {"fit a copula and compare it with the data", ensel::command_validate_copula}},
        {"saturate", {"majority-vote error of equicorrelated pools vs. the floor", ensel::command_saturate}},
        {"fit-copula", {"fit a copula model and write it as JSON", ensel::command_fit_copula}},
        {"sample", {"sample predictions from a synthetic source", ensel::command_sample}},
    };
    for (const auto& [name, entry] : commands) {
        auto* sub = app.add_subcommand(name, entry.first);
        sub->add_option("--config", config_path, "JSON config")->required();
        sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
        sub->add_option("--seed", seed, "master seed (overrides seed)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        auto config = ensel::ExperimentConfig::load(config_path);
        if (out_dir) config.output_dir = *out_dir;
        if (seed) config.seed = *seed;
        for (const auto& [name, entry] : commands) {
            if (!app.got_subcommand(name)) continue;
            for (const auto& f : entry.second(config)) std::cout << f.string() << '\n';
        }
        return kOk;
    } catch (const ensel::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const ensel::ParseError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const ensel::InvalidArgument& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const ensel::ResourceLimit& e) {
        std::cerr << "resource limit: " << e.what() << '\n';
        return kResource;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}
