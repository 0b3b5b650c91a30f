#include "prft/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

int load_or_report(const std::string& path, prft::cli::LoadResult& result) {
    try {
        result = prft::cli::load_config(prft::cli::parse_config_file(path));
    } catch (const prft::ConfigError& e) {
        std::cerr << path << ": " << e.what() << '\n';
        return 2;
    }
    for (const auto& d : result.diagnostics) std::cerr << path << ": " << d.format() << '\n';
    return result.ok() ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Photon-counting statistics and Fisher information for light propagating through emitter ensembles"};
    app.require_subcommand(1);

    std::string run_config, validate_config, out_dir = ".";
    int jobs = 0;

    auto* run = app.add_subcommand("run", "Run the scans and trajectories requested by a config");
    run->add_option("config", run_config, "Configuration file")->required();
    run->add_option("--jobs", jobs, "Worker threads (0: machine parallelism)")->check(CLI::NonNegativeNumber);
    run->add_option("--out", out_dir, "Output directory");

    auto* validate = app.add_subcommand("validate", "Check a config without running it");
    validate->add_option("config", validate_config, "Configuration file")->required();

    auto* version = app.add_subcommand("version", "Print the version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*version) {
        std::cout << "prft-sense " << prft::cli::version() << '\n';
        return 0;
    }

    if (*validate) {
        prft::cli::LoadResult result;
        const int code = load_or_report(validate_config, result);
        if (code == 0) std::cout << validate_config << ": ok\n";
        return code;
    }

    prft::cli::LoadResult result;
    if (const int code = load_or_report(run_config, result); code != 0) return code;
    try {
        prft::cli::RunOptions opt;
        opt.jobs = jobs;
        opt.out_dir = out_dir;
        opt.config_path = run_config;
        return prft::cli::run(*result.config, opt, std::cout);
    } catch (const prft::ConfigError& e) {
        std::cerr << run_config << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
