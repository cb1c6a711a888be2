#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "config.hpp"
#include "runner.hpp"

namespace cli = gbssl::cli;

namespace {

constexpr int kInvalid = 2;
constexpr int kFailed = 1;

struct Overrides {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    int jobs = 1;
    bool svg = false;
    bool overwrite = false;
    bool print = false;
    bool as_json = false;
};

cli::ExperimentConfig resolve(const Overrides& o, const CLI::App& sub) {
    cli::ExperimentConfig c = cli::load_config(o.config);
    if (sub.count("--seed")) c.seed = o.seed;
    if (sub.count("--out")) c.output = o.out;
    if (o.svg) c.svg = true;
    const auto problems = cli::check(c);
    if (!problems.empty()) throw cli::ConfigError(problems);
    return c;
}

void report(const cli::ConfigError& e) {
    std::cerr << "error: invalid config\n";
    for (const auto& p : e.problems()) std::cerr << "  " << p << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graph-based Bayesian semi-supervised learning experiments"};
    app.require_subcommand(1);
    Overrides o;

    auto* run = app.add_subcommand("run", "run an experiment and write its output bundle");
    run->add_option("--config", o.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--out", o.out, "output directory (default: $GBSSL_OUTPUT_ROOT/<kind>-seed<seed>)");
    run->add_option("--seed", o.seed, "root seed, overrides the config");
    run->add_option("--jobs", o.jobs, "parallel jobs for sweeps")->check(CLI::PositiveNumber);
    run->add_flag("--svg", o.svg, "also write SVG quick-look plots");
    run->add_flag("--overwrite", o.overwrite, "replace an existing output directory");

    auto* validate = app.add_subcommand("validate", "check a config without running it");
    validate->add_option("--config", o.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    validate->add_option("--seed", o.seed, "root seed, overrides the config");
    validate->add_option("--out", o.out, "output directory");
    validate->add_flag("--print", o.print, "print the fully resolved config");

    auto* list = app.add_subcommand("list-experiments", "list the experiment kinds");
    list->add_flag("--json", o.as_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*list) {
            if (o.as_json) {
                nlohmann::json j = nlohmann::json::array();
                for (const auto& e : cli::catalog()) j.push_back({{"kind", e.name}, {"summary", e.summary}});
                std::cout << j.dump(2) << '\n';
            } else {
                for (const auto& e : cli::catalog()) std::printf("%-18s %s\n", e.name.c_str(), e.summary.c_str());
            }
            return 0;
        }
        if (*validate) {
            const auto c = resolve(o, *validate);
            std::cout << "valid " << cli::to_string(c.kind) << " config\n";
            if (o.print) std::cout << cli::to_json(c).dump(2) << '\n';
            return 0;
        }
        const auto c = resolve(o, *run);
        cli::RunOptions options;
        options.jobs = o.jobs;
        options.overwrite = o.overwrite;
        const auto result = cli::run(c, cli::resolve_output(c), options);
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
        std::cout << "wrote " << result.files.size() << " files to " << result.directory.string() << " in "
                  << result.wall_seconds << " s\n";
        return 0;
    } catch (const cli::ConfigError& e) {
        report(e);
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailed;
    }
}
