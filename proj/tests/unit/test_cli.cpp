#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "helpers.hpp"
#include "runner.hpp"

using namespace gbssl;
using namespace gbssl::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> problems_of(const json& doc) {
    try {
        parse_config(doc);
    } catch (const ConfigError& e) {
        return e.problems();
    }
    return {};
}

bool mentions(const std::vector<std::string>& problems, const std::string& text) {
    for (const auto& p : problems)
        if (p.find(text) != std::string::npos) return true;
    return false;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

json small_prior_sample() {
    return {{"kind", "prior-sample"}, {"graph", {{"n", 150}}}, {"regularity", {{"draws", 3}}}};
}

int run_cli(const std::string& args, std::string* output = nullptr) {
    const auto log = fs::temp_directory_path() / "gbssl_cli_output.txt";
    const std::string cmd = std::string(GBSSL_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    if (output) *output = slurp(log);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("catalog and suggestions") {
    CHECK(catalog().size() == 7);
    for (const auto& e : catalog()) CHECK(kind_from_string(e.name) == e.kind);
    CHECK(suggest_kind("spectrum") == "spectra");
    CHECK(suggest_kind("acceptance_sweep") == "acceptance-sweep");
    CHECK(suggest_kind("zzzzzzzzzzzzzzzzzzzzzzzzzzzz").empty());
    const auto p = problems_of({{"kind", "posteriors"}});
    REQUIRE(p.size() == 1);
    CHECK(mentions(p, "did you mean 'posterior'"));
}

TEST_CASE("config round trips losslessly") {
    for (const auto& e : catalog()) {
        const ExperimentConfig c = parse_config({{"kind", e.name}});
        const ExperimentConfig back = parse_config(to_json(c));
        CHECK(back == c);
        CHECK(to_json(back).dump() == to_json(c).dump());
    }
    auto c = parse_config({{"kind", "posterior"},
                           {"seed", 17},
                           {"output", "somewhere"},
                           {"model", {{"noise", "probit"}, {"sigma", 0.3}, {"observation", "ball-average"}, {"delta", 0.2}}},
                           {"sampler", {{"beta", 0.2}, {"iterations", 500}, {"burn_in", 100}}}});
    CHECK(c.seed == 17);
    CHECK(c.model.noise == NoiseKind::probit);
    CHECK(c.model.mode == ObservationMode::ball_average);
    CHECK(parse_config(to_json(c)) == c);
}

TEST_CASE("kind defaults") {
    CHECK(parse_config({{"kind", "spectra"}}).eps_multipliers == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(parse_config({{"kind", "supervised-sweep"}}).model.t == 0.0);
    const auto post = parse_config({{"kind", "posterior"}});
    CHECK(post.model.s == 5.0);
    CHECK(post.model.alpha == 1.0);
    CHECK(post.eigenpairs == post.model.modes);
    CHECK(post.chain.iterations == 100'000);
    CHECK(post.chain.burn_in == 90'000);
}

TEST_CASE("field-level errors") {
    CHECK(mentions(problems_of({{"kind", "posterior"}, {"prior", {{"s", 2}}}}), "prior.s"));
    CHECK(mentions(problems_of({{"kind", "posterior"}, {"prior", {{"s", 2}}}}), "s > m"));
    CHECK(mentions(problems_of({{"kind", "posterior"}, {"sampler", {{"beta", 0}}}}), "sampler.beta"));
    CHECK(mentions(problems_of({{"kind", "posterior"}, {"sampler", {{"beta", 1.5}}}}), "sampler.beta"));
    CHECK(problems_of({{"kind", "posterior"}, {"sampler", {{"beta", 1.0}, {"iterations", 10}, {"burn_in", 5}}}}).empty());
    CHECK(mentions(problems_of({{"kind", "posterior"}, {"graph", {{"n", "many"}}}}), "graph.n: expected an integer"));
    CHECK(mentions(problems_of({{"kind", "posterior"}, {"model", {{"colour", 1}}}}), "model.colour: unknown field"));
    CHECK(mentions(problems_of({{"kind", "posterior"}, {"extra", 1}}), "extra: unknown field"));
    CHECK(mentions(problems_of({{"kind", "posterior"}, {"model", {{"p", 2000}}}}), "model.p"));
    CHECK(mentions(problems_of({{"kind", "posterior"}, {"model", {{"noise", "cauchy"}}}}), "model.noise"));
    CHECK(mentions(problems_of({{"kind", "posterior"}, {"model", {{"observation", "ball-average"}}}}), "model.delta"));
    CHECK(mentions(problems_of({{"kind", "posterior"}, {"version", 9}}), "version"));
    CHECK(mentions(problems_of({{"kind", "oracle-compare"}, {"model", {{"noise", "probit"}}}}), "model.noise"));
    CHECK(mentions(problems_of({{"kind", "regularity"}, {"regularity", {{"draws", 0}}}}), "regularity.draws"));
    CHECK(mentions(problems_of({{"seed", 1}}), "kind"));
    // several problems are reported together
    CHECK(problems_of({{"kind", "posterior"}, {"prior", {{"s", 1}}}, {"sampler", {{"beta", 0}}}}).size() == 2);
}

TEST_CASE("output directory resolution") {
    auto c = parse_config({{"kind", "spectra"}, {"seed", 4}});
    ::setenv("GBSSL_OUTPUT_ROOT", "/tmp/somewhere", 1);
    CHECK(resolve_output(c) == fs::path("/tmp/somewhere/spectra-seed4"));
    ::unsetenv("GBSSL_OUTPUT_ROOT");
    CHECK(resolve_output(c) == fs::path("runs/spectra-seed4"));
    c.output = "/tmp/explicit";
    CHECK(resolve_output(c) == fs::path("/tmp/explicit"));
}

TEST_CASE("runs are deterministic and reproducible from the manifest") {
    const auto dir = test::scratch_dir("cli_repro");
    const auto config = parse_config(small_prior_sample());
    const auto first = run(config, dir / "a");
    const auto second = run(config, dir / "b");
    REQUIRE(first.files == second.files);
    for (const auto& name : first.files)
        if (name != "manifest.json") CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));

    const json manifest = json::parse(slurp(dir / "a" / "manifest.json"));
    CHECK(manifest.at("kind") == "prior-sample");
    CHECK(manifest.at("seeds").contains("prior_draws"));
    CHECK(manifest.at("versions").contains("eigen"));
    CHECK(manifest.at("wall_time_seconds").get<double>() >= 0.0);
    const auto replay = run(parse_config(manifest.at("config")), dir / "c");
    for (const auto& name : first.files)
        if (name != "manifest.json") CHECK(slurp(dir / "a" / name) == slurp(dir / "c" / name));
}

TEST_CASE("existing output is kept unless overwriting") {
    const auto dir = test::scratch_dir("cli_overwrite");
    const auto config = parse_config(small_prior_sample());
    run(config, dir / "out");
    CHECK_THROWS_AS(run(config, dir / "out"), std::runtime_error);
    RunOptions options;
    options.overwrite = true;
    CHECK_NOTHROW(run(config, dir / "out", options));
}

TEST_CASE("failed runs leave nothing behind") {
    const auto dir = test::scratch_dir("cli_failure");
    // a single retained mode has eigenvalue 0, which the regularity normalization rejects
    const auto config = parse_config({{"kind", "regularity"},
                                      {"graph", {{"n", 100}}},
                                      {"prior", {{"modes", 1}}},
                                      {"regularity", {{"draws", 2}}}});
    CHECK_THROWS(run(config, dir / "out"));
    CHECK_FALSE(fs::exists(dir / "out"));
    CHECK(fs::is_empty(dir));
}

TEST_CASE("spectra writes one table per eps multiplier") {
    const auto dir = test::scratch_dir("cli_spectra");
    auto config = parse_config({{"kind", "spectra"}, {"graph", {{"n", 200}, {"eigenpairs", 12}}}, {"svg", true}});
    const auto report = run(config, dir / "out");
    for (const char* name : {"spectra_eps1.csv", "spectra_eps2.csv", "spectra_eps3.csv"}) {
        CHECK(fs::exists(dir / "out" / name));
        std::istringstream rows(slurp(dir / "out" / name));
        std::string header;
        std::getline(rows, header);
        CHECK(header == "index,graph,continuum");
    }
    CHECK(slurp(dir / "out" / "spectra_eps2.svg").rfind("<svg", 0) == 0);
}

TEST_CASE("disconnected graphs are reported") {
    const auto dir = test::scratch_dir("cli_disconnected");
    const auto config = parse_config({{"kind", "prior-sample"},
                                      {"graph", {{"n", 100}, {"eps_multipliers", {0.1}}}},
                                      {"regularity", {{"draws", 1}}}});
    const auto report = run(config, dir / "out");
    REQUIRE(report.warnings.size() == 1);
    CHECK(report.warnings[0].find("connected components") != std::string::npos);
    const json manifest = json::parse(slurp(dir / "out" / "manifest.json"));
    CHECK(manifest.at("warnings").size() == 1);
}

TEST_CASE("sweeps with fixed p and with every point labeled") {
    const auto dir = test::scratch_dir("cli_sweeps");
    const json sampler = {{"beta", 0.2}, {"iterations", 400}, {"burn_in", 200}, {"replicates", 2}};
    const auto fixed = parse_config({{"kind", "acceptance-sweep"}, {"graph", {{"ns", {120, 160}}}}, {"model", {{"p", 40}}}, {"sampler", sampler}});
    const auto all = parse_config({{"kind", "supervised-sweep"}, {"graph", {{"ns", {120, 160}}}}, {"sampler", sampler}});
    RunOptions options;
    options.jobs = 3;
    run(fixed, dir / "fixed", options);
    run(all, dir / "all", options);
    std::istringstream a(slurp(dir / "fixed" / "acceptance_table.csv")), b(slurp(dir / "all" / "acceptance_table.csv"));
    std::string line;
    std::getline(a, line);
    CHECK(line == "n,p,mean_acceptance,median_iact");
    std::getline(a, line);
    CHECK(line.rfind("120,40,", 0) == 0);
    std::getline(b, line);
    std::getline(b, line);
    CHECK(line.rfind("120,120,", 0) == 0);
    // thread count does not change the bytes
    options.jobs = 1;
    run(fixed, dir / "serial", options);
    CHECK(slurp(dir / "serial" / "sweep.csv") == slurp(dir / "fixed" / "sweep.csv"));
}

TEST_CASE("posterior bundles") {
    const auto dir = test::scratch_dir("cli_posterior");
    const json sampler = {{"beta", 0.3}, {"iterations", 2000}, {"burn_in", 1000}};
    const auto gaussian = parse_config({{"kind", "posterior"}, {"graph", {{"n", 200}}}, {"model", {{"p", 30}}},
                                        {"sampler", sampler}, {"comparison", {{"grid_points", 100}}}});
    run(gaussian, dir / "g");
    for (const char* name : {"labels.csv", "labels.csv.json", "oracle_summary.csv", "chain_summary.csv",
                             "chain_trace.csv", "chain.json", "comparison.json", "fields.csv", "manifest.json"})
        CHECK(fs::exists(dir / "g" / name));
    const json cmp = json::parse(slurp(dir / "g" / "comparison.json"));
    CHECK(cmp.at("chain_vs_oracle").at("relative_mean_error").get<double>() >= 0.0);

    const auto probit = parse_config({{"kind", "posterior"}, {"graph", {{"n", 200}}},
                                      {"model", {{"p", 30}, {"noise", "probit"}}}, {"sampler", sampler},
                                      {"comparison", {{"grid_points", 100}}}});
    run(probit, dir / "p");
    CHECK(fs::exists(dir / "p" / "chain_summary.csv"));
    CHECK_FALSE(fs::exists(dir / "p" / "oracle_summary.csv"));
    const auto labels = load_labels(dir / "p" / "labels.csv");
    CHECK(labels.model.kind == NoiseKind::probit);
}

TEST_CASE("oracle comparison bundle") {
    const auto dir = test::scratch_dir("cli_oracle");
    const auto config = parse_config({{"kind", "oracle-compare"}, {"graph", {{"ns", {150, 250}}}},
                                      {"model", {{"p", 20}, {"l_max", 6}, {"mc_samples", 100}}},
                                      {"sampler", {{"replicates", 2}}}, {"comparison", {{"grid_points", 200}}}});
    run(config, dir / "out");
    std::istringstream rows(slurp(dir / "out" / "consistency.csv"));
    std::string line;
    int count = -1;
    while (std::getline(rows, line)) ++count;
    CHECK(count == 4);
}

TEST_CASE("command-line interface") {
    const auto dir = test::scratch_dir("cli_binary");
    {
        std::ofstream(dir / "bad.json") << json({{"kind", "posterior"}, {"prior", {{"s", 2}}}}).dump();
        std::ofstream(dir / "typo.json") << json({{"kind", "spectrum"}}).dump();
        std::ofstream(dir / "good.json") << small_prior_sample().dump();
    }
    std::string out;
    CHECK(run_cli("validate --config " + (dir / "bad.json").string(), &out) == 2);
    CHECK(out.find("prior.s") != std::string::npos);
    CHECK(run_cli("validate --config " + (dir / "typo.json").string(), &out) == 2);
    CHECK(out.find("did you mean 'spectra'") != std::string::npos);
    CHECK(run_cli("validate --config " + (dir / "good.json").string(), &out) == 0);
    CHECK(run_cli("list-experiments", &out) == 0);
    CHECK(out.find("acceptance-sweep") != std::string::npos);

    CHECK(run_cli("run --config " + (dir / "good.json").string() + " --seed 5 --out " + (dir / "run").string(), &out) == 0);
    const json manifest = json::parse(slurp(dir / "run" / "manifest.json"));
    CHECK(manifest.at("config").at("seed") == 5);
    CHECK(run_cli("run --config " + (dir / "good.json").string() + " --out " + (dir / "run").string(), &out) == 1);

    ::setenv("GBSSL_OUTPUT_ROOT", (dir / "root").c_str(), 1);
    CHECK(run_cli("run --config " + (dir / "good.json").string(), &out) == 0);
    ::unsetenv("GBSSL_OUTPUT_ROOT");
    CHECK(fs::exists(dir / "root" / "prior-sample-seed0" / "manifest.json"));
}

}
