// ur-lab: experiment runner for the uncertainty-relations laboratory.
//
//   ur-lab <experiment> --config <path> [--out <dir>] [--seed <u64>]
//   ur-lab fixtures
//
// Exit codes: 0 all assertions passed, 1 assertion failures (a failure
// manifest is written next to the data), 2 config parse error, 3 config
// validation error.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "urlab/experiments.hpp"
#include "urlab/fixtures.hpp"

namespace {

constexpr const char* kExperiments[] = {"verify", "zero-scan", "mt",
                                        "mt-limits", "zeno", "bw"};

int run_experiment(const std::string& name, const std::string& config_path,
                   const std::string& out_dir, bool seed_given,
                   std::uint64_t seed) {
    urlab::cli::RunConfig config = urlab::cli::load_config(config_path);
    if (config.experiment != name)
        throw urlab::Error(urlab::ErrorCode::ConfigValidate,
                           "config is for experiment '" + config.experiment +
                               "' but '" + name + "' was requested");
    if (!out_dir.empty())
        config.output_dir = out_dir;
    if (seed_given)
        config.seed = seed;

    const urlab::cli::RunOutcome outcome = urlab::cli::run(config);
    std::printf("wrote %s\n", outcome.data_path.c_str());
    std::printf("wrote %s\n", outcome.metadata_path.c_str());
    if (outcome.exit_code == 0) {
        std::printf("%s: all assertions passed\n", name.c_str());
    } else {
        std::printf("%s: %zu assertion failure(s), manifest at %s\n",
                    name.c_str(), outcome.failures.size(),
                    outcome.failures_path.c_str());
        for (const std::string& f : outcome.failures)
            std::printf("  FAIL %s\n", f.c_str());
    }
    return outcome.exit_code;
}

void print_fixtures() {
    for (const urlab::cli::Fixture& f : urlab::cli::list_fixtures())
        std::printf("%-16s %-8s %s\n", f.name.c_str(), f.kind.c_str(),
                    f.description.c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"uncertainty-relations laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string selected;

    for (const char* name : kExperiments) {
        CLI::App* sub = app.add_subcommand(name, "run the experiment");
        sub->add_option("--config", config_path, "run configuration (JSON)")
            ->required();
        sub->add_option("--out", out_dir, "output directory override");
        sub->add_option("--seed", seed, "seed override")
            ->each([&seed_given](const std::string&) { seed_given = true; });
        sub->callback([&selected, name]() { selected = name; });
    }
    CLI::App* fixtures = app.add_subcommand("fixtures", "list named fixtures");
    fixtures->callback([&selected]() { selected = "fixtures"; });

    CLI11_PARSE(app, argc, argv);

    if (selected == "fixtures") {
        print_fixtures();
        return 0;
    }
    try {
        return run_experiment(selected, config_path, out_dir, seed_given, seed);
    } catch (const urlab::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        switch (e.code()) {
        case urlab::ErrorCode::ConfigParse: return 2;
        case urlab::ErrorCode::ConfigValidate: return 3;
        default: return 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
