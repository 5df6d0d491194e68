// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

#include "prom/harness/experiment.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "experiment configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "random seed");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "promkit: projection-based reduced-order models (Galerkin / LSPG, ECSW "
        "hyperreduction) for semi-discrete flow models"};
    app.require_subcommand(1);

    struct SubSpec {
        const char* name;
        const char* stage;
        const char* help;
    };
    const SubSpec subs[] = {
        {"hdm-run", "hdm", "run the high-dimensional model and collect snapshots"},
        {"pod-build", "pod", "compress snapshots into a reduced basis"},
        {"rom-run", "rom", "run the projection-based reduced-order model"},
        {"ecsw-train", "ecsw", "train the ECSW cell sampling and weights"},
        {"hprom-run", "hprom", "run the hyperreduced reduced-order model"},
        {"compare", "compare", "compute relative errors and write the report"},
        {"sweep", "sweep", "run a (strategy x energy-tier) study"},
    };

    CommonArgs args;
    std::string selected_stage;
    for (const SubSpec& spec : subs) {
        CLI::App* cmd = app.add_subcommand(spec.name, spec.help);
        add_common(cmd, args);
        cmd->callback([&selected_stage, stage = spec.stage]() { selected_stage = stage; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        prom::IniConfig config = prom::IniConfig::from_file(args.config_path);
        prom::Experiment experiment(config, args.out_dir, args.seed);
        experiment.run_stage(selected_stage);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
