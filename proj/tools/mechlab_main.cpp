#include "mechlab/experiments.hpp"

#include <CLI11.hpp>

int main(int argc, char** argv) {
    CLI::App app{"single-call truthful mechanism lab"};
    app.require_subcommand(1);

    mechlab::cli::CommonOptions opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "config name or path (JSON)");
        sub->add_option("--seed", opt.seed, "root RNG seed (overrides the config)");
        sub->add_option("--out", opt.out_dir, "output directory (default: out)");
        sub->add_option("--samples", opt.samples, "replicate / sample count override");
        sub->add_option("--gamma", opt.gamma, "resampling probability, in (0, 1)");
    };

    CLI::App* run = app.add_subcommand("run", "run the experiment named in the config");
    add_common(run);

    CLI::App* sweep = app.add_subcommand("sweep", "emit metrics rows across a gamma grid");
    add_common(sweep);
    sweep->add_option("--gammas", opt.gammas, "gamma grid as start:stop:step");
    sweep->add_option("--n", opt.agents, "agent count (2..12, default 2)");

    CLI::App* scenario = app.add_subcommand("scenario-ppc", "pay-per-click auction scenarios");
    add_common(scenario);
    scenario->add_option("--case", opt.case_name,
                         "skewed-estimate | separable-repair | outcome-dependent-repair | "
                         "click-realization");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    return mechlab::cli::guarded([&]() -> int {
        if (run->parsed()) return mechlab::cli::cmd_run(opt);
        if (sweep->parsed()) return mechlab::cli::cmd_sweep(opt);
        return mechlab::cli::cmd_scenario_ppc(opt);
    });
}
