#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "doa/cli_commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"On-grid DOA estimation experiments (OMP and subspace baselines)"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    doa::RunOverrides overrides;
    std::uint64_t seed_flag = 0;
    int trials_flag = 0, jobs_flag = 0;

    auto add_run_options = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config (JSON)")
            ->required();
        cmd->add_option("--out", out_dir, "output directory")->required();
        cmd->add_option("--seed", seed_flag,
                        "master seed (default: the seed in the config)");
        cmd->add_option("--trials", trials_flag, "override the trial count");
        cmd->add_option("--jobs", jobs_flag, "cap worker threads (0 = all)");
    };

    auto* spectrum = app.add_subcommand("spectrum", "spatial spectra, one realization");
    add_run_options(spectrum);
    auto* rmse = app.add_subcommand("rmse", "Monte-Carlo RMSE over an SNR sweep");
    add_run_options(rmse);
    auto* consistency =
        app.add_subcommand("consistency", "repeated-trial OMP support stability");
    add_run_options(consistency);

    int sensors = 15, rank_x = 1;
    auto* ident = app.add_subcommand("identifiability",
                                     "print the unique-identifiability bound");
    ident->add_option("--sensors", sensors, "ULA sensor count")->required();
    ident->add_option("--rank", rank_x, "rank of the snapshot matrix")->required();

    CLI11_PARSE(app, argc, argv);

    auto collect = [&](CLI::App* cmd) {
        if (cmd->count("--seed")) overrides.seed = seed_flag;
        if (cmd->count("--trials")) overrides.trials = trials_flag;
        if (cmd->count("--jobs")) overrides.jobs = jobs_flag;
    };

    if (spectrum->parsed()) {
        collect(spectrum);
        return doa::cmd_spectrum(config_path, out_dir, overrides);
    }
    if (rmse->parsed()) {
        collect(rmse);
        return doa::cmd_rmse(config_path, out_dir, overrides);
    }
    if (consistency->parsed()) {
        collect(consistency);
        return doa::cmd_consistency(config_path, out_dir, overrides);
    }
    return doa::cmd_identifiability(sensors, rank_x, std::cout);
}
