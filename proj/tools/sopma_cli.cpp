#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sopma/config.hpp"
#include "sopma/errors.hpp"
#include "sopma/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitStageFailure = 1;
constexpr int kExitConfigInvalid = 2;

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    int workers = 0;          // 0 = use config value
    long seed = -1;           // -1 = use config value
    std::string types;        // empty = use config value
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "pipeline configuration file")
        ->envname("SOPMA_CONFIG")
        ->required();
    cmd->add_option("--out-dir", opts.out_dir, "output directory override")
        ->envname("SOPMA_OUT_DIR");
    cmd->add_option("--workers", opts.workers, "sweep worker threads")
        ->envname("SOPMA_WORKERS");
    cmd->add_option("--seed", opts.seed, "random seed override")->envname("SOPMA_SEED");
    cmd->add_option("--types", opts.types, "comma list of value-type names")
        ->envname("SOPMA_TYPES");
}

sopma::config::RunConfig load_config(const CommonOpts& opts) {
    auto cfg = sopma::config::RunConfig::from_file(opts.config_path);
    if (!opts.out_dir.empty()) cfg.paths.out_dir = opts.out_dir;
    if (opts.workers > 0) cfg.workers = opts.workers;
    if (opts.seed >= 0) cfg.seed = static_cast<unsigned long>(opts.seed);
    if (!opts.types.empty()) {
        cfg.value_types.clear();
        std::string t;
        std::istringstream in(opts.types);
        while (std::getline(in, t, ','))
            if (!t.empty()) cfg.value_types.push_back(t);
    }
    auto diags = cfg.validate();
    if (!diags.empty()) {
        for (const auto& d : diags)
            std::cerr << "config error: " << d.key << ": " << d.message << "\n";
        std::exit(kExitConfigInvalid);
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"subjective-objective policy selection pipeline"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string validate_path;

    auto* run = app.add_subcommand("run", "run the full pipeline and write a manifest");
    auto* survey_fit =
        app.add_subcommand("survey-fit", "screen survey items and fit the regression");
    auto* ingest = app.add_subcommand("ingest", "cleanse sensors and build hourly profiles");
    auto* simulate =
        app.add_subcommand("simulate", "simulate the zero-renewables baseline year");
    auto* sweep_cmd = app.add_subcommand("sweep", "evaluate the policy candidate grid");
    auto* couple = app.add_subcommand("couple", "select optimal policies per value type");
    auto* report =
        app.add_subcommand("report", "regenerate the ternary diagram from candidates.csv");
    auto* validate = app.add_subcommand("validate-config", "check a configuration file");
    for (auto* cmd : {run, survey_fit, ingest, simulate, sweep_cmd, couple, report})
        add_common(cmd, opts);
    validate->add_option("--config", validate_path, "configuration file to check")
        ->envname("SOPMA_CONFIG")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) {
            auto cfg = sopma::config::RunConfig::from_file(validate_path);
            auto diags = cfg.validate();
            if (diags.empty()) {
                std::cout << "valid\n";
                return kExitOk;
            }
            for (const auto& d : diags)
                std::cout << d.key << ": " << d.message << "\n";
            return kExitConfigInvalid;
        }

        auto cfg = load_config(opts);
        using namespace sopma::pipeline;
        if (run->parsed()) sopma::pipeline::run(cfg);
        if (survey_fit->parsed()) stage_survey_fit(cfg);
        if (ingest->parsed()) stage_ingest(cfg);
        if (simulate->parsed()) stage_simulate(cfg);
        if (sweep_cmd->parsed()) stage_sweep(cfg);
        if (couple->parsed()) stage_couple(cfg);
        if (report->parsed()) stage_report(cfg);
        return kExitOk;
    } catch (const sopma::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigInvalid;
    } catch (const sopma::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitStageFailure;
    }
}
