#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "landerval/config.hpp"
#include "landerval/errors.hpp"
#include "landerval/experiments.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out_dir;
    int parallelism = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file; defaults apply when omitted")
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", args.seed, "base seed; defaults to the config's certification seed")
        ->each([&args](const std::string&) { args.seed_given = true; });
    cmd->add_option("--out", args.out_dir,
                    "output directory; defaults to $LANDERVAL_OUT, then ./landerval_out");
    cmd->add_option("--parallel", args.parallelism, "worker threads for rollout generation")
        ->check(CLI::PositiveNumber);
}

int run(const std::string& command, const CommonArgs& args) {
    const landerval::AppConfig cfg =
        args.config_path.empty() ? landerval::default_config()
                                 : landerval::load_config(args.config_path);
    landerval::validate_app_config(cfg);

    landerval::RunOptions options;
    options.base_seed = args.seed_given ? args.seed : cfg.certification_seed;
    options.out_dir = args.out_dir;
    options.parallelism = args.parallelism > 0
                              ? args.parallelism
                              : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    if (command == "validate")
        landerval::run_validate(cfg, options);
    else if (command == "boundary")
        landerval::run_boundary(cfg, options);
    else if (command == "calibrate")
        landerval::run_calibrate(cfg, options);
    else if (command == "sweep")
        landerval::run_sweep(cfg, options);
    else
        landerval::run_report(cfg, options);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian deployment approval for landing controllers"};
    app.require_subcommand(1);

    CommonArgs args;
    for (const char* name : {"validate", "boundary", "calibrate", "sweep", "report"}) {
        CLI::App* cmd = app.add_subcommand(name);
        add_common(cmd, args);
    }
    app.get_subcommand("validate")->description("run one sequential approval session");
    app.get_subcommand("boundary")->description("map posterior approval against the success count");
    app.get_subcommand("calibrate")->description("outcome frequencies over synthetic policies");
    app.get_subcommand("sweep")->description("evaluate a quality ladder of controllers");
    app.get_subcommand("report")->description("aggregate artifacts into report.md and charts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // --help exits cleanly; bad usage is a config error
    }

    try {
        return run(app.get_subcommands().front()->get_name(), args);
    } catch (const landerval::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
