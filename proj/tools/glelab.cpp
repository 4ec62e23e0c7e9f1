#include <iostream>

#include <CLI11.hpp>

#include "glelab/commands.hpp"
#include "glelab/errors.hpp"

int main(int argc, char** argv) {
    using namespace glelab;
    CLI::App app{"Sampling with generalized Langevin dynamics: sweeps, validation, mixture runs"};
    app.require_subcommand(1);
    int threads = 0;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
    app.add_option("--threads", threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", seed, "override the master seed");
    app.add_flag("-q,--quiet", quiet, "no per-chain progress on stderr");

    std::string config_path;
    auto* sweep = app.add_subcommand("sweep", "stepsize sweep, writes sweep.csv and slopes.csv");
    sweep->add_option("config", config_path, "experiment file")->required();

    ValidateOptions vopts;
    auto* val = app.add_subcommand("validate", "check a memory kernel and its invariant covariance");
    val->set_help_flag("--help", "print this help message and exit");
    val->add_option("--kernel", vopts.kernel, "kv_8_8 | exp:g,tau,lambda | prony:r | prony:c,a,b;... | file:path")
        ->capture_default_str();
    val->add_option("--h", vopts.h, "probe stepsize")->capture_default_str()->check(CLI::PositiveNumber);
    val->add_option("--beta", vopts.beta, "inverse temperature")->capture_default_str()->check(CLI::PositiveNumber);

    bool synthetic = false;
    auto* mix = app.add_subcommand("mixture", "Gaussian-mixture posterior run, writes mixture.csv");
    mix->add_option("config", config_path, "experiment file")->required();
    mix->add_flag("--synthetic", synthetic, "use synthetic three-component data");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    RunOptions run;
    run.threads = threads;
    run.seed = seed;
    run.log = quiet ? nullptr : &std::cerr;
    try {
        if (*sweep) return cmd_sweep(config_path, run, std::cout);
        if (*val) return cmd_validate(vopts, std::cout);
        if (*mix) return cmd_mixture(config_path, synthetic, run, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const SchemeError& e) {
        std::cerr << "scheme error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const ValidationError& e) {
        std::cerr << "validation failure: " << e.what() << '\n';
        return kExitValidation;
    } catch (const DimensionError& e) {
        std::cerr << "validation failure: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
