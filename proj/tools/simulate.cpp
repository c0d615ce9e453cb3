// Command line front end: simulate <subcommand> --config <file> [...]
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hqs/errors.hpp"
#include "hqs/run.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw hqs::IoError("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CommonOpts {
    std::string config_file;
    std::string preset_name;
    std::string out_dir;
    int workers = -1;
    long long seed = -1;
};

void add_common(CLI::App* sub, CommonOpts& opts) {
    sub->add_option("--config", opts.config_file, "run configuration file (key = value)");
    sub->add_option("--preset", opts.preset_name, "named parameter set");
    sub->add_option("--out", opts.out_dir, "output directory");
    sub->add_option("--workers", opts.workers, "worker thread count (0 = logical CPUs)");
    sub->add_option("--seed", opts.seed, "RNG seed for random sampling");
}

hqs::RunConfig load_config(const CommonOpts& opts, hqs::RunMode mode) {
    hqs::RunConfig config;
    if (!opts.preset_name.empty())
        config = hqs::preset(opts.preset_name);
    else if (!opts.config_file.empty())
        config = hqs::parse_config(read_file(opts.config_file));
    else
        throw hqs::ConfigError("either --config or --preset is required");

    if (config.mode != mode)
        throw hqs::ConfigError("configuration mode does not match the subcommand");
    if (!opts.out_dir.empty()) config.output_dir = opts.out_dir;
    if (opts.workers >= 0) config.workers = opts.workers;
    if (opts.seed >= 0) config.seed = static_cast<std::uint64_t>(opts.seed);
    return config;
}

int execute(const CommonOpts& opts, hqs::RunMode mode) {
    const auto config = load_config(opts, mode);
    const auto outputs = hqs::run(config);
    for (const auto& w : outputs.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& f : outputs.files) std::cout << f << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulation toolkit for a parametrically driven spin-ensemble/cavity system"};
    app.require_subcommand(1);

    CommonOpts opts;
    auto* sc = app.add_subcommand("semiclassical", "mean-field trajectory and decay fit");
    auto* qu = app.add_subcommand("quantum", "Lindblad propagation and state fidelity");
    auto* wi = app.add_subcommand("wigner", "Wigner function of the reduced cavity state");
    auto* sw = app.add_subcommand("sweep", "decay rates over a (delta, r) grid");
    for (auto* s : {sc, qu, wi, sw}) add_common(s, opts);

    bool show_schema = false;
    auto* pr = app.add_subcommand("presets", "list named parameter sets");
    pr->add_flag("--schema", show_schema, "print the full configuration key schema");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (pr->parsed()) {
            if (show_schema) {
                std::cout << hqs::schema_text();
            } else {
                for (const auto& name : hqs::preset_names()) std::cout << name << "\n";
            }
            return 0;
        }
        if (sc->parsed()) return execute(opts, hqs::RunMode::Semiclassical);
        if (qu->parsed()) return execute(opts, hqs::RunMode::Quantum);
        if (wi->parsed()) return execute(opts, hqs::RunMode::Wigner);
        return execute(opts, hqs::RunMode::Sweep);
    } catch (const hqs::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const hqs::IntegrationError& e) {
        std::cerr << "integration error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const hqs::PropagationError& e) {
        std::cerr << "propagation error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const hqs::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
