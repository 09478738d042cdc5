// tcsim: stabilizer checks, decoding trials and threshold sweeps for the
// photonic topological cluster state.

#include <cstdlib>
#include <iostream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "tcsim/cli.h"

namespace {

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("tcsim");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%H:%M:%S] %^%l%$ %v");
    const char *env = std::getenv("TCSIM_LOG");
    spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::info);
}

tcsim::cli::RunConfig resolve(const std::string &path, const std::vector<std::string> &overrides) {
    tcsim::cli::RunConfig cfg = path.empty() ? tcsim::cli::RunConfig{} : tcsim::cli::load_config(path);
    for (const auto &o : overrides) tcsim::cli::apply_override(cfg, o);
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char **argv) {
    setup_logging();

    CLI::App app{"Photonic topological cluster-state simulator"};
    app.require_subcommand(1);

    bool corrupt = false;
    auto *verify = app.add_subcommand("verify", "Check the machine-gun and fusion stabilizer constructions");
    verify->add_flag("--corrupt-gate", corrupt)->group("");

    std::string config_path;
    std::vector<std::string> overrides;
    auto add_config = [&](CLI::App *sub, bool required) {
        auto *opt = sub->add_option("config", config_path, "Run configuration (key = value)");
        if (required) opt->required();
        sub->add_option("--set", overrides, "Override a configuration key (key=value)");
    };

    auto *sample = app.add_subcommand("sample", "Decode one trial");
    add_config(sample, false);
    std::string dump_path;
    uint64_t trial = 0;
    std::vector<std::string> injects;
    sample->add_option("--dump", dump_path, "Write the trial as JSON to a file ('-' for stdout)");
    sample->add_option("--trial", trial, "Trial index");
    sample->add_option("--inject", injects, "Flip one face after sampling (face=i)");

    auto *sweep = app.add_subcommand("sweep", "Failure rates over the configured grid");
    add_config(sweep, true);
    auto *threshold = app.add_subcommand("threshold", "Crossing threshold along the configured axis");
    add_config(threshold, true);
    auto *tradeoff = app.add_subcommand("tradeoff", "Loss/computational-error threshold tradeoff");
    add_config(tradeoff, true);

    auto *lattice = app.add_subcommand("lattice", "Lattice utilities");
    lattice->require_subcommand(1);
    auto *dump = lattice->add_subcommand("dump", "Print the face/cell adjacency");
    int L = 3, R = 7;
    dump->add_option("-L,--size", L, "Lattice size");
    dump->add_option("-R", R, "Fusion attempts per link");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        using namespace tcsim::cli;
        if (*verify) return cmd_verify(std::cout, corrupt);
        if (*dump) return cmd_lattice_dump(std::cout, L, R);
        RunConfig cfg = resolve(config_path, overrides);
        if (*sample) {
            std::vector<uint32_t> faces;
            for (const auto &s : injects) {
                if (!s.starts_with("face=")) throw ConfigError("--inject " + s + ": expected face=i");
                try {
                    faces.push_back(static_cast<uint32_t>(std::stoul(s.substr(5))));
                } catch (const std::exception &) {
                    throw ConfigError("--inject " + s + ": bad face index");
                }
            }
            return cmd_sample(cfg, std::cout, trial, faces, dump_path);
        }
        if (*sweep) return cmd_sweep(cfg);
        if (*threshold) return cmd_threshold(cfg);
        if (*tradeoff) return cmd_tradeoff(cfg);
    } catch (const tcsim::cli::IoError &e) {
        spdlog::error("{}", e.what());
        return 2;
    } catch (const tcsim::cli::ConfigError &e) {
        spdlog::error("{}", e.what());
        return 1;
    } catch (const std::invalid_argument &e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return 1;
}
