#pragma once

// Run configuration and the subcommands behind tools/tcsim.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tcsim/montecarlo.h"

namespace tcsim::cli {

/// Invalid configuration or arguments (exit code 1).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unreadable input or unwritable output (exit code 2).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat `key = value` configuration. Lists are comma separated; `#` starts
/// a comment. Command-line --set overrides are applied after the file.
struct RunConfig {
    NoiseMode mode = NoiseMode::photonic;
    std::vector<int> sizes{9, 11, 13};
    int R = 7;
    std::vector<double> p_C{0};
    std::vector<double> p_L{0};
    std::vector<double> p_flip{0};
    std::vector<double> p_lost{0};
    LossPolicy loss_policy = LossPolicy::depolarize;
    uint64_t trials = 10000;
    uint64_t seed = 1;
    int workers = 0;
    std::string output = "out";
    int min_d = 9;
    ThresholdAxis axis = ThresholdAxis::p_C;
    // Tradeoff: interior p_L values as fractions of the loss threshold, and
    // the p_C grid at each as multiples of a linear-interpolation guess.
    std::vector<double> tradeoff_fractions{0.25, 0.5, 0.75};
    std::vector<double> tradeoff_span{0.6, 0.75, 0.9, 1.0, 1.1, 1.25, 1.4};
    int matching_neighbors = 10;
    int max_d = 15;

    /// Throws ConfigError naming the offending key.
    void validate() const;

    /// `key = value` lines covering every key, in a fixed order.
    std::vector<std::pair<std::string, std::string>> resolved() const;

    RunOptions run_options() const;
};

/// Applies one `key = value` assignment. `where` prefixes error messages
/// (for example "run.cfg:12").
void apply_setting(RunConfig &cfg, std::string_view key, std::string_view value, const std::string &where);

/// Parses a configuration text on top of `cfg`. Errors carry `source:line`.
void parse_config(RunConfig &cfg, std::string_view text, const std::string &source);

/// Reads and parses a file; IoError if unreadable.
RunConfig load_config(const std::string &path);

/// Applies a `key=value` override from the command line.
void apply_override(RunConfig &cfg, std::string_view assignment);

/// Points of the configured grid (sizes x noise values), sweep order.
std::vector<PointSpec> grid_points(const RunConfig &cfg);

// ---------------------------------------------------------------------------
// Threshold and tradeoff runs (shared by the CLI and the acceptance suite).

struct ThresholdRun {
    std::vector<PointEstimate> points;
    ThresholdEstimate estimate;
    double fixed_value = 0;  // value of the other parameter
};

/// Sweeps the configured grid and locates the crossing along cfg.axis. The
/// non-axis parameter must have exactly one value.
ThresholdRun run_threshold(const RunConfig &cfg);

struct TradeoffRun {
    ThresholdRun computational;           // p_L = 0, along p_C
    ThresholdRun loss;                    // p_C = 0, along p_L
    std::vector<ThresholdRun> interior;   // along p_C at fixed p_L
    TradeoffCurve curve;                  // valid when complete
    bool complete = false;
    std::string note;
};

/// The computational extreme uses cfg.p_C as grid, the loss extreme cfg.p_L.
/// Precomputed extremes may be passed in to skip their sweeps.
TradeoffRun run_tradeoff(const RunConfig &cfg, const std::optional<ThresholdRun> &computational = std::nullopt,
                         const std::optional<ThresholdRun> &loss = std::nullopt);

// ---------------------------------------------------------------------------
// Persistence.

/// CSV with `# key=value` header lines followed by the fixed columns
/// d,p_C,p_L,R,mode,trials,failures,rate,ci_low,ci_high,seed.
std::string points_csv(const RunConfig &cfg, const std::vector<PointEstimate> &points);

/// Writes via a temporary file and rename. Throws IoError.
void write_file_atomic(const std::string &path, const std::string &content);

// ---------------------------------------------------------------------------
// Subcommands. Each returns the process exit code.

int cmd_verify(std::ostream &out, bool corrupt_gate = false);
int cmd_sample(const RunConfig &cfg, std::ostream &out, uint64_t trial, const std::vector<uint32_t> &inject,
               const std::string &dump_path);
int cmd_sweep(const RunConfig &cfg);
int cmd_threshold(const RunConfig &cfg);
int cmd_tradeoff(const RunConfig &cfg);
int cmd_lattice_dump(std::ostream &out, int L, int R);

}  // namespace tcsim::cli
