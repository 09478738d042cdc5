#pragma once

// Monte Carlo driver: failure rates per (d, noise) point, threshold
// crossings between sizes, and the loss/computational-error tradeoff fit.

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "tcsim/channel.h"
#include "tcsim/decode.h"

namespace tcsim {

struct PointSpec {
    int d = 5;
    NoiseMode mode = NoiseMode::photonic;
    double p_C = 0, p_L = 0;
    int R = 7;
    double p_flip = 0, p_lost = 0;  // phenomenological mode
    LossPolicy policy = LossPolicy::depolarize;
};

struct RunOptions {
    uint64_t trials = 10000;
    uint64_t seed = 1;
    int workers = 0;  // 0 = hardware concurrency
    int max_d = 15;
    DecoderOptions decoder;
};

struct Interval {
    double low = 0, high = 1;
};

/// Wilson score interval. Throws std::invalid_argument unless
/// failures <= trials, trials >= 1 and 0 < confidence < 1.
Interval wilson_interval(uint64_t failures, uint64_t trials, double confidence = 0.95);

struct PointEstimate {
    PointSpec spec;
    uint64_t trials = 0;
    uint64_t failures = 0;
    double rate = 0;
    Interval ci;
    uint64_t seed = 0;
    double mean_defects = 0;
};

struct TrialOutcome {
    uint8_t cls = 0;  // winding bits wx | wy << 1 | wz << 2
    uint32_t defects = 0;
    bool operator==(const TrialOutcome &) const = default;
};

/// Samples and decodes trials [0, opts.trials); trial i draws from
/// derive_rng(opts.seed, i), so outcomes do not depend on the worker count.
/// Throws std::invalid_argument for d < 2, d > max_d or trials = 0.
std::vector<TrialOutcome> run_trials(const PointSpec &spec, const RunOptions &opts);

/// The error configuration of trial `index` (same stream as run_trials).
ErrorConfig sample_trial(const Lattice &lat, const PointSpec &spec, uint64_t seed, uint64_t index);

PointEstimate run_point(const PointSpec &spec, const RunOptions &opts);

/// All points, sorted by d and then by the noise parameters. `progress`
/// is called after each point.
std::vector<PointEstimate> sweep(std::vector<PointSpec> grid, const RunOptions &opts,
                                 const std::function<void(const PointEstimate &)> &progress = {});

// ---------------------------------------------------------------------------
// Thresholds.

enum class ThresholdAxis { p_C, p_L, p_flip, p_lost };
std::string_view to_string(ThresholdAxis a);
ThresholdAxis parse_threshold_axis(std::string_view s);
double axis_value(const PointSpec &spec, ThresholdAxis a);

struct Crossing {
    int d_small = 0, d_large = 0;
    double p = 0;
    double weight = 0;  // slope gap at the crossing
};

struct ThresholdOptions {
    int min_d = 9;
    int window = 5;      // grid points per local quadratic fit
    int bootstrap = 200;
    uint64_t seed = 20251016;
};

struct ThresholdEstimate {
    ThresholdAxis axis = ThresholdAxis::p_C;
    bool found = false;
    double p_th = 0;
    double uncertainty = 0;  // bootstrap standard deviation
    int bootstrap_found = 0; // resamples that produced a crossing
    std::vector<int> sizes;
    std::vector<Crossing> crossings;
    double grid_low = 0, grid_high = 0;
    std::string note;
};

/// Crossing-based threshold. For every pair of sizes >= min_d, the two
/// curves are fitted by local least-squares quadratics over each grid
/// bracket and the upward crossings (larger d overtaking smaller d) are
/// solved inside the bracket. The estimate is the slope-gap weighted mean
/// of all crossings. Throws std::invalid_argument with fewer than two sizes
/// or fewer than three grid points per size.
ThresholdEstimate find_threshold(const std::vector<PointEstimate> &points, ThresholdAxis axis,
                                 const ThresholdOptions &opts = {});

// ---------------------------------------------------------------------------
// Tradeoff.

struct TradeoffPoint {
    double p_L = 0;
    double p_C = 0;
    double sigma_p_L = 0, sigma_p_C = 0;
};

struct TradeoffCurve {
    double a = 0, b = 0, c = 0;  // p_C = a p_L^2 + b p_L + c
    std::vector<TradeoffPoint> points;
    std::vector<double> residuals;
    double p_L_min = 0, p_L_max = 0;

    /// Throws std::out_of_range outside [p_L_min, p_L_max].
    double eval(double p_L) const;
    /// True iff (p_L, p_C) lies strictly below the curve.
    bool fault_tolerant(double p_C, double p_L) const;
    /// Derivative <= tol over the sampled p_L range.
    bool monotone_nonincreasing(double tol = 0) const;
};

/// Least-squares quadratic through at least three points.
TradeoffCurve fit_tradeoff(std::vector<TradeoffPoint> points);

}  // namespace tcsim
