// Acceptance checks. Prints one PASS/FAIL line per criterion.
//
//   acceptance fast      criteria 1-4 (seconds to minutes)
//   acceptance slow      criteria 5-8 (about an hour on one core)
//   acceptance 2 5 ...   selected criteria
//
// Exit status is nonzero if a criterion fails that is not listed in
// kKnownFailures below.

#include <algorithm>
#include <chrono>
#include <climits>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tcsim/cli.h"
#include "tcsim/decode.h"
#include "tcsim/montecarlo.h"
#include "tcsim/stabsim.h"

#ifndef TCSIM_SOURCE_DIR
#define TCSIM_SOURCE_DIR "."
#endif

namespace {

using namespace tcsim;
using Clock = std::chrono::steady_clock;

// Criteria that fail by construction; the reasons are in README.md.
const std::set<int> kKnownFailures = {1, 6};

// Pinned tolerances.
constexpr double kStabilizerSeconds = 1.0;
constexpr double kMatchingSeconds = 30.0;
constexpr double kInvariantSeconds = 600.0;
constexpr double kWilsonMultiples = 3.0;
constexpr double kComputationalBand[2] = {0.5e-3, 2.5e-3};
constexpr double kLossBand[2] = {0.2e-3, 1.2e-3};
constexpr double kEndpointSigmas = 2.0;
constexpr double kRSigmas = 2.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char *f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// 1. Stabilizer regressions and dot-error locality.
Outcome stabilizer_regressions() {
    const auto t0 = Clock::now();
    stab::RegressionReport report = stab::run_stabilizer_regressions();
    bool matrices = true;
    std::string final_eq2, final_eq3;
    for (const auto &s : report.steps) {
        if (s.labels.empty()) continue;
        matrices &= s.ok;
        if (s.name == "machine gun step 5") final_eq2 = s.actual;
        if (s.name == "fusion Y completion") final_eq3 = s.actual;
    }
    // Locality: every injection equivalent to a single-photon Pauli.
    stab::Circuit c = stab::machine_gun_circuit(4);
    int local = 0, total = 0;
    std::string nonlocal;
    for (size_t pos : stab::inter_emission_positions(c)) {
        for (char e : {'X', 'Y', 'Z'}) {
            total++;
            if (stab::equivalent_photon_error(c, e, pos, stab::ConjugationTable::standard(), 1)) {
                local++;
            } else {
                auto two = stab::equivalent_photon_error(c, e, pos, stab::ConjugationTable::standard(), 2);
                nonlocal += fmt(" %c@%zu->%s", e, pos, two ? two->str().c_str() : "none");
            }
        }
    }
    const double secs = seconds_since(t0);
    Outcome o;
    o.pass = matrices && final_eq2 == "XZI / ZXZ / IZX" && final_eq3 == "YZ / ZY" && local == total &&
             secs < kStabilizerSeconds;
    o.detail = fmt("matrices %s, final [%s], fusion [%s], weight-1 locality %d/%d%s, %.3fs",
                   matrices ? "match" : "differ", final_eq2.c_str(), final_eq3.c_str(), local, total,
                   nonlocal.empty() ? "" : (" (weight 2:" + nonlocal + ")").c_str(), secs);
    return o;
}

// Minimum-weight perfect matching by subset dynamic programming.
int64_t brute_force(const DistanceTable &t) {
    std::vector<int64_t> best(size_t{1} << t.n, INT64_MAX);
    best[0] = 0;
    for (size_t mask = 0; mask < best.size(); mask++) {
        if (best[mask] == INT64_MAX) continue;
        size_t i = 0;
        while (i < t.n && (mask >> i & 1)) i++;
        if (i == t.n) continue;
        for (size_t j = i + 1; j < t.n; j++) {
            if (mask >> j & 1) continue;
            size_t next = mask | (size_t{1} << i) | (size_t{1} << j);
            best[next] = std::min(best[next], best[mask] + t.at(i, j));
        }
    }
    return best.back();
}

// 2. Exact matching on decoder-generated instances with at most 10 defects.
Outcome matching_exactness() {
    const auto t0 = Clock::now();
    int instances = 0, equal = 0;
    uint64_t index = 0;
    while (instances < 1000) {
        Rng rng = derive_rng(2024, index++);
        const int L = 4 + static_cast<int>(rng() % 5);
        Lattice lat(L);
        ErrorConfig cfg = phenomenological_config(lat, 0.004 + 0.01 * uniform01(rng), 0.1 * uniform01(rng), rng);
        SupercellPartition part = build_supercells(lat, cfg.lost);
        auto groups = extract_syndrome(lat, cfg.flips ^ cfg.gauge, part);
        if (groups.empty() || groups.size() > 10) continue;
        DistanceTable t = defect_distances(lat, part, cfg.lost, groups);
        instances++;
        const int64_t expect = brute_force(t);
        bool ok = true;
        for (int k : {10, 0}) ok &= min_weight_perfect_matching(t, k).weight == expect;
        equal += ok;
    }
    const double secs = seconds_since(t0);
    return {equal == instances && secs < kMatchingSeconds,
            fmt("%d/%d instances equal brute force, %.1fs", equal, instances, secs)};
}

// 3. Even syndromes, closed residuals and worker-independent replay.
Outcome structural_invariants() {
    const auto t0 = Clock::now();
    std::vector<PointSpec> specs;
    for (auto [pc, pl] : {std::pair{1e-3, 0.0}, {3e-3, 0.0}, {0.0, 1e-3}, {2e-3, 5e-4}, {4e-3, 2e-3}}) {
        for (LossPolicy policy : {LossPolicy::depolarize, LossPolicy::herald}) {
            PointSpec s;
            s.d = 7;
            s.p_C = pc;
            s.p_L = pl;
            s.R = pl > 0 ? 4 : 7;
            s.policy = policy;
            specs.push_back(s);
        }
    }
    for (auto [pf, pl] : {std::pair{0.02, 0.0}, {0.05, 0.1}, {0.01, 0.2}, {0.5, 0.0}}) {
        PointSpec s;
        s.d = 7;
        s.mode = NoiseMode::phenomenological;
        s.p_flip = pf;
        s.p_lost = pl;
        specs.push_back(s);
    }
    const uint64_t per_spec = 100000 / specs.size() + 1;
    uint64_t trials = 0, odd = 0, open = 0, errors = 0, mismatched = 0;
    Lattice lat(7);
    for (size_t k = 0; k < specs.size(); k++) {
        RunOptions opts;
        opts.trials = per_spec;
        opts.seed = 300 + k;
        opts.workers = 1;
        auto one = run_trials(specs[k], opts);
        opts.workers = 8;
        auto eight = run_trials(specs[k], opts);
        mismatched += one != eight;
        for (uint64_t i = 0; i < per_spec; i++) {
            trials++;
            try {
                DecodeTrace trace;
                DecodeResult r = decode_trial(sample_trial(lat, specs[k], opts.seed, i), lat, {}, &trace);
                odd += r.defect_count % 2;
                open += cell_parities(lat, trace.residual).any();
                const uint8_t cls = r.cls.w[0] | r.cls.w[1] << 1 | r.cls.w[2] << 2;
                mismatched += cls != one[i].cls || r.defect_count != one[i].defects;
            } catch (const std::logic_error &) {
                errors++;
            }
        }
    }
    const double secs = seconds_since(t0);
    return {odd == 0 && open == 0 && errors == 0 && mismatched == 0 && secs < kInvariantSeconds,
            fmt("%llu trials: odd syndromes %llu, open residuals %llu, internal errors %llu, replay mismatches %llu, "
                "%.0fs",
                (unsigned long long)trials, (unsigned long long)odd, (unsigned long long)open,
                (unsigned long long)errors, (unsigned long long)mismatched, secs)};
}

// 4. Failure rate 7/8 at p_flip = 1/2.
Outcome half_flip_limit() {
    PointSpec s;
    s.d = 5;
    s.mode = NoiseMode::phenomenological;
    s.p_flip = 0.5;
    RunOptions opts;
    opts.trials = 10000;
    opts.seed = 4;
    PointEstimate e = run_point(s, opts);
    const double half = std::max(e.rate - e.ci.low, e.ci.high - e.rate);
    const double gap = std::abs(e.rate - 7.0 / 8.0);
    return {gap <= kWilsonMultiples * half,
            fmt("rate %.4f over %llu trials, |rate - 7/8| = %.4f, Wilson half-width %.4f", e.rate,
                (unsigned long long)e.trials, gap, half)};
}

cli::RunConfig repro(const char *name) { return cli::load_config(std::string(TCSIM_SOURCE_DIR) + "/repro/" + name); }

std::string describe(const ThresholdEstimate &e) {
    if (!e.found) return e.note;
    return fmt("p_th = %.4g +- %.2g (%zu crossings, bootstrap %d/200)", e.p_th, e.uncertainty, e.crossings.size(),
               e.bootstrap_found);
}

std::optional<cli::ThresholdRun> computational_run, loss_run;

const cli::ThresholdRun &computational() {
    if (!computational_run) computational_run = cli::run_threshold(repro("fig6a.cfg"));
    return *computational_run;
}

const cli::ThresholdRun &loss() {
    if (!loss_run) loss_run = cli::run_threshold(repro("fig6b.cfg"));
    return *loss_run;
}

// 5. Computational-axis threshold.
Outcome computational_threshold() {
    cli::RunConfig cfg = repro("fig6a.cfg");
    const auto &p = cfg.p_C;
    const bool spans = *std::min_element(p.begin(), p.end()) <= 0.5e-3 && *std::max_element(p.begin(), p.end()) >= 2e-3;
    const auto &e = computational().estimate;
    const bool in_band = e.found && e.p_th >= kComputationalBand[0] && e.p_th <= kComputationalBand[1];
    return {spans && in_band && cfg.trials >= 10000 && cfg.R == 7,
            describe(e) + fmt(", band [%.2g, %.2g]", kComputationalBand[0], kComputationalBand[1])};
}

// 6. Loss-axis threshold.
Outcome loss_threshold() {
    const auto &e = loss().estimate;
    const bool in_band = e.found && e.p_th >= kLossBand[0] && e.p_th <= kLossBand[1];
    return {in_band, describe(e) + fmt(", band [%.2g, %.2g]", kLossBand[0], kLossBand[1])};
}

// 7. Tradeoff curve through both extremes and three interior points.
Outcome tradeoff_curve() {
    cli::TradeoffRun run = cli::run_tradeoff(repro("fig7.cfg"), computational(), loss());
    if (!run.complete) return {false, "tradeoff incomplete: " + run.note};
    const auto &c = run.curve;
    const auto &ce = run.computational.estimate, &le = run.loss.estimate;
    const double c_gap = std::abs(c.eval(0) - ce.p_th);
    // Loss endpoint: where the curve meets p_C = 0, compared along p_L.
    double root = le.p_th;
    if (c.eval(c.p_L_max) <= 0 || std::abs(c.eval(c.p_L_max)) < 1e-15) {
        double lo = c.p_L_min, hi = c.p_L_max;
        for (int it = 0; it < 200; it++) {
            double mid = 0.5 * (lo + hi);
            (c.eval(mid) > 0 ? lo : hi) = mid;
        }
        root = 0.5 * (lo + hi);
    } else {
        // The fit stays positive up to the last point: extrapolate its root.
        const double slope = 2 * c.a * c.p_L_max + c.b;
        root = slope < 0 ? c.p_L_max - c.eval(c.p_L_max) / slope : INFINITY;
    }
    const double l_gap = std::abs(root - le.p_th);
    const bool ends = c_gap <= kEndpointSigmas * ce.uncertainty && l_gap <= kEndpointSigmas * le.uncertainty;
    const bool pass = c.points.size() == 5 && c.monotone_nonincreasing() && ends;
    std::string pts;
    for (const auto &p : c.points) pts += fmt(" (%.3g, %.3g)", p.p_L, p.p_C);
    return {pass, fmt("%zu points%s; p_C = %.4g p_L^2 %+.4g p_L %+.4g; monotone %s; computational end off by %.2g "
                      "(sigma %.2g), loss end off by %.2g (sigma %.2g)",
                      c.points.size(), pts.c_str(), c.a, c.b, c.c, c.monotone_nonincreasing() ? "yes" : "no",
                      c_gap, ce.uncertainty, l_gap, le.uncertainty)};
}

// 8. R = 8 gives no significant gain over R = 7 at small loss.
Outcome r_dependence() {
    cli::RunConfig cfg = repro("fig6a.cfg");
    cfg.p_L = {1e-4};
    cfg.p_C = {0.5e-3, 0.7e-3, 0.85e-3, 1e-3, 1.1e-3, 1.25e-3, 1.6e-3};
    cfg.axis = ThresholdAxis::p_C;
    cfg.seed = 8;
    cfg.R = 7;
    cli::ThresholdRun r7 = cli::run_threshold(cfg);
    cfg.R = 8;
    cli::ThresholdRun r8 = cli::run_threshold(cfg);
    const auto &a = r7.estimate, &b = r8.estimate;
    if (!a.found || !b.found) return {false, "R=7: " + describe(a) + "; R=8: " + describe(b)};
    const double sigma = std::hypot(a.uncertainty, b.uncertainty);
    const double gain = b.p_th - a.p_th;
    return {gain <= kRSigmas * sigma, fmt("p_L = 1e-4: R=7 %.4g +- %.2g, R=8 %.4g +- %.2g, gain %.2g (limit %.2g)",
                                          a.p_th, a.uncertainty, b.p_th, b.uncertainty, gain, kRSigmas * sigma)};
}

}  // namespace

int main(int argc, char **argv) {
    const std::map<int, std::pair<const char *, std::function<Outcome()>>> criteria = {
        {1, {"stabilizer regressions", stabilizer_regressions}},
        {2, {"matching exactness", matching_exactness}},
        {3, {"structural invariants", structural_invariants}},
        {4, {"half-flip limit", half_flip_limit}},
        {5, {"computational threshold", computational_threshold}},
        {6, {"loss threshold", loss_threshold}},
        {7, {"tradeoff curve", tradeoff_curve}},
        {8, {"R dependence", r_dependence}},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; i++) {
        std::string a = argv[i];
        if (a == "fast") {
            selected.insert(selected.end(), {1, 2, 3, 4});
        } else if (a == "slow") {
            selected.insert(selected.end(), {5, 6, 7, 8});
        } else {
            selected.push_back(std::stoi(a));
        }
    }
    if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8};

    int unexpected = 0;
    for (int k : selected) {
        auto it = criteria.find(k);
        if (it == criteria.end()) {
            std::fprintf(stderr, "no criterion %d\n", k);
            return 2;
        }
        Outcome o;
        try {
            o = it->second.second();
        } catch (const std::exception &e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const bool known = kKnownFailures.count(k) > 0;
        std::printf("criterion %d %s: %s%s | %s\n", k, it->second.first, o.pass ? "PASS" : "FAIL",
                    !o.pass && known ? " (known)" : "", o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass && !known) unexpected++;
    }
    return unexpected == 0 ? 0 : 1;
}
