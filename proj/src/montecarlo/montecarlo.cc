#include "tcsim/montecarlo.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace tcsim {

namespace {

void check_spec(const PointSpec &spec, const RunOptions &opts) {
    if (spec.d < 2) throw std::invalid_argument("d must be at least 2");
    if (spec.d > opts.max_d) {
        throw std::invalid_argument("d=" + std::to_string(spec.d) + " exceeds max_d=" + std::to_string(opts.max_d));
    }
    if (opts.trials == 0) throw std::invalid_argument("trials must be at least 1");
}

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

ErrorConfig sample_trial(const Lattice &lat, const PointSpec &spec, uint64_t seed, uint64_t index) {
    Rng rng = derive_rng(seed, index);
    if (spec.mode == NoiseMode::phenomenological) return phenomenological_config(lat, spec.p_flip, spec.p_lost, rng);
    return sample_error_config(lat, PhysicalParams::identified(spec.p_C, spec.p_L, spec.R), rng, spec.policy);
}

std::vector<TrialOutcome> run_trials(const PointSpec &spec, const RunOptions &opts) {
    check_spec(spec, opts);
    const Lattice lat(spec.d);
    const bool photonic = spec.mode == NoiseMode::photonic;
    const PhysicalParams params = photonic ? PhysicalParams::identified(spec.p_C, spec.p_L, spec.R) : PhysicalParams{};
    const ChannelSampler sampler(lat, params, spec.policy);
    if (!photonic && !(spec.p_flip >= 0 && spec.p_flip <= 1 && spec.p_lost >= 0 && spec.p_lost <= 1)) {
        throw std::invalid_argument("p_flip and p_lost must lie in [0,1]");
    }

    std::vector<TrialOutcome> out(opts.trials);
    std::atomic<uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto work = [&] {
        try {
            while (true) {
                uint64_t i = next.fetch_add(1);
                if (i >= opts.trials) break;
                Rng rng = derive_rng(opts.seed, i);
                ErrorConfig cfg = photonic ? sampler.sample(rng)
                                           : phenomenological_config(lat, spec.p_flip, spec.p_lost, rng);
                DecodeResult r = decode_trial(cfg, lat, opts.decoder);
                out[i] = {static_cast<uint8_t>(r.cls.w[0] | r.cls.w[1] << 1 | r.cls.w[2] << 2), r.defect_count};
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = opts.trials;
        }
    };

    const int workers = static_cast<int>(std::min<uint64_t>(resolve_workers(opts.workers), opts.trials));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; w++) pool.emplace_back(work);
        for (auto &t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
    return out;
}

PointEstimate run_point(const PointSpec &spec, const RunOptions &opts) {
    std::vector<TrialOutcome> outcomes = run_trials(spec, opts);
    PointEstimate est;
    est.spec = spec;
    est.trials = opts.trials;
    est.seed = opts.seed;
    double defects = 0;
    for (const auto &o : outcomes) {
        est.failures += o.cls != 0;
        defects += o.defects;
    }
    est.rate = static_cast<double>(est.failures) / static_cast<double>(est.trials);
    est.ci = wilson_interval(est.failures, est.trials);
    est.mean_defects = defects / static_cast<double>(est.trials);
    return est;
}

std::vector<PointEstimate> sweep(std::vector<PointSpec> grid, const RunOptions &opts,
                                 const std::function<void(const PointEstimate &)> &progress) {
    if (grid.empty()) throw std::invalid_argument("empty sweep grid");
    auto key = [](const PointSpec &s) {
        return std::make_tuple(s.d, static_cast<int>(s.mode), s.R, s.p_C, s.p_L, s.p_flip, s.p_lost,
                               static_cast<int>(s.policy));
    };
    std::stable_sort(grid.begin(), grid.end(), [&](const PointSpec &a, const PointSpec &b) { return key(a) < key(b); });
    for (const auto &s : grid) check_spec(s, opts);
    std::vector<PointEstimate> out;
    out.reserve(grid.size());
    for (const auto &s : grid) {
        out.push_back(run_point(s, opts));
        if (progress) progress(out.back());
    }
    return out;
}

}  // namespace tcsim
