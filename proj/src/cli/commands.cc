#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <spdlog/spdlog.h>
#include <unistd.h>

#include "json.hpp"

#include "tcsim/cli.h"
#include "tcsim/rng.h"

#ifndef TCSIM_VERSION
#define TCSIM_VERSION "dev"
#endif

namespace tcsim::cli {

using nlohmann::json;

namespace {

std::string num(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

json config_json(const RunConfig &cfg) {
    json j = json::object();
    for (const auto &[k, v] : cfg.resolved()) j[k] = v;
    return j;
}

json software_json() { return {{"name", "tcsim"}, {"version", TCSIM_VERSION}, {"rng", kRngName}}; }

std::string out_path(const RunConfig &cfg, const std::string &name) {
    return (std::filesystem::path(cfg.output) / name).string();
}

void log_point(const PointEstimate &p) {
    spdlog::info("d={} p_C={} p_L={} p_flip={} p_lost={}: {}/{} failures (rate {:.4f}, {:.1f} defects/trial)",
                 p.spec.d, p.spec.p_C, p.spec.p_L, p.spec.p_flip, p.spec.p_lost, p.failures, p.trials, p.rate,
                 p.mean_defects);
}

json threshold_json(const ThresholdRun &run) {
    const auto &e = run.estimate;
    json crossings = json::array();
    for (const auto &c : e.crossings) {
        crossings.push_back({{"d_small", c.d_small}, {"d_large", c.d_large}, {"p", c.p}, {"weight", c.weight}});
    }
    json j = {
        {"axis", std::string(to_string(e.axis))},
        {"fixed_value", run.fixed_value},
        {"found", e.found},
        {"sizes", e.sizes},
        {"grid", {e.grid_low, e.grid_high}},
        {"crossings", crossings},
        {"bootstrap_found", e.bootstrap_found},
    };
    if (e.found) {
        j["p_th"] = e.p_th;
        j["uncertainty"] = e.uncertainty;
    } else {
        j["p_th"] = nullptr;
        j["uncertainty"] = nullptr;
        j["note"] = e.note;
    }
    return j;
}

void write_summary(const RunConfig &cfg, const std::string &command, double seconds, const json &extra) {
    json j = {{"command", command}, {"config", config_json(cfg)}, {"software", software_json()},
              {"wall_time_s", seconds}};
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    write_file_atomic(out_path(cfg, "run_summary.json"), j.dump(2) + "\n");
}

// Fails before any sampling if the output directory cannot be used.
void prepare_output(const RunConfig &cfg) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.output, ec);
    if (ec || !fs::is_directory(cfg.output)) {
        throw IoError("cannot create output directory '" + cfg.output + "'" + (ec ? ": " + ec.message() : ""));
    }
    if (::access(cfg.output.c_str(), W_OK) != 0) throw IoError("output directory '" + cfg.output + "' is not writable");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::string points_csv(const RunConfig &cfg, const std::vector<PointEstimate> &points) {
    std::ostringstream os;
    os << "# tcsim " << TCSIM_VERSION << "\n";
    os << "# rng=" << kRngName << "\n";
    for (const auto &[k, v] : cfg.resolved()) os << "# " << k << "=" << v << "\n";
    os << "d,p_C,p_L,R,mode,trials,failures,rate,ci_low,ci_high,seed\n";
    for (const auto &p : points) {
        const bool photonic = p.spec.mode == NoiseMode::photonic;
        os << p.spec.d << "," << num(photonic ? p.spec.p_C : p.spec.p_flip) << ","
           << num(photonic ? p.spec.p_L : p.spec.p_lost) << "," << p.spec.R << "," << to_string(p.spec.mode) << ","
           << p.trials << "," << p.failures << "," << num(p.rate) << "," << num(p.ci.low) << "," << num(p.ci.high)
           << "," << p.seed << "\n";
    }
    return os.str();
}

void write_file_atomic(const std::string &path, const std::string &content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::path target(path);
    if (target.has_parent_path()) {
        fs::create_directories(target.parent_path(), ec);
        if (ec) throw IoError("cannot create directory '" + target.parent_path().string() + "': " + ec.message());
    }
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw IoError("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename into '" + path + "'");
    }
}

ThresholdRun run_threshold(const RunConfig &cfg) {
    cfg.validate();
    ThresholdRun run;
    const bool photonic = cfg.mode == NoiseMode::photonic;
    const bool valid_axis = photonic ? (cfg.axis == ThresholdAxis::p_C || cfg.axis == ThresholdAxis::p_L)
                                     : (cfg.axis == ThresholdAxis::p_flip || cfg.axis == ThresholdAxis::p_lost);
    if (!valid_axis) throw ConfigError("axis: " + std::string(to_string(cfg.axis)) + " does not fit the mode");
    const std::vector<double> *other = nullptr;
    const char *other_name = "";
    switch (cfg.axis) {
        case ThresholdAxis::p_C: other = &cfg.p_L, other_name = "p_L"; break;
        case ThresholdAxis::p_L: other = &cfg.p_C, other_name = "p_C"; break;
        case ThresholdAxis::p_flip: other = &cfg.p_lost, other_name = "p_lost"; break;
        case ThresholdAxis::p_lost: other = &cfg.p_flip, other_name = "p_flip"; break;
    }
    if (other->size() != 1) {
        throw ConfigError(std::string(other_name) + ": a threshold run needs exactly one value off the axis");
    }
    run.fixed_value = other->front();
    run.points = sweep(grid_points(cfg), cfg.run_options(), log_point);
    ThresholdOptions topts;
    topts.min_d = cfg.min_d;
    try {
        run.estimate = find_threshold(run.points, cfg.axis, topts);
    } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("threshold: ") + e.what());
    }
    if (run.estimate.found) {
        spdlog::info("{} threshold at {}={}: {} +- {}", to_string(cfg.axis), other_name, run.fixed_value,
                     run.estimate.p_th, run.estimate.uncertainty);
    } else {
        spdlog::warn("{} threshold at {}={}: {}", to_string(cfg.axis), other_name, run.fixed_value,
                     run.estimate.note);
    }
    return run;
}

TradeoffRun run_tradeoff(const RunConfig &cfg, const std::optional<ThresholdRun> &computational,
                         const std::optional<ThresholdRun> &loss) {
    cfg.validate();
    if (cfg.mode != NoiseMode::photonic) throw ConfigError("mode: tradeoff needs photonic mode");
    TradeoffRun run;

    if (computational) {
        run.computational = *computational;
    } else {
        RunConfig c = cfg;
        c.p_L = {0};
        c.axis = ThresholdAxis::p_C;
        run.computational = run_threshold(c);
    }
    if (loss) {
        run.loss = *loss;
    } else {
        RunConfig c = cfg;
        c.p_C = {0};
        c.axis = ThresholdAxis::p_L;
        run.loss = run_threshold(c);
    }
    const auto &ce = run.computational.estimate, &le = run.loss.estimate;
    if (!ce.found || !le.found) {
        run.note = "an extreme threshold was not found";
        return run;
    }

    std::vector<TradeoffPoint> pts;
    pts.push_back({0.0, ce.p_th, 0.0, ce.uncertainty});
    for (double f : cfg.tradeoff_fractions) {
        RunConfig c = cfg;
        const double p_L = f * le.p_th;
        const double guess = ce.p_th * (1 - f);
        c.p_L = {p_L};
        c.p_C.clear();
        for (double s : cfg.tradeoff_span) c.p_C.push_back(guess * s);
        c.axis = ThresholdAxis::p_C;
        run.interior.push_back(run_threshold(c));
        const auto &e = run.interior.back().estimate;
        if (e.found) pts.push_back({p_L, e.p_th, 0.0, e.uncertainty});
    }
    pts.push_back({le.p_th, 0.0, le.uncertainty, 0.0});
    if (pts.size() < 3) {
        run.note = "fewer than three threshold points";
        return run;
    }
    if (pts.size() < cfg.tradeoff_fractions.size() + 2) run.note = "some interior thresholds were not found";
    run.curve = fit_tradeoff(pts);
    run.complete = true;
    return run;
}

int cmd_sample(const RunConfig &cfg, std::ostream &out, uint64_t trial, const std::vector<uint32_t> &inject,
               const std::string &dump_path) {
    cfg.validate();
    PointSpec spec = grid_points(cfg).front();
    const Lattice lat(spec.d);
    ErrorConfig ec = sample_trial(lat, spec, cfg.seed, trial);
    for (uint32_t f : inject) {
        if (f >= lat.num_faces()) {
            throw ConfigError("--inject face=" + std::to_string(f) + ": lattice has " +
                              std::to_string(lat.num_faces()) + " faces");
        }
        ec.lost.set(f, false);
        ec.gauge.set(f, false);
        ec.flips.flip(f);
    }
    DecodeTrace trace;
    DecodeResult res = decode_trial(ec, lat, cfg.run_options().decoder, &trace);

    if (dump_path.empty()) {
        out << "d=" << spec.d << " trial=" << trial << " defects=" << res.defect_count
            << " class=" << res.cls.str() << " failed=" << (res.failed ? "true" : "false") << "\n";
        return 0;
    }

    json supercells = json::array(), defects = json::array();
    for (const auto &m : trace.partition.members) {
        if (m.size() > 1) supercells.push_back(m);
    }
    for (uint32_t g : trace.syndrome) defects.push_back({{"group", g}, {"cells", trace.partition.members[g]}});
    json matching = json::array();
    for (auto [a, b] : trace.matching) matching.push_back({a, b});
    json j = {
        {"config", config_json(cfg)},
        {"software", software_json()},
        {"trial", trial},
        {"d", spec.d},
        {"injected", inject},
        {"flips", ec.flips.ones()},
        {"lost", ec.lost.ones()},
        {"gauge", ec.gauge.ones()},
        {"depolarized", ec.depolarized.ones()},
        {"supercells", supercells},
        {"syndrome", defects},
        {"matching", matching},
        {"matching_weight", trace.matching_weight},
        {"correction", trace.correction.ones()},
        {"residual", trace.residual.ones()},
        {"class", res.cls.w},
        {"failed", res.failed},
    };
    const std::string text = j.dump(2) + "\n";
    if (dump_path == "-") {
        out << text;
    } else {
        write_file_atomic(dump_path, text);
    }
    return 0;
}

int cmd_sweep(const RunConfig &cfg) {
    cfg.validate();
    prepare_output(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    auto points = sweep(grid_points(cfg), cfg.run_options(), log_point);
    write_file_atomic(out_path(cfg, "sweep.csv"), points_csv(cfg, points));
    write_summary(cfg, "sweep", seconds_since(t0), {{"points", points.size()}});
    return 0;
}

int cmd_threshold(const RunConfig &cfg) {
    cfg.validate();
    prepare_output(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    ThresholdRun run = run_threshold(cfg);
    write_file_atomic(out_path(cfg, "points.csv"), points_csv(cfg, run.points));
    json j = {{"config", config_json(cfg)}, {"software", software_json()}, {"threshold", threshold_json(run)}};
    write_file_atomic(out_path(cfg, "threshold.json"), j.dump(2) + "\n");
    write_summary(cfg, "threshold", seconds_since(t0), {{"found", run.estimate.found}});
    return 0;
}

int cmd_tradeoff(const RunConfig &cfg) {
    cfg.validate();
    prepare_output(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    TradeoffRun run = run_tradeoff(cfg);

    std::vector<PointEstimate> all = run.computational.points;
    all.insert(all.end(), run.loss.points.begin(), run.loss.points.end());
    for (const auto &r : run.interior) all.insert(all.end(), r.points.begin(), r.points.end());
    write_file_atomic(out_path(cfg, "points.csv"), points_csv(cfg, all));

    json thresholds = json::array();
    thresholds.push_back(threshold_json(run.computational));
    for (const auto &r : run.interior) thresholds.push_back(threshold_json(r));
    thresholds.push_back(threshold_json(run.loss));
    json j = {{"config", config_json(cfg)},
              {"software", software_json()},
              {"thresholds", thresholds},
              {"complete", run.complete}};
    if (!run.note.empty()) j["note"] = run.note;
    if (run.complete) {
        const auto &c = run.curve;
        json pts = json::array();
        for (size_t i = 0; i < c.points.size(); i++) {
            pts.push_back({{"p_L", c.points[i].p_L},
                           {"p_C", c.points[i].p_C},
                           {"sigma_p_L", c.points[i].sigma_p_L},
                           {"sigma_p_C", c.points[i].sigma_p_C},
                           {"residual", c.residuals[i]}});
        }
        j["fit"] = {{"a", c.a}, {"b", c.b}, {"c", c.c}, {"p_L_range", {c.p_L_min, c.p_L_max}},
                    {"monotone_nonincreasing", c.monotone_nonincreasing()}, {"points", pts}};

        std::ostringstream csv;
        csv << "# tcsim " << TCSIM_VERSION << "\n";
        csv << "# p_C = a p_L^2 + b p_L + c with a=" << num(c.a) << " b=" << num(c.b) << " c=" << num(c.c) << "\n";
        csv << "p_L,p_C\n";
        const int samples = 101;
        for (int i = 0; i < samples; i++) {
            double p = c.p_L_min + (c.p_L_max - c.p_L_min) * i / (samples - 1);
            csv << num(p) << "," << num(c.eval(p)) << "\n";
        }
        write_file_atomic(out_path(cfg, "tradeoff_curve.csv"), csv.str());
    }
    write_file_atomic(out_path(cfg, "tradeoff.json"), j.dump(2) + "\n");
    write_summary(cfg, "tradeoff", seconds_since(t0), {{"complete", run.complete}});
    return 0;
}

int cmd_lattice_dump(std::ostream &out, int L, int R) {
    Lattice lat = [&] {
        try {
            return Lattice(L);
        } catch (const std::invalid_argument &e) {
            throw ConfigError(e.what());
        }
    }();
    if (R < 0) throw ConfigError("R must be non-negative");
    out << "# photons per face at R=" << R << ": x " << lat.role(Axis::X).photons(R) << ", y "
        << lat.role(Axis::Y).photons(R) << ", z " << lat.role(Axis::Z).photons(R) << "\n";
    out << lat.dump();
    return 0;
}

}  // namespace tcsim::cli
