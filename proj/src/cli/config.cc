#include <charconv>
#include <fstream>
#include <sstream>

#include "tcsim/cli.h"

namespace tcsim::cli {

namespace {

std::string_view trim(std::string_view s) {
    const char *ws = " \t\r\n";
    size_t b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    size_t e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view v) {
    std::vector<std::string_view> out;
    while (true) {
        size_t comma = v.find(',');
        out.push_back(trim(v.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        v.remove_prefix(comma + 1);
    }
    return out;
}

template <class T>
T parse_number(std::string_view text, std::string_view key, const std::string &where) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError(where + ": invalid value '" + std::string(text) + "' for " + std::string(key));
    }
    return value;
}

template <class T>
std::vector<T> parse_list(std::string_view text, std::string_view key, const std::string &where) {
    std::vector<T> out;
    if (trim(text).empty()) return out;
    for (auto item : split_list(text)) out.push_back(parse_number<T>(item, key, where));
    return out;
}

std::string fmt(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

template <class T>
std::string fmt_list(const std::vector<T> &v) {
    std::string out;
    for (size_t i = 0; i < v.size(); i++) {
        if (i) out += ",";
        if constexpr (std::is_floating_point_v<T>) {
            out += fmt(v[i]);
        } else {
            out += std::to_string(v[i]);
        }
    }
    return out;
}

void check_probs(const std::vector<double> &v, const char *key) {
    if (v.empty()) throw ConfigError(std::string(key) + ": empty grid");
    for (double p : v) {
        if (!(p >= 0 && p <= 1)) throw ConfigError(std::string(key) + ": probabilities must lie in [0,1]");
    }
}

}  // namespace

void apply_setting(RunConfig &cfg, std::string_view key, std::string_view value, const std::string &where) {
    value = trim(value);
    try {
        if (key == "mode") {
            cfg.mode = parse_noise_mode(value);
        } else if (key == "sizes") {
            cfg.sizes = parse_list<int>(value, key, where);
        } else if (key == "R") {
            cfg.R = parse_number<int>(value, key, where);
        } else if (key == "p_C") {
            cfg.p_C = parse_list<double>(value, key, where);
        } else if (key == "p_L") {
            cfg.p_L = parse_list<double>(value, key, where);
        } else if (key == "p_flip") {
            cfg.p_flip = parse_list<double>(value, key, where);
        } else if (key == "p_lost") {
            cfg.p_lost = parse_list<double>(value, key, where);
        } else if (key == "loss_policy") {
            cfg.loss_policy = parse_loss_policy(value);
        } else if (key == "trials") {
            cfg.trials = parse_number<uint64_t>(value, key, where);
        } else if (key == "seed") {
            cfg.seed = parse_number<uint64_t>(value, key, where);
        } else if (key == "workers") {
            cfg.workers = parse_number<int>(value, key, where);
        } else if (key == "output") {
            if (value.empty()) throw ConfigError(where + ": output must not be empty");
            cfg.output = std::string(value);
        } else if (key == "min_d") {
            cfg.min_d = parse_number<int>(value, key, where);
        } else if (key == "axis") {
            cfg.axis = parse_threshold_axis(value);
        } else if (key == "tradeoff_fractions") {
            cfg.tradeoff_fractions = parse_list<double>(value, key, where);
        } else if (key == "tradeoff_span") {
            cfg.tradeoff_span = parse_list<double>(value, key, where);
        } else if (key == "matching_neighbors") {
            cfg.matching_neighbors = parse_number<int>(value, key, where);
        } else if (key == "max_d") {
            cfg.max_d = parse_number<int>(value, key, where);
        } else {
            throw ConfigError(where + ": unknown key '" + std::string(key) + "'");
        }
    } catch (const std::invalid_argument &e) {
        throw ConfigError(where + ": " + e.what());
    }
}

void parse_config(RunConfig &cfg, std::string_view text, const std::string &source) {
    int line_no = 0;
    while (!text.empty()) {
        size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        line_no++;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const std::string where = source + ":" + std::to_string(line_no);
        size_t eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'key = value'");
        apply_setting(cfg, trim(line.substr(0, eq)), line.substr(eq + 1), where);
    }
}

RunConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    RunConfig cfg;
    parse_config(cfg, ss.str(), path);
    return cfg;
}

void apply_override(RunConfig &cfg, std::string_view assignment) {
    size_t eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("--set " + std::string(assignment) + ": expected key=value");
    }
    apply_setting(cfg, trim(assignment.substr(0, eq)), assignment.substr(eq + 1), "--set");
}

void RunConfig::validate() const {
    if (sizes.empty()) throw ConfigError("sizes: empty grid");
    for (int d : sizes) {
        if (d < 2) throw ConfigError("sizes: every size must be at least 2");
        if (d > max_d) throw ConfigError("sizes: d=" + std::to_string(d) + " exceeds max_d=" + std::to_string(max_d));
    }
    if (R < 0) throw ConfigError("R: must be non-negative");
    if (trials < 1) throw ConfigError("trials: must be at least 1");
    if (workers < 0) throw ConfigError("workers: must be non-negative");
    if (matching_neighbors < 0) throw ConfigError("matching_neighbors: must be non-negative");
    if (min_d < 2) throw ConfigError("min_d: must be at least 2");
    if (mode == NoiseMode::photonic) {
        check_probs(p_C, "p_C");
        check_probs(p_L, "p_L");
    } else {
        check_probs(p_flip, "p_flip");
        check_probs(p_lost, "p_lost");
    }
    for (double f : tradeoff_fractions) {
        if (!(f > 0 && f < 1)) throw ConfigError("tradeoff_fractions: values must lie in (0,1)");
    }
    for (double s : tradeoff_span) {
        if (!(s > 0)) throw ConfigError("tradeoff_span: values must be positive");
    }
}

std::vector<std::pair<std::string, std::string>> RunConfig::resolved() const {
    return {
        {"mode", std::string(to_string(mode))},
        {"sizes", fmt_list(sizes)},
        {"R", std::to_string(R)},
        {"p_C", fmt_list(p_C)},
        {"p_L", fmt_list(p_L)},
        {"p_flip", fmt_list(p_flip)},
        {"p_lost", fmt_list(p_lost)},
        {"loss_policy", std::string(to_string(loss_policy))},
        {"trials", std::to_string(trials)},
        {"seed", std::to_string(seed)},
        {"workers", std::to_string(workers)},
        {"output", output},
        {"min_d", std::to_string(min_d)},
        {"axis", std::string(to_string(axis))},
        {"tradeoff_fractions", fmt_list(tradeoff_fractions)},
        {"tradeoff_span", fmt_list(tradeoff_span)},
        {"matching_neighbors", std::to_string(matching_neighbors)},
        {"max_d", std::to_string(max_d)},
    };
}

RunOptions RunConfig::run_options() const {
    RunOptions o;
    o.trials = trials;
    o.seed = seed;
    o.workers = workers;
    o.max_d = max_d;
    o.decoder.matching_neighbors = matching_neighbors;
    return o;
}

std::vector<PointSpec> grid_points(const RunConfig &cfg) {
    cfg.validate();
    std::vector<PointSpec> out;
    for (int d : cfg.sizes) {
        if (cfg.mode == NoiseMode::photonic) {
            for (double c : cfg.p_C) {
                for (double l : cfg.p_L) {
                    PointSpec s;
                    s.d = d;
                    s.mode = cfg.mode;
                    s.p_C = c;
                    s.p_L = l;
                    s.R = cfg.R;
                    s.policy = cfg.loss_policy;
                    out.push_back(s);
                }
            }
        } else {
            for (double f : cfg.p_flip) {
                for (double l : cfg.p_lost) {
                    PointSpec s;
                    s.d = d;
                    s.mode = cfg.mode;
                    s.p_flip = f;
                    s.p_lost = l;
                    s.R = cfg.R;
                    out.push_back(s);
                }
            }
        }
    }
    return out;
}

}  // namespace tcsim::cli
