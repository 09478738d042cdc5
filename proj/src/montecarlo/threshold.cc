#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <Eigen/Dense>
#include <boost/random/binomial_distribution.hpp>

#include "tcsim/montecarlo.h"
#include "tcsim/rng.h"

namespace tcsim {

std::string_view to_string(ThresholdAxis a) {
    switch (a) {
        case ThresholdAxis::p_C: return "p_C";
        case ThresholdAxis::p_L: return "p_L";
        case ThresholdAxis::p_flip: return "p_flip";
        case ThresholdAxis::p_lost: return "p_lost";
    }
    return "?";
}

ThresholdAxis parse_threshold_axis(std::string_view s) {
    for (auto a : {ThresholdAxis::p_C, ThresholdAxis::p_L, ThresholdAxis::p_flip, ThresholdAxis::p_lost}) {
        if (s == to_string(a)) return a;
    }
    throw std::invalid_argument("unknown threshold axis '" + std::string(s) + "'");
}

double axis_value(const PointSpec &spec, ThresholdAxis a) {
    switch (a) {
        case ThresholdAxis::p_C: return spec.p_C;
        case ThresholdAxis::p_L: return spec.p_L;
        case ThresholdAxis::p_flip: return spec.p_flip;
        case ThresholdAxis::p_lost: return spec.p_lost;
    }
    return 0;
}

namespace {

struct Sample {
    double p;
    double rate;
    uint64_t failures, trials;
};
using Curves = std::map<int, std::vector<Sample>>;

// Least-squares quadratic in t = (p - centre) / scale over the `window`
// samples nearest to `centre`.
Eigen::Vector3d local_fit(const std::vector<Sample> &curve, double centre, double scale, int window) {
    std::vector<size_t> idx(curve.size());
    for (size_t i = 0; i < idx.size(); i++) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        return std::abs(curve[a].p - centre) < std::abs(curve[b].p - centre);
    });
    idx.resize(std::min<size_t>(std::max(window, 3), idx.size()));
    Eigen::MatrixXd A(idx.size(), 3);
    Eigen::VectorXd y(idx.size());
    for (size_t r = 0; r < idx.size(); r++) {
        double t = (curve[idx[r]].p - centre) / scale;
        A(r, 0) = 1;
        A(r, 1) = t;
        A(r, 2) = t * t;
        y(r) = curve[idx[r]].rate;
    }
    return A.colPivHouseholderQr().solve(y);
}

double poly(const Eigen::Vector3d &c, double t) { return c(0) + t * (c(1) + t * c(2)); }

std::vector<Crossing> crossings(const Curves &curves, int window) {
    std::vector<Crossing> out;
    for (auto i = curves.begin(); i != curves.end(); ++i) {
        for (auto j = std::next(i); j != curves.end(); ++j) {
            const auto &small = i->second, &large = j->second;
            std::vector<double> grid;
            for (const auto &s : small) grid.push_back(s.p);
            for (const auto &s : large) grid.push_back(s.p);
            std::sort(grid.begin(), grid.end());
            grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
            const double scale = grid.back() - grid.front();
            if (!(scale > 0)) continue;
            for (size_t k = 0; k + 1 < grid.size(); k++) {
                const double lo = grid[k], hi = grid[k + 1], centre = (lo + hi) / 2;
                Eigen::Vector3d diff = local_fit(large, centre, scale, window) - local_fit(small, centre, scale, window);
                double ta = (lo - centre) / scale, tb = (hi - centre) / scale;
                double ga = poly(diff, ta), gb = poly(diff, tb);
                if (!(ga < 0 && gb >= 0)) continue;
                for (int it = 0; it < 200; it++) {
                    double tm = (ta + tb) / 2;
                    if (poly(diff, tm) < 0) {
                        ta = tm;
                    } else {
                        tb = tm;
                    }
                }
                double t = (ta + tb) / 2;
                double slope = (diff(1) + 2 * diff(2) * t) / scale;
                out.push_back({i->first, j->first, centre + t * scale, std::max(slope, 0.0)});
            }
        }
    }
    return out;
}

bool combine(const std::vector<Crossing> &cs, double &p_th) {
    double wsum = 0, acc = 0;
    for (const auto &c : cs) {
        wsum += c.weight;
        acc += c.weight * c.p;
    }
    if (cs.empty()) return false;
    if (wsum > 0) {
        p_th = acc / wsum;
    } else {
        p_th = 0;
        for (const auto &c : cs) p_th += c.p / static_cast<double>(cs.size());
    }
    return true;
}

}  // namespace

ThresholdEstimate find_threshold(const std::vector<PointEstimate> &points, ThresholdAxis axis,
                                 const ThresholdOptions &opts) {
    Curves curves;
    for (const auto &pt : points) {
        if (pt.spec.d < opts.min_d) continue;
        curves[pt.spec.d].push_back({axis_value(pt.spec, axis), pt.rate, pt.failures, pt.trials});
    }
    if (curves.size() < 2) {
        throw std::invalid_argument("threshold needs at least two sizes with d >= " + std::to_string(opts.min_d));
    }
    ThresholdEstimate est;
    est.axis = axis;
    est.grid_low = INFINITY;
    est.grid_high = -INFINITY;
    for (auto &[d, curve] : curves) {
        std::sort(curve.begin(), curve.end(), [](const Sample &a, const Sample &b) { return a.p < b.p; });
        if (curve.size() < 3) {
            throw std::invalid_argument("threshold needs at least three grid points for d=" + std::to_string(d));
        }
        est.sizes.push_back(d);
        est.grid_low = std::min(est.grid_low, curve.front().p);
        est.grid_high = std::max(est.grid_high, curve.back().p);
    }

    est.crossings = crossings(curves, opts.window);
    est.found = combine(est.crossings, est.p_th);
    if (!est.found) {
        est.note = "no crossing found in grid";
        return est;
    }

    // Parametric bootstrap over the binomial failure counts.
    Rng rng(opts.seed);
    std::vector<double> boot;
    for (int b = 0; b < opts.bootstrap; b++) {
        Curves resampled = curves;
        for (auto &[d, curve] : resampled) {
            for (auto &s : curve) {
                boost::random::binomial_distribution<int64_t, double> draw(static_cast<int64_t>(s.trials), s.rate);
                s.failures = static_cast<uint64_t>(draw(rng));
                s.rate = static_cast<double>(s.failures) / static_cast<double>(s.trials);
            }
        }
        double p = 0;
        if (combine(crossings(resampled, opts.window), p)) boot.push_back(p);
    }
    est.bootstrap_found = static_cast<int>(boot.size());
    if (boot.size() >= 2) {
        double mean = 0;
        for (double p : boot) mean += p;
        mean /= static_cast<double>(boot.size());
        double var = 0;
        for (double p : boot) var += (p - mean) * (p - mean);
        est.uncertainty = std::sqrt(var / static_cast<double>(boot.size() - 1));
    }
    return est;
}

double TradeoffCurve::eval(double p_L) const {
    const double slack = 1e-12 * std::max(1.0, std::abs(p_L_max));
    if (p_L < p_L_min - slack || p_L > p_L_max + slack) {
        throw std::out_of_range("tradeoff curve evaluated outside the sampled range");
    }
    return c + p_L * (b + p_L * a);
}

bool TradeoffCurve::fault_tolerant(double p_C, double p_L) const { return p_C < eval(p_L); }

bool TradeoffCurve::monotone_nonincreasing(double tol) const {
    // The derivative is linear, so its endpoints bound it.
    return 2 * a * p_L_min + b <= tol && 2 * a * p_L_max + b <= tol;
}

TradeoffCurve fit_tradeoff(std::vector<TradeoffPoint> points) {
    if (points.size() < 3) throw std::invalid_argument("tradeoff fit needs at least three points");
    std::sort(points.begin(), points.end(), [](const auto &x, const auto &y) { return x.p_L < y.p_L; });
    TradeoffCurve curve;
    curve.points = points;
    curve.p_L_min = points.front().p_L;
    curve.p_L_max = points.back().p_L;
    const double scale = std::max(std::abs(curve.p_L_min), std::abs(curve.p_L_max));
    const double s = scale > 0 ? scale : 1.0;

    Eigen::MatrixXd A(points.size(), 3);
    Eigen::VectorXd y(points.size());
    for (size_t r = 0; r < points.size(); r++) {
        double t = points[r].p_L / s;
        A(r, 0) = 1;
        A(r, 1) = t;
        A(r, 2) = t * t;
        y(r) = points[r].p_C;
    }
    Eigen::Vector3d coef = A.colPivHouseholderQr().solve(y);
    curve.c = coef(0);
    curve.b = coef(1) / s;
    curve.a = coef(2) / (s * s);
    for (const auto &p : points) curve.residuals.push_back(p.p_C - (curve.c + p.p_L * (curve.b + p.p_L * curve.a)));
    return curve;
}

}  // namespace tcsim
