#include "tcsim/channel.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tcsim {

std::string_view to_string(LossPolicy p) { return p == LossPolicy::depolarize ? "depolarize" : "herald"; }
std::string_view to_string(NoiseMode m) { return m == NoiseMode::photonic ? "photonic" : "phenomenological"; }

LossPolicy parse_loss_policy(std::string_view s) {
    if (s == "depolarize") return LossPolicy::depolarize;
    if (s == "herald") return LossPolicy::herald;
    throw std::invalid_argument("unknown loss policy '" + std::string(s) + "'");
}

NoiseMode parse_noise_mode(std::string_view s) {
    if (s == "photonic") return NoiseMode::photonic;
    if (s == "phenomenological") return NoiseMode::phenomenological;
    throw std::invalid_argument("unknown mode '" + std::string(s) + "'");
}

PhysicalParams PhysicalParams::identified(double p_C, double p_L, int R) {
    PhysicalParams p{p_C, p_C, p_C, p_L, p_L, R};
    p.validate();
    return p;
}

void PhysicalParams::validate() const {
    auto check = [](double v, const char *name) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::invalid_argument(std::string(name) + " must lie in [0,1]");
        }
    };
    check(p1, "p1");
    check(p2, "p2");
    check(p2_prime, "p2_prime");
    check(p_dot, "p_dot");
    check(p_det, "p_det");
    if (R < 0) throw std::invalid_argument("R must be non-negative");
}

double link_success_prob(int R) {
    if (R < 0) throw std::invalid_argument("R must be non-negative");
    return 1.0 - std::ldexp(1.0, -R);
}

double effective_flip_prob(QubitRole role, const PhysicalParams &params) {
    const int photons = role.photons(params.R);
    const int links = params.R > 0 ? role.fusion_bonds : 0;
    const double single = 2.0 / 3.0, pair = 8.0 / 15.0;
    // Product of (1 - 2e) over all events.
    double bias = std::pow((1 - 2 * single * params.p1) * (1 - 2 * pair * params.p2), photons);
    bias *= std::pow(1 - 2 * pair * params.p2_prime, links);
    bias *= 1 - 2 * single * params.p1;
    return 0.5 * (1 - bias);
}

double effective_loss_prob(QubitRole role, const PhysicalParams &params) {
    const double keep = (1 - params.p_dot) * (1 - params.p_det);
    return 1 - std::pow(keep, role.photons(params.R));
}

QubitChannel qubit_channel(QubitRole role, const PhysicalParams &params) {
    return {effective_flip_prob(role, params), effective_loss_prob(role, params), 1 - link_success_prob(params.R)};
}

void ErrorConfig::check() const {
    BitVector overlap = flips;
    BitVector escaped = gauge;
    for (size_t w = 0; w < overlap.num_words(); w++) {
        overlap.data()[w] &= lost.data()[w];
        escaped.data()[w] &= ~lost.data()[w];
    }
    if (overlap.any()) throw std::logic_error("flip recorded on a lost face");
    if (escaped.any()) throw std::logic_error("gauge bit on a face that is not lost");
}

ChannelSampler::ChannelSampler(const Lattice &lat, const PhysicalParams &params, LossPolicy policy)
    : lat_(&lat), policy_(policy) {
    params.validate();
    for (int a = 0; a < 3; a++) {
        QubitRole role = lat.role(static_cast<Axis>(a));
        channels_[a] = qubit_channel(role, params);
        double link = 1 - std::pow(link_success_prob(params.R), role.fusion_bonds);
        double photon = (1 - link) * channels_[a].p_lost;
        double flip = (1 - link) * (1 - channels_[a].p_lost) * channels_[a].p_flip;
        cuts_[a] = {link, link + photon, link + photon + flip};
    }
}

ErrorConfig ChannelSampler::sample(Rng &rng) const {
    const uint32_t n = lat_->num_faces();
    ErrorConfig cfg(n);
    cfg.mode = NoiseMode::photonic;
    for (uint32_t f = 0; f < n; f++) {
        const Cut &cut = cuts_[f % 3];
        double u = uniform01(rng);
        if (u >= cut.flipped) continue;
        if (u < cut.link_lost) {
            cfg.lost.set(f, true);
            cfg.gauge.set(f, coin(rng));
        } else if (u < cut.photon_lost) {
            if (policy_ == LossPolicy::herald) {
                cfg.lost.set(f, true);
                cfg.gauge.set(f, coin(rng));
            } else {
                cfg.depolarized.set(f, true);
                cfg.flips.set(f, coin(rng));
            }
        } else {
            cfg.flips.set(f, true);
        }
    }
    return cfg;
}

ErrorConfig sample_error_config(const Lattice &lat, const PhysicalParams &params, Rng &rng, LossPolicy policy) {
    return ChannelSampler(lat, params, policy).sample(rng);
}

ErrorConfig phenomenological_config(const Lattice &lat, double p_flip, double p_lost, Rng &rng) {
    if (!(p_flip >= 0 && p_flip <= 1) || !(p_lost >= 0 && p_lost <= 1)) {
        throw std::invalid_argument("probabilities must lie in [0,1]");
    }
    const uint32_t n = lat.num_faces();
    ErrorConfig cfg(n);
    cfg.mode = NoiseMode::phenomenological;
    const double flip_cut = p_lost + (1 - p_lost) * p_flip;
    for (uint32_t f = 0; f < n; f++) {
        double u = uniform01(rng);
        if (u < p_lost) {
            cfg.lost.set(f, true);
            cfg.gauge.set(f, coin(rng));
        } else if (u < flip_cut) {
            cfg.flips.set(f, true);
        }
    }
    return cfg;
}

std::string channel_csv(const Lattice &lat, const PhysicalParams &params) {
    std::ostringstream os;
    os.precision(17);
    os << "face,p_flip,p_lost\n";
    for (uint32_t f = 0; f < lat.num_faces(); f++) {
        QubitRole role = lat.role(f);
        double link = 1 - std::pow(link_success_prob(params.R), role.fusion_bonds);
        double lost = link + (1 - link) * effective_loss_prob(role, params);
        os << f << "," << effective_flip_prob(role, params) << "," << lost << "\n";
    }
    return os.str();
}

}  // namespace tcsim
