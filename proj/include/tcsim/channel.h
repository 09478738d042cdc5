#pragma once

// Photonic noise model: maps per-photon depolarizing and loss events onto
// per-face Z-flip and loss probabilities of the cluster, and samples error
// configurations over a lattice.

#include <string>
#include <string_view>

#include "tcsim/bitvec.h"
#include "tcsim/lattice.h"
#include "tcsim/rng.h"

namespace tcsim {

struct PhysicalParams {
    double p1 = 0;        // single-qubit depolarizing: faulty Hadamard and faulty measurement
    double p2 = 0;        // two-qubit depolarizing: emission CNOT
    double p2_prime = 0;  // two-qubit depolarizing: successful fusion
    double p_dot = 0;     // photon lost at emission
    double p_det = 0;     // photon lost at detection
    int R = 7;            // fusion attempts per link

    /// p1 = p2 = p2' = p_C and p_dot = p_det = p_L.
    static PhysicalParams identified(double p_C, double p_L, int R);

    /// Throws std::invalid_argument on probabilities outside [0,1] or R < 0.
    void validate() const;
};

/// What a lost photon does to its redundantly encoded qubit.
///  - depolarize: the block is left maximally mixed (Z with probability 1/2)
///    and the loss is not reported to the decoder.
///  - herald: the face is marked lost and the decoder merges its cells.
/// Link failures are heralded by the fusion detectors under both policies.
enum class LossPolicy { depolarize, herald };
enum class NoiseMode { photonic, phenomenological };

std::string_view to_string(LossPolicy p);
std::string_view to_string(NoiseMode m);
LossPolicy parse_loss_policy(std::string_view s);
NoiseMode parse_noise_mode(std::string_view s);

/// 1 - 2^-R. Throws for R < 0.
double link_success_prob(int R);

/// Z-flip probability of one face qubit, XOR-accumulating independent
/// events: per photon a Hadamard (Z action 2p1/3) and an emission CNOT (Z
/// action 8p2/15), per formed link a fusion (8p2'/15), and the final
/// measurement (2p1/3).
double effective_flip_prob(QubitRole role, const PhysicalParams &params);

/// Probability that at least one photon of the block is lost:
/// 1 - ((1 - p_dot)(1 - p_det))^photons.
double effective_loss_prob(QubitRole role, const PhysicalParams &params);

struct QubitChannel {
    double p_flip = 0;
    double p_lost = 0;
    double p_linkfail = 0;  // per bond, = 1 - link_success_prob(R)
};

QubitChannel qubit_channel(QubitRole role, const PhysicalParams &params);

struct ErrorConfig {
    NoiseMode mode = NoiseMode::photonic;
    BitVector flips;        // Z flips; never set on lost faces
    BitVector lost;         // heralded losses
    BitVector gauge;        // Z state of the maximally mixed lost qubits (subset of lost)
    BitVector depolarized;  // unheralded photon losses (depolarize policy), for audit

    explicit ErrorConfig(size_t num_faces = 0)
        : flips(num_faces), lost(num_faces), gauge(num_faces), depolarized(num_faces) {}

    /// Throws std::logic_error if flips and lost overlap or gauge escapes lost.
    void check() const;
};

/// Per-axis thresholds precomputed once per (lattice, params, policy) so
/// that sampling costs one uniform draw per face plus a coin per loss.
class ChannelSampler {
   public:
    ChannelSampler(const Lattice &lat, const PhysicalParams &params, LossPolicy policy);

    ErrorConfig sample(Rng &rng) const;
    const QubitChannel &channel(Axis a) const { return channels_[static_cast<int>(a)]; }

   private:
    struct Cut {
        double link_lost;    // u below: a bond failed
        double photon_lost;  // u below: a photon was lost
        double flipped;      // u below: Z flip
    };
    const Lattice *lat_;
    LossPolicy policy_;
    QubitChannel channels_[3];
    Cut cuts_[3];
};

/// One photonic sample: per face (1) any of its bonds failing marks it
/// lost, else (2) photon loss per the policy, else (3) a flip.
ErrorConfig sample_error_config(const Lattice &lat, const PhysicalParams &params, Rng &rng,
                                LossPolicy policy = LossPolicy::depolarize);

/// Calibration mode: each face lost with p_lost, else flipped with p_flip.
ErrorConfig phenomenological_config(const Lattice &lat, double p_flip, double p_lost, Rng &rng);

/// "face,p_flip,p_lost" rows (p_lost includes link failures).
std::string channel_csv(const Lattice &lat, const PhysicalParams &params);

}  // namespace tcsim
