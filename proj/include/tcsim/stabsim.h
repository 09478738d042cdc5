#pragma once

// Stabilizer-tableau engine for the machine-gun and fusion-gate
// constructions. Only the stabilizer generators are stored (no
// destabilizers); deterministic measurement outcomes are recovered by GF(2)
// elimination, which is cheap at the handful of qubits these checks use.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tcsim/bitvec.h"
#include "tcsim/rng.h"

namespace tcsim::stab {

enum class Gate { H, CNOT, K };

/// Accepts "H", "CNOT"/"CX" and "K". Throws std::invalid_argument otherwise.
Gate parse_gate(std::string_view name);
std::string_view gate_name(Gate g);

/// i^phase times a tensor product of I/X/Y/Z. Y is stored as x=z=1 (not XZ).
class PauliOperator {
   public:
    explicit PauliOperator(size_t num_qubits = 0) : x_(num_qubits), z_(num_qubits) {}

    /// Parses an optional sign ("+", "-", "i", "-i") followed by one of
    /// I/X/Y/Z (or '_' for I) per qubit.
    static PauliOperator parse(std::string_view text);
    static PauliOperator single(size_t num_qubits, size_t qubit, char pauli);

    size_t size() const { return x_.size(); }
    char at(size_t q) const;
    void set(size_t q, char pauli);

    /// Exponent of i, in 0..3.
    unsigned phase() const { return phase_; }
    void set_phase(unsigned p) { phase_ = p & 3; }
    bool hermitian() const { return (phase_ & 1) == 0; }
    int sign() const { return phase_ == 0 ? 1 : -1; }  // only meaningful when hermitian()

    bool is_identity() const { return !x_.any() && !z_.any(); }
    size_t weight() const;
    bool commutes(const PauliOperator &other) const;
    bool same_up_to_phase(const PauliOperator &other) const { return x_ == other.x_ && z_ == other.z_; }

    /// this <- this * rhs.
    PauliOperator &operator*=(const PauliOperator &rhs);
    friend PauliOperator operator*(PauliOperator a, const PauliOperator &b) { return a *= b; }

    std::string str(bool with_sign = true) const;

    const BitVector &xs() const { return x_; }
    const BitVector &zs() const { return z_; }

    void erase_qubit(size_t q);
    void append_qubit();

    bool operator==(const PauliOperator &other) const = default;

   private:
    BitVector x_, z_;
    uint8_t phase_ = 0;
};

/// Conjugation action U P U^dagger of the single-qubit gates H and K, given
/// as the signed images of X and Z. The image of Y follows from Y = iXZ.
///
/// K is the phase-type correction left by a Y-basis link completion. Its
/// defining relations are K Y K^dagger = X and K Z K^dagger = Z. Unitarity
/// then leaves X -> +Y or X -> -Y; we fix X -> -Y so that K^2 conjugates
/// like Z (X -> -X), i.e. K acts as S^dagger.
struct ConjugationTable {
    PauliOperator h_x, h_z;
    PauliOperator k_x, k_z;

    static const ConjugationTable &standard();
};

struct GateOp {
    Gate gate;
    std::array<size_t, 2> qubits{};  // positional; qubits[1] used by CNOT only
};
using Circuit = std::vector<GateOp>;

/// p <- U p U^dagger for a gate acting on positional qubits.
void conjugate(PauliOperator &p, const GateOp &op,
               const ConjugationTable &table = ConjugationTable::standard());

struct MeasurementRecord {
    PauliOperator measured_operator;
    bool outcome = false;  // 1 means the -1 eigenvalue
    bool deterministic = false;
};

/// Enables generator commutativity/independence checks after every tableau
/// mutation. Off by default; the test binaries switch it on.
bool &paranoid_checks();

class Tableau {
   public:
    /// |0...0>, generators Z_1..Z_n, labels 1..n.
    static Tableau computational(size_t n);

    /// Validates commutativity, independence, hermiticity and count.
    Tableau(std::vector<PauliOperator> generators, std::vector<int> labels);

    /// Builds a tableau from rows like "XZI" with labels 1..n.
    static Tableau from_rows(std::span<const std::string_view> rows, std::vector<int> labels = {});

    size_t num_qubits() const { return labels_.size(); }
    const std::vector<PauliOperator> &generators() const { return gens_; }
    const std::vector<int> &labels() const { return labels_; }
    bool has_label(int label) const;
    size_t index_of(int label) const;

    /// Pauli over the current qubits from (label, pauli) pairs.
    PauliOperator pauli(std::initializer_list<std::pair<int, char>> factors, bool negative = false) const;

    /// Appends a fresh qubit in |0>; returns its label (max label + 1 unless given).
    int append_qubit(std::optional<int> label = std::nullopt);

    void apply(Gate g, std::span<const int> target_labels);
    void apply(Gate g, int label) { apply(g, std::span<const int>(&label, 1)); }
    void apply(Gate g, int control, int target) {
        const int t[2] = {control, target};
        apply(g, std::span<const int>(t, 2));
    }
    void apply(const GateOp &op);  // positional

    /// Conjugates the state by a Pauli (flips signs of anticommuting generators).
    void apply_pauli(const PauliOperator &p);

    MeasurementRecord measure(const PauliOperator &op, std::optional<bool> forced_outcome = std::nullopt,
                              Rng *rng = nullptr);

    /// Removes a qubit that is in a product state with the rest (for
    /// example right after a single-qubit measurement).
    void discard(int label);

    /// +1 or -1 if that multiple of op is in the group, nullopt otherwise.
    std::optional<int> sign_of(const PauliOperator &op) const;
    bool contains(const PauliOperator &op) const;

    void check_invariants() const;

    /// Rows like "XZI" separated by " / "; negative rows prefixed with '-'.
    std::string str() const;

    void set_conjugation_table(const ConjugationTable *table) { table_ = table; }
    const ConjugationTable &conjugation_table() const { return *table_; }

   private:
    Tableau() = default;
    void after_mutation() const;

    std::vector<PauliOperator> gens_;
    std::vector<int> labels_;
    const ConjugationTable *table_ = &ConjugationTable::standard();
};

/// Mutual containment with exact signs. Throws std::invalid_argument if the
/// label sequences differ.
bool groups_equal(const Tableau &a, const Tableau &b);

/// GF(2) span membership of op among `ops`, ignoring phases.
bool in_span(std::span<const PauliOperator> ops, const PauliOperator &op);

/// A Pauli P with P a P^dagger = b. The two tableaux must share labels and
/// the same group up to signs (std::invalid_argument otherwise).
PauliOperator pauli_frame_difference(const Tableau &a, const Tableau &b);

/// Conjugates `error`, inserted before gate `position`, through the rest of
/// the circuit. position == circuit.size() returns the error unchanged.
PauliOperator inject_and_propagate(const Circuit &circuit, const PauliOperator &error, size_t position,
                                   const ConjugationTable &table = ConjugationTable::standard());

// ---------------------------------------------------------------------------
// Photonic constructions.

/// One emission of the machine gun: optionally H on the dot (the precession
/// step), then CNOT dot -> photon. Without the Hadamard the photon joins the
/// previous one as a redundantly encoded copy.
void machine_gun_emit(Tableau &t, int dot, int photon, bool with_hadamard);

/// Appends a fresh photon and emits into it; returns its label.
int machine_gun_emit_new(Tableau &t, int dot, bool with_hadamard);

struct FusionRecord {
    bool success = false;
    std::vector<MeasurementRecord> measurements;
    // Pauli relating the obtained state to the all-outcomes-zero state:
    // byproduct * actual * byproduct^dagger = reference. Identity when every
    // outcome is 0. Recorded, never applied.
    PauliOperator byproduct;
};

/// Type-I fusion of qubits a and b (a survives). Success: Z_a Z_b measured
/// with the given parity, then X_b measured and b discarded. Failure: Z_a
/// and Z_b measured, b discarded.
FusionRecord fusion_type_I(Tableau &t, int a, int b, bool success, bool parity, Rng *rng,
                           std::optional<bool> forced_x_outcome = std::nullopt);

/// The link-forming fusion gate: Hadamards push a and b out of their
/// redundantly encoded blocks, then a type-I fusion.
FusionRecord fusion_link(Tableau &t, int a, int b, bool success, bool parity, Rng *rng,
                         std::optional<bool> forced_x_outcome = std::nullopt);

/// Measures the middle photon of a fused pair in the Y basis and discards
/// it, leaving the outer qubits linked up to K on each.
MeasurementRecord complete_link(Tableau &t, int middle, std::optional<bool> forced_outcome, Rng *rng);

// ---------------------------------------------------------------------------
// Regression suite for the machine gun and fusion constructions.

struct RegressionStep {
    std::string name;
    std::string expected;  // rendered target group
    std::string actual;    // rendered simulated group
    bool ok = false;
    std::vector<int> labels;  // qubit labels of the compared groups, if any
};

struct RegressionReport {
    std::vector<RegressionStep> steps;
    bool ok() const;
};

RegressionReport run_stabilizer_regressions(const ConjugationTable &table = ConjugationTable::standard());

/// The 4-photon machine-gun circuit (qubit 0 = dot) used by the dot-error
/// locality check, and the gate positions lying between emissions.
Circuit machine_gun_circuit(size_t photons);
std::vector<size_t> inter_emission_positions(const Circuit &circuit);

/// For a dot error injected at `position`, a minimum-weight photon Pauli of
/// weight <= max_weight it is equivalent to once the dot is measured out in
/// Z, if any.
std::optional<PauliOperator> equivalent_photon_error(const Circuit &circuit, char dot_pauli, size_t position,
                                                     const ConjugationTable &table = ConjugationTable::standard(),
                                                     size_t max_weight = 1);

}  // namespace tcsim::stab
