#include <algorithm>
#include <stdexcept>

#include "tcsim/stabsim.h"

namespace tcsim::stab {

bool &paranoid_checks() {
    static bool enabled = false;
    return enabled;
}

namespace {

// Symplectic vector (x | z) of a Pauli, 2n bits.
BitVector symplectic(const PauliOperator &p) {
    size_t n = p.size();
    BitVector v(2 * n);
    for (size_t q = 0; q < n; q++) {
        v.set(q, p.xs()[q]);
        v.set(n + q, p.zs()[q]);
    }
    return v;
}

// Row-reduced basis of a list of symplectic vectors, remembering which input
// rows each basis row combines.
struct Elimination {
    std::vector<BitVector> rows;
    std::vector<BitVector> combos;
    std::vector<size_t> pivots;  // pivot column of rows[r]

    explicit Elimination(std::span<const PauliOperator> ops) {
        size_t m = ops.size();
        size_t width = ops.empty() ? 0 : 2 * ops[0].size();
        for (size_t i = 0; i < m; i++) {
            rows.push_back(symplectic(ops[i]));
            combos.emplace_back(m);
            combos.back().set(i, true);
        }
        size_t rank = 0;
        for (size_t col = 0; col < width && rank < m; col++) {
            size_t r = rank;
            while (r < m && !rows[r][col]) r++;
            if (r == m) continue;
            std::swap(rows[r], rows[rank]);
            std::swap(combos[r], combos[rank]);
            for (size_t o = 0; o < m; o++) {
                if (o != rank && rows[o][col]) {
                    rows[o] ^= rows[rank];
                    combos[o] ^= combos[rank];
                }
            }
            pivots.push_back(col);
            rank++;
        }
        rows.resize(rank);
        combos.resize(rank);
    }

    size_t rank() const { return pivots.size(); }

    // Input rows whose product equals target up to phase, if any.
    std::optional<BitVector> solve(const BitVector &target, size_t num_inputs) const {
        BitVector rest = target;
        BitVector used(num_inputs);
        for (size_t r = 0; r < pivots.size(); r++) {
            if (rest[pivots[r]]) {
                rest ^= rows[r];
                used ^= combos[r];
            }
        }
        if (rest.any()) return std::nullopt;
        return used;
    }
};

}  // namespace

Tableau Tableau::computational(size_t n) {
    if (n == 0) throw std::invalid_argument("tableau needs at least one qubit");
    Tableau t;
    for (size_t q = 0; q < n; q++) {
        t.gens_.push_back(PauliOperator::single(n, q, 'Z'));
        t.labels_.push_back(static_cast<int>(q) + 1);
    }
    return t;
}

Tableau::Tableau(std::vector<PauliOperator> generators, std::vector<int> labels)
    : gens_(std::move(generators)), labels_(std::move(labels)) {
    if (labels_.empty()) {
        for (size_t q = 0; q < gens_.size(); q++) labels_.push_back(static_cast<int>(q) + 1);
    }
    for (size_t i = 0; i < labels_.size(); i++) {
        for (size_t j = i + 1; j < labels_.size(); j++) {
            if (labels_[i] == labels_[j]) throw std::invalid_argument("duplicate qubit label");
        }
    }
    try {
        check_invariants();
    } catch (const std::logic_error &e) {
        throw std::invalid_argument(e.what());
    }
}

Tableau Tableau::from_rows(std::span<const std::string_view> rows, std::vector<int> labels) {
    std::vector<PauliOperator> gens;
    for (auto r : rows) gens.push_back(PauliOperator::parse(r));
    return Tableau(std::move(gens), std::move(labels));
}

bool Tableau::has_label(int label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

size_t Tableau::index_of(int label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw std::invalid_argument("qubit " + std::to_string(label) + " is not live");
    return static_cast<size_t>(it - labels_.begin());
}

PauliOperator Tableau::pauli(std::initializer_list<std::pair<int, char>> factors, bool negative) const {
    PauliOperator p(num_qubits());
    for (auto [label, c] : factors) p.set(index_of(label), c);
    if (negative) p.set_phase(2);
    return p;
}

int Tableau::append_qubit(std::optional<int> label) {
    int l = label.value_or(labels_.empty() ? 1 : *std::max_element(labels_.begin(), labels_.end()) + 1);
    if (has_label(l)) throw std::invalid_argument("label " + std::to_string(l) + " already live");
    for (auto &g : gens_) g.append_qubit();
    labels_.push_back(l);
    gens_.push_back(PauliOperator::single(labels_.size(), labels_.size() - 1, 'Z'));
    after_mutation();
    return l;
}

void Tableau::apply(Gate g, std::span<const int> target_labels) {
    GateOp op{g, {}};
    size_t arity = g == Gate::CNOT ? 2 : 1;
    if (target_labels.size() != arity) {
        throw std::invalid_argument(std::string(gate_name(g)) + " expects " + std::to_string(arity) + " target(s)");
    }
    for (size_t k = 0; k < arity; k++) op.qubits[k] = index_of(target_labels[k]);
    if (g == Gate::CNOT && op.qubits[0] == op.qubits[1]) {
        throw std::invalid_argument("CNOT targets must be distinct");
    }
    apply(op);
}

void Tableau::apply(const GateOp &op) {
    size_t arity = op.gate == Gate::CNOT ? 2 : 1;
    for (size_t k = 0; k < arity; k++) {
        if (op.qubits[k] >= num_qubits()) throw std::out_of_range("gate target out of range");
    }
    for (auto &g : gens_) conjugate(g, op, *table_);
    after_mutation();
}

void Tableau::apply_pauli(const PauliOperator &p) {
    for (auto &g : gens_) {
        if (!g.commutes(p)) g.set_phase(g.phase() + 2);
    }
}

std::optional<int> Tableau::sign_of(const PauliOperator &op) const {
    if (op.size() != num_qubits()) throw std::invalid_argument("operator size does not match tableau");
    Elimination elim(gens_);
    auto used = elim.solve(symplectic(op), gens_.size());
    if (!used) return std::nullopt;
    PauliOperator product(num_qubits());
    for (uint32_t i : used->ones()) product *= gens_[i];
    unsigned ratio = (product.phase() + 4 - op.phase()) & 3;
    if (ratio & 1) return std::nullopt;  // op is not Hermitian; i*op is never a stabilizer
    return ratio == 0 ? 1 : -1;
}

bool Tableau::contains(const PauliOperator &op) const {
    if (!op.hermitian()) return false;
    auto s = sign_of(op);
    return s && *s == 1;
}

MeasurementRecord Tableau::measure(const PauliOperator &op, std::optional<bool> forced_outcome, Rng *rng) {
    if (op.size() != num_qubits()) throw std::invalid_argument("operator size does not match tableau");
    if (op.is_identity()) throw std::invalid_argument("cannot measure the identity");
    if (!op.hermitian()) throw std::invalid_argument("measured operator must be Hermitian");

    std::vector<size_t> anti;
    for (size_t i = 0; i < gens_.size(); i++) {
        if (!gens_[i].commutes(op)) anti.push_back(i);
    }
    MeasurementRecord rec{op, false, anti.empty()};
    if (anti.empty()) {
        auto s = sign_of(op);
        if (!s) throw std::logic_error("commuting operator outside a full stabilizer group");
        rec.outcome = *s == -1;
        if (forced_outcome && *forced_outcome != rec.outcome) {
            throw std::invalid_argument("forced outcome contradicts a deterministic measurement");
        }
        return rec;
    }
    if (forced_outcome) {
        rec.outcome = *forced_outcome;
    } else if (rng != nullptr) {
        rec.outcome = coin(*rng);
    } else {
        throw std::invalid_argument("random measurement needs an rng or a forced outcome");
    }
    size_t pivot = anti[0];
    for (size_t k = 1; k < anti.size(); k++) gens_[anti[k]] *= gens_[pivot];
    gens_[pivot] = op;
    if (rec.outcome) gens_[pivot].set_phase(op.phase() + 2);
    after_mutation();
    return rec;
}

void Tableau::discard(int label) {
    size_t q = index_of(label);
    size_t n = num_qubits();
    if (n == 1) throw std::invalid_argument("cannot discard the last qubit");
    std::optional<PauliOperator> local;
    for (char c : {'Z', 'X', 'Y'}) {
        PauliOperator p = PauliOperator::single(n, q, c);
        if (auto s = sign_of(p)) {
            if (*s == -1) p.set_phase(2);
            local = p;
            break;
        }
    }
    if (!local) throw std::invalid_argument("qubit " + std::to_string(label) + " is entangled; measure it first");

    // Every generator acts on q as I or as the local Pauli. Clear q from all
    // but one of them; that one is redundant once q is gone.
    std::optional<size_t> pivot;
    for (size_t i = 0; i < gens_.size(); i++) {
        if (gens_[i].at(q) == 'I') continue;
        if (!pivot) {
            pivot = i;
        } else {
            gens_[i] *= gens_[*pivot];
        }
    }
    gens_.erase(gens_.begin() + static_cast<std::ptrdiff_t>(*pivot));
    for (auto &g : gens_) g.erase_qubit(q);
    labels_.erase(labels_.begin() + static_cast<std::ptrdiff_t>(q));
    after_mutation();
}

void Tableau::check_invariants() const {
    size_t n = labels_.size();
    if (gens_.size() != n) throw std::logic_error("generator count differs from qubit count");
    for (const auto &g : gens_) {
        if (g.size() != n) throw std::logic_error("generator width differs from qubit count");
        if (!g.hermitian()) throw std::logic_error("generator with imaginary phase");
    }
    for (size_t i = 0; i < n; i++) {
        for (size_t j = i + 1; j < n; j++) {
            if (!gens_[i].commutes(gens_[j])) throw std::logic_error("generators do not commute");
        }
    }
    if (Elimination(gens_).rank() != n) throw std::logic_error("generators are not independent");
}

void Tableau::after_mutation() const {
    if (paranoid_checks()) check_invariants();
}

std::string Tableau::str() const {
    std::string out;
    for (size_t i = 0; i < gens_.size(); i++) {
        if (i) out += " / ";
        if (gens_[i].phase() == 2) out += '-';
        out += gens_[i].str(false);
    }
    return out;
}

bool groups_equal(const Tableau &a, const Tableau &b) {
    if (a.labels() != b.labels()) throw std::invalid_argument("tableaux have different qubit labels");
    for (const auto &g : b.generators()) {
        if (!a.contains(g)) return false;
    }
    for (const auto &g : a.generators()) {
        if (!b.contains(g)) return false;
    }
    return true;
}

bool in_span(std::span<const PauliOperator> ops, const PauliOperator &op) {
    if (ops.empty()) return op.is_identity();
    return Elimination(ops).solve(symplectic(op), ops.size()).has_value();
}

PauliOperator pauli_frame_difference(const Tableau &a, const Tableau &b) {
    if (a.labels() != b.labels()) throw std::invalid_argument("tableaux have different qubit labels");
    size_t n = a.num_qubits();
    // Unknown u = (P.x | P.z); <P, g> = P.x . g.z + P.z . g.x must equal 1
    // exactly for generators whose sign differs between a and b.
    std::vector<BitVector> rows;
    for (const auto &g : a.generators()) {
        auto sb = b.sign_of(g);
        if (!sb) throw std::invalid_argument("tableaux differ beyond signs");
        BitVector row(2 * n + 1);
        for (size_t q = 0; q < n; q++) {
            row.set(q, g.zs()[q]);
            row.set(n + q, g.xs()[q]);
        }
        row.set(2 * n, *sb != 1);  // sign_of is relative to g itself
        rows.push_back(std::move(row));
    }
    std::vector<size_t> pivots;
    size_t rank = 0;
    for (size_t col = 0; col < 2 * n && rank < rows.size(); col++) {
        size_t r = rank;
        while (r < rows.size() && !rows[r][col]) r++;
        if (r == rows.size()) continue;
        std::swap(rows[r], rows[rank]);
        for (size_t o = 0; o < rows.size(); o++) {
            if (o != rank && rows[o][col]) rows[o] ^= rows[rank];
        }
        pivots.push_back(col);
        rank++;
    }
    PauliOperator p(n);
    for (size_t r = 0; r < rank; r++) {
        if (!rows[r][2 * n]) continue;
        size_t col = pivots[r];
        size_t q = col % n;
        bool x = col < n ? true : p.xs()[q];
        bool z = col < n ? p.zs()[q] : true;
        p.set(q, x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I'));
    }
    return p;
}

}  // namespace tcsim::stab
