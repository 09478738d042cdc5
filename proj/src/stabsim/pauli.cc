#include <stdexcept>

#include "tcsim/stabsim.h"

namespace tcsim::stab {

Gate parse_gate(std::string_view name) {
    if (name == "H") return Gate::H;
    if (name == "CNOT" || name == "CX") return Gate::CNOT;
    if (name == "K") return Gate::K;
    throw std::invalid_argument("unknown gate '" + std::string(name) + "'");
}

std::string_view gate_name(Gate g) {
    switch (g) {
        case Gate::H:
            return "H";
        case Gate::CNOT:
            return "CNOT";
        case Gate::K:
            return "K";
    }
    return "?";
}

PauliOperator PauliOperator::parse(std::string_view text) {
    unsigned phase = 0;
    if (text.starts_with("-i")) {
        phase = 3;
        text.remove_prefix(2);
    } else if (text.starts_with("+i")) {
        phase = 1;
        text.remove_prefix(2);
    } else if (text.starts_with("i")) {
        phase = 1;
        text.remove_prefix(1);
    } else if (text.starts_with("-")) {
        phase = 2;
        text.remove_prefix(1);
    } else if (text.starts_with("+")) {
        text.remove_prefix(1);
    }
    PauliOperator p(text.size());
    for (size_t q = 0; q < text.size(); q++) {
        p.set(q, text[q]);
    }
    p.set_phase(phase);
    return p;
}

PauliOperator PauliOperator::single(size_t num_qubits, size_t qubit, char pauli) {
    PauliOperator p(num_qubits);
    p.set(qubit, pauli);
    return p;
}

char PauliOperator::at(size_t q) const {
    static constexpr char kNames[4] = {'I', 'X', 'Z', 'Y'};
    return kNames[static_cast<int>(x_[q]) | (static_cast<int>(z_[q]) << 1)];
}

void PauliOperator::set(size_t q, char pauli) {
    switch (pauli) {
        case 'I':
        case '_':
            x_.set(q, false);
            z_.set(q, false);
            break;
        case 'X':
            x_.set(q, true);
            z_.set(q, false);
            break;
        case 'Y':
            x_.set(q, true);
            z_.set(q, true);
            break;
        case 'Z':
            x_.set(q, false);
            z_.set(q, true);
            break;
        default:
            throw std::invalid_argument(std::string("bad Pauli character '") + pauli + "'");
    }
}

size_t PauliOperator::weight() const {
    size_t w = 0;
    for (size_t k = 0; k < x_.num_words(); k++) {
        w += std::popcount(x_.data()[k] | z_.data()[k]);
    }
    return w;
}

bool PauliOperator::commutes(const PauliOperator &other) const {
    if (other.size() != size()) throw std::invalid_argument("Pauli size mismatch");
    return !kernels::active().symplectic_parity(x_.data(), z_.data(), other.x_.data(), other.z_.data(),
                                                 x_.num_words());
}

PauliOperator &PauliOperator::operator*=(const PauliOperator &rhs) {
    if (rhs.size() != size()) throw std::invalid_argument("Pauli size mismatch");
    unsigned extra = kernels::active().pauli_product_phase(x_.data(), z_.data(), rhs.x_.data(), rhs.z_.data(),
                                                           x_.num_words());
    phase_ = (phase_ + rhs.phase_ + extra) & 3;
    x_ ^= rhs.x_;
    z_ ^= rhs.z_;
    return *this;
}

std::string PauliOperator::str(bool with_sign) const {
    static constexpr const char *kSigns[4] = {"+", "i", "-", "-i"};
    std::string out = with_sign ? kSigns[phase_] : "";
    for (size_t q = 0; q < size(); q++) {
        out += at(q);
    }
    return out;
}

void PauliOperator::erase_qubit(size_t q) {
    x_.erase(q);
    z_.erase(q);
}

void PauliOperator::append_qubit() {
    x_.push_back_zero();
    z_.push_back_zero();
}

const ConjugationTable &ConjugationTable::standard() {
    static const ConjugationTable table{
        PauliOperator::parse("+Z"),
        PauliOperator::parse("+X"),
        PauliOperator::parse("-Y"),
        PauliOperator::parse("+Z"),
    };
    return table;
}

namespace {

void conjugate_single(PauliOperator &p, size_t q, const PauliOperator &x_image, const PauliOperator &z_image) {
    char c = p.at(q);
    if (c == 'I') return;
    PauliOperator image = c == 'X' ? x_image : z_image;
    if (c == 'Y') {
        // Y = iXZ, so U Y U^dagger = i (U X U^dagger)(U Z U^dagger).
        image = x_image * z_image;
        image.set_phase(image.phase() + 1);
    }
    p.set(q, image.at(0));
    p.set_phase(p.phase() + image.phase());
}

}  // namespace

void conjugate(PauliOperator &p, const GateOp &op, const ConjugationTable &table) {
    switch (op.gate) {
        case Gate::H:
            conjugate_single(p, op.qubits[0], table.h_x, table.h_z);
            return;
        case Gate::K:
            conjugate_single(p, op.qubits[0], table.k_x, table.k_z);
            return;
        case Gate::CNOT: {
            size_t c = op.qubits[0], t = op.qubits[1];
            if (c == t) throw std::invalid_argument("CNOT control and target coincide");
            bool xc = p.xs()[c], zc = p.zs()[c], xt = p.xs()[t], zt = p.zs()[t];
            // Aaronson-Gottesman sign rule with Y stored as x=z=1.
            if (xc && zt && (xt == zc)) p.set_phase(p.phase() + 2);
            xt ^= xc;
            zc ^= zt;
            auto put = [&p](size_t q, bool x, bool z) { p.set(q, x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I')); };
            put(c, xc, zc);
            put(t, xt, zt);
            return;
        }
    }
}

PauliOperator inject_and_propagate(const Circuit &circuit, const PauliOperator &error, size_t position,
                                   const ConjugationTable &table) {
    if (position > circuit.size()) {
        throw std::out_of_range("injection position " + std::to_string(position) + " beyond circuit of length " +
                                std::to_string(circuit.size()));
    }
    PauliOperator p = error;
    for (size_t k = position; k < circuit.size(); k++) {
        conjugate(p, circuit[k], table);
    }
    return p;
}

}  // namespace tcsim::stab
