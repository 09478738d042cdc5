#include <stdexcept>

#include "tcsim/stabsim.h"

namespace tcsim::stab {

void machine_gun_emit(Tableau &t, int dot, int photon, bool with_hadamard) {
    t.index_of(dot);
    if (dot == photon) throw std::invalid_argument("photon and dot coincide");
    if (!t.contains(t.pauli({{photon, 'Z'}}))) {
        throw std::invalid_argument("photon " + std::to_string(photon) + " is not a fresh |0>");
    }
    if (with_hadamard) t.apply(Gate::H, dot);
    t.apply(Gate::CNOT, dot, photon);
}

int machine_gun_emit_new(Tableau &t, int dot, bool with_hadamard) {
    t.index_of(dot);
    int photon = t.append_qubit();
    machine_gun_emit(t, dot, photon, with_hadamard);
    return photon;
}

namespace {

// Runs the measurement sequence of a fusion. `forced` supplies outcomes for
// random measurements, in order; missing entries fall back to the rng.
std::vector<MeasurementRecord> fusion_measurements(Tableau &t, int a, int b, bool success,
                                                   std::span<const std::optional<bool>> forced, Rng *rng) {
    std::vector<MeasurementRecord> out;
    auto next = [&](size_t k) { return k < forced.size() ? forced[k] : std::nullopt; };
    if (success) {
        out.push_back(t.measure(t.pauli({{a, 'Z'}, {b, 'Z'}}), next(0), rng));
        out.push_back(t.measure(t.pauli({{b, 'X'}}), next(1), rng));
    } else {
        out.push_back(t.measure(t.pauli({{a, 'Z'}}), next(0), rng));
        out.push_back(t.measure(t.pauli({{b, 'Z'}}), next(1), rng));
    }
    t.discard(b);
    return out;
}

}  // namespace

FusionRecord fusion_type_I(Tableau &t, int a, int b, bool success, bool parity, Rng *rng,
                           std::optional<bool> forced_x_outcome) {
    if (a == b) throw std::invalid_argument("fusion needs two distinct qubits");
    t.index_of(a);
    t.index_of(b);

    Tableau reference = t;
    FusionRecord rec;
    rec.success = success;
    std::optional<bool> forced[2] = {std::nullopt, std::nullopt};
    if (success) {
        forced[0] = parity;
        forced[1] = forced_x_outcome;
    }
    rec.measurements = fusion_measurements(t, a, b, success, forced, rng);

    // Same branch structure with every random outcome set to 0.
    std::optional<bool> zero[2];
    for (size_t k = 0; k < 2; k++) {
        zero[k] = rec.measurements[k].deterministic ? std::nullopt : std::optional<bool>(false);
    }
    fusion_measurements(reference, a, b, success, zero, nullptr);
    rec.byproduct = pauli_frame_difference(t, reference);
    return rec;
}

FusionRecord fusion_link(Tableau &t, int a, int b, bool success, bool parity, Rng *rng,
                         std::optional<bool> forced_x_outcome) {
    if (a == b) throw std::invalid_argument("fusion needs two distinct qubits");
    t.apply(Gate::H, a);
    t.apply(Gate::H, b);
    return fusion_type_I(t, a, b, success, parity, rng, forced_x_outcome);
}

MeasurementRecord complete_link(Tableau &t, int middle, std::optional<bool> forced_outcome, Rng *rng) {
    MeasurementRecord rec = t.measure(t.pauli({{middle, 'Y'}}), forced_outcome, rng);
    t.discard(middle);
    return rec;
}

Circuit machine_gun_circuit(size_t photons) {
    Circuit c;
    for (size_t k = 1; k <= photons; k++) {
        c.push_back({Gate::H, {0, 0}});
        c.push_back({Gate::CNOT, {0, k}});
    }
    c.push_back({Gate::H, {0, 0}});
    return c;
}

std::vector<size_t> inter_emission_positions(const Circuit &circuit) {
    std::vector<size_t> emissions;
    for (size_t k = 0; k < circuit.size(); k++) {
        if (circuit[k].gate == Gate::CNOT) emissions.push_back(k);
    }
    std::vector<size_t> out;
    if (emissions.size() < 2) return out;
    for (size_t p = emissions.front() + 1; p <= emissions.back(); p++) out.push_back(p);
    return out;
}

std::optional<PauliOperator> equivalent_photon_error(const Circuit &circuit, char dot_pauli, size_t position,
                                                     const ConjugationTable &table, size_t max_weight) {
    size_t n = 1;
    for (const auto &op : circuit) {
        n = std::max(n, op.qubits[0] + 1);
        if (op.gate == Gate::CNOT) n = std::max(n, op.qubits[1] + 1);
    }
    PauliOperator propagated = inject_and_propagate(circuit, PauliOperator::single(n, 0, dot_pauli), position, table);

    Tableau t = Tableau::computational(n);
    t.set_conjugation_table(&table);
    for (const auto &op : circuit) t.apply(op);

    // The dot is measured in Z afterwards, so Z on the dot is harmless.
    std::vector<PauliOperator> ops = t.generators();
    ops.push_back(PauliOperator::single(n, 0, 'Z'));

    // Breadth-first over weight: extend each weight-w candidate on higher qubits.
    std::vector<std::pair<PauliOperator, size_t>> layer{{PauliOperator(n), 1}};
    for (size_t w = 0; w <= max_weight; w++) {
        std::vector<std::pair<PauliOperator, size_t>> next;
        for (const auto &[c, first] : layer) {
            if (in_span(ops, propagated * c)) return c;
            if (w == max_weight) continue;
            for (size_t q = first; q < n; q++) {
                for (char p : {'X', 'Y', 'Z'}) {
                    PauliOperator e = c;
                    e.set(q, p);
                    next.emplace_back(std::move(e), q + 1);
                }
            }
        }
        layer = std::move(next);
    }
    return std::nullopt;
}

bool RegressionReport::ok() const {
    for (const auto &s : steps) {
        if (!s.ok) return false;
    }
    return !steps.empty();
}

namespace {

// Renders `target` with the signs the simulated tableau assigns to its rows,
// when the groups agree up to those signs.
std::string render_in_basis(const Tableau &sim, const Tableau &target) {
    if (sim.labels() != target.labels()) return sim.str();
    std::string out;
    for (size_t i = 0; i < target.generators().size(); i++) {
        const auto &row = target.generators()[i];
        auto s = sim.sign_of(row);
        if (!s) return sim.str();
        if (i) out += " / ";
        if (*s * row.sign() < 0) out += '-';
        out += row.str(false);
    }
    return out;
}

RegressionStep compare(std::string name, const Tableau &sim, const Tableau &target) {
    RegressionStep step{std::move(name), target.str(), render_in_basis(sim, target), false, target.labels()};
    step.ok = sim.labels() == target.labels() && groups_equal(sim, target);
    return step;
}

Tableau rows(std::initializer_list<std::string_view> r, std::vector<int> labels = {}) {
    std::vector<std::string_view> v(r);
    return Tableau::from_rows(v, std::move(labels));
}

}  // namespace

RegressionReport run_stabilizer_regressions(const ConjugationTable &table) {
    RegressionReport report;

    // Machine gun: dot = qubit 1, photons 2..4, each emission H then CNOT.
    {
        Tableau t = Tableau::computational(4);
        t.set_conjugation_table(&table);
        const Tableau targets[4] = {
            rows({"XXII", "ZZII", "IIZI", "IIIZ"}),
            rows({"ZXII", "XZXI", "ZIZI", "IIIZ"}),
            rows({"XXIX", "ZZXI", "XIZX", "ZIIZ"}),
            rows({"ZXIX", "XZXI", "ZIZX", "XIIZ"}),
        };
        for (int step = 1; step <= 3; step++) {
            machine_gun_emit(t, 1, step + 1, true);
            report.steps.push_back(compare("machine gun step " + std::to_string(step), t, targets[step - 1]));
        }
        t.apply(Gate::H, 1);
        report.steps.push_back(compare("machine gun step 4", t, targets[3]));
        t.measure(t.pauli({{1, 'Z'}}), false);
        t.discard(1);
        report.steps.push_back(compare("machine gun step 5", t, rows({"XZI", "ZXZ", "IZX"}, {2, 3, 4})));
    }

    // Fusion of two Bell pairs (1,2) and (3,4) on photons 2 and 3, then
    // Y measurement of the surviving middle photon.
    {
        Tableau t = rows({"XXII", "ZZII", "IIXX", "IIZZ"});
        t.set_conjugation_table(&table);
        try {
            fusion_link(t, 2, 3, true, false, nullptr, false);
            report.steps.push_back(compare("fusion type-I", t, rows({"XZI", "ZXZ", "IZX"}, {1, 2, 4})));
            complete_link(t, 2, false, nullptr);
            report.steps.push_back(compare("fusion Y completion", t, rows({"YZ", "ZY"}, {1, 4})));
            t.apply(Gate::K, 1);
            t.apply(Gate::K, 4);
            report.steps.push_back(compare("K correction", t, rows({"XZ", "ZX"}, {1, 4})));
        } catch (const std::exception &e) {
            report.steps.push_back({"fusion", "", std::string("error: ") + e.what(), false, {}});
        }
    }

    // Redundant encoding: after the precession Hadamard, two emissions
    // without it leave the photons in a relative GHZ state.
    {
        Tableau t = Tableau::computational(1);
        t.set_conjugation_table(&table);
        t.apply(Gate::H, 1);
        int p1 = machine_gun_emit_new(t, 1, false);
        int p2 = machine_gun_emit_new(t, 1, false);
        bool ok = t.contains(t.pauli({{p1, 'Z'}, {p2, 'Z'}})) &&
                  t.contains(t.pauli({{1, 'X'}, {p1, 'X'}, {p2, 'X'}}));
        report.steps.push_back({"RE emission", "Z2Z3 and X1X2X3 in group", t.str(), ok, {}});
    }

    // Dot errors between emissions act as single-photon errors.
    {
        Circuit c = machine_gun_circuit(4);
        for (size_t pos : inter_emission_positions(c)) {
            // Y = iXZ, and the X and Z images can land on different photons.
            for (char e : {'X', 'Y', 'Z'}) {
                const size_t bound = e == 'Y' ? 2 : 1;
                auto local = equivalent_photon_error(c, e, pos, table, bound);
                std::string name = std::string("dot ") + e + " before gate " + std::to_string(pos);
                report.steps.push_back({name, "photon Pauli of weight <= " + std::to_string(bound),
                                        local ? local->str() : "no local equivalent", local.has_value(), {}});
            }
        }
    }
    return report;
}

}  // namespace tcsim::stab
