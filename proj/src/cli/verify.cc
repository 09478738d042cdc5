#include <ostream>

#include "tcsim/cli.h"
#include "tcsim/lattice.h"
#include "tcsim/stabsim.h"

namespace tcsim::cli {

namespace {

// "XZI / -ZXZ" -> one spaced row per generator.
void print_matrix(std::ostream &out, const std::string &rendered, const std::vector<int> &labels) {
    const std::string indent = "         ";
    if (!labels.empty()) {
        out << indent << ' ';
        for (int l : labels) out << ' ' << l;
        out << "\n";
    }
    size_t start = 0;
    while (start <= rendered.size()) {
        size_t sep = rendered.find(" / ", start);
        std::string row = rendered.substr(start, sep == std::string::npos ? std::string::npos : sep - start);
        out << indent << (row.starts_with('-') ? '-' : ' ');
        for (char c : row) {
            if (c != '-' && c != '+') out << ' ' << c;
        }
        out << "\n";
        if (sep == std::string::npos) break;
        start = sep + 3;
    }
}

}  // namespace

int cmd_verify(std::ostream &out, bool corrupt_gate) {
    stab::ConjugationTable table = stab::ConjugationTable::standard();
    if (corrupt_gate) {
        // Negative control: K with the wrong sign on X.
        table.k_x = stab::PauliOperator::parse("+Y");
    }
    stab::RegressionReport report = stab::run_stabilizer_regressions(table);

    size_t passed = 0;
    bool shown_diff = false;
    for (const auto &step : report.steps) {
        const bool matrix = !step.labels.empty();
        out << (step.ok ? "[ok]   " : "[FAIL] ") << step.name;
        if (matrix) out << ": " << step.actual;
        out << "\n";
        if (matrix) {
            print_matrix(out, step.actual, step.labels);
        } else {
            out << "         " << step.actual << "\n";
        }
        if (step.ok) {
            passed++;
        } else if (!shown_diff) {
            out << "       expected: " << step.expected << "\n";
            out << "       actual:   " << step.actual << "\n";
            shown_diff = true;
        }
    }

    const Lattice lat(2);
    const int R = 7;
    const int xy = lat.role(Axis::X).photons(R), z = lat.role(Axis::Z).photons(R);
    out << "photons per face qubit at R=" << R << ": x/y " << xy << ", z " << z << ", mean over faces "
        << (2.0 * xy + z) / 3 << "\n";
    out << "verify: " << passed << "/" << report.steps.size() << " checks passed\n";
    return report.ok() ? 0 : 1;
}

}  // namespace tcsim::cli
