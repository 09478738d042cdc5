#include "tcsim/lattice.h"

#include <sstream>
#include <stdexcept>

namespace tcsim {

char axis_name(Axis a) { return "xyz"[static_cast<int>(a)]; }

Lattice::Lattice(int L, RoleMap roles) : L_(L), roles_(roles) {
    if (L < 2) {
        throw std::invalid_argument("lattice size must be at least 2 (got " + std::to_string(L) + ")");
    }
    face_cells_.resize(num_faces());
    cell_faces_.resize(num_cells());
    for (uint32_t c = 0; c < num_cells(); c++) {
        CellCoord cc = cell_at(c);
        const CellCoord step[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        for (int a = 0; a < 3; a++) {
            CellCoord up{cc.i + step[a].i, cc.j + step[a].j, cc.k + step[a].k};
            CellCoord down{cc.i - step[a].i, cc.j - step[a].j, cc.k - step[a].k};
            face_cells_[3 * c + a] = {c, cell_index(normalize(up))};
            cell_faces_[c][a] = 3 * c + a;
            cell_faces_[c][3 + a] = 3 * cell_index(normalize(down)) + a;
        }
    }
}

uint32_t Lattice::cell_index(CellCoord c) const {
    c = normalize(c);
    return static_cast<uint32_t>(c.i + L_ * (c.j + L_ * c.k));
}

CellCoord Lattice::cell_at(uint32_t index) const {
    int v = static_cast<int>(index);
    return {v % L_, (v / L_) % L_, v / (L_ * L_)};
}

std::pair<CellCoord, CellCoord> Lattice::incident_cells(FaceCoord f) const {
    const auto &c = face_cells_[face_index(f)];
    return {cell_at(c[0]), cell_at(c[1])};
}

std::array<FaceCoord, 6> Lattice::faces_of_cell(CellCoord c) const {
    std::array<FaceCoord, 6> out;
    const auto &f = cell_faces_[cell_index(c)];
    for (int k = 0; k < 6; k++) out[k] = face_at(f[k]);
    return out;
}

std::string Lattice::dump() const {
    std::ostringstream os;
    os << "# L=" << L_ << " cells=" << num_cells() << " faces=" << num_faces() << "\n";
    os << "# face index: (i,j,k,axis) bonds -> cells\n";
    for (uint32_t f = 0; f < num_faces(); f++) {
        FaceCoord fc = face_at(f);
        const auto &c = face_cells_[f];
        os << "face " << f << ": (" << fc.cell.i << "," << fc.cell.j << "," << fc.cell.k << "," << axis_name(fc.axis)
           << ") bonds=" << role(f).fusion_bonds << " -> " << c[0] << " " << c[1] << "\n";
    }
    os << "# cell index: (i,j,k) -> faces\n";
    for (uint32_t c = 0; c < num_cells(); c++) {
        CellCoord cc = cell_at(c);
        os << "cell " << c << ": (" << cc.i << "," << cc.j << "," << cc.k << ") ->";
        for (uint32_t f : cell_faces_[c]) os << " " << f;
        os << "\n";
    }
    return os.str();
}

}  // namespace tcsim
