#pragma once

// Primal cell complex of the 3D cluster on an L x L x L torus. Face qubits
// are the only tracked qubits; a face is owned by the cell at its lower
// corner and is shared with the neighbour one step along its normal.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace tcsim {

enum class Axis : uint8_t { X = 0, Y = 1, Z = 2 };

char axis_name(Axis a);

struct CellCoord {
    int i = 0, j = 0, k = 0;
    bool operator==(const CellCoord &) const = default;
};

struct FaceCoord {
    CellCoord cell;
    Axis axis = Axis::X;
    bool operator==(const FaceCoord &) const = default;
};

/// Photonic makeup of a face qubit. Faces normal to the stream axis (z) are
/// fused in both transverse directions (4 bonds); x/y faces in one (2
/// bonds). A qubit with no bonds is a measured-out single photon.
struct QubitRole {
    int fusion_bonds = 2;
    int photons(int R) const { return fusion_bonds * R + 1; }
};

/// Bonds per face normal, indexed by Axis. Swappable for other assignments.
using RoleMap = std::array<int, 3>;
inline constexpr RoleMap kStreamAlongZ = {2, 2, 4};

class Lattice {
   public:
    /// Throws std::invalid_argument for L < 2.
    explicit Lattice(int L, RoleMap roles = kStreamAlongZ);

    int size() const { return L_; }
    uint32_t num_cells() const { return static_cast<uint32_t>(L_ * L_ * L_); }
    uint32_t num_faces() const { return 3 * num_cells(); }

    int wrap(int v) const { return ((v % L_) + L_) % L_; }
    CellCoord normalize(CellCoord c) const { return {wrap(c.i), wrap(c.j), wrap(c.k)}; }

    uint32_t cell_index(CellCoord c) const;
    CellCoord cell_at(uint32_t index) const;
    /// index = 3 * cell_index(owner) + axis.
    uint32_t face_index(FaceCoord f) const { return 3 * cell_index(f.cell) + static_cast<uint32_t>(f.axis); }
    FaceCoord face_at(uint32_t index) const { return {cell_at(index / 3), static_cast<Axis>(index % 3)}; }

    /// Owner first, then owner + e_axis (mod L).
    const std::array<uint32_t, 2> &incident_cells(uint32_t face) const { return face_cells_[face]; }
    std::pair<CellCoord, CellCoord> incident_cells(FaceCoord f) const;

    /// The three owned faces (x, y, z), then the x/y/z faces owned by the
    /// neighbours behind the cell.
    const std::array<uint32_t, 6> &faces_of_cell(uint32_t cell) const { return cell_faces_[cell]; }
    std::array<FaceCoord, 6> faces_of_cell(CellCoord c) const;

    /// The cell across `face` from `cell`.
    uint32_t across(uint32_t cell, uint32_t face) const {
        const auto &c = face_cells_[face];
        return c[0] == cell ? c[1] : c[0];
    }

    QubitRole role(uint32_t face) const { return {roles_[face % 3]}; }
    QubitRole role(FaceCoord f) const { return {roles_[static_cast<int>(f.axis)]}; }
    QubitRole role(Axis a) const { return {roles_[static_cast<int>(a)]}; }

    /// Human-readable adjacency listing.
    std::string dump() const;

   private:
    int L_;
    RoleMap roles_;
    std::vector<std::array<uint32_t, 2>> face_cells_;
    std::vector<std::array<uint32_t, 6>> cell_faces_;
};

}  // namespace tcsim
