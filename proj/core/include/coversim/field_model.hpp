#ifndef COVERSIM_FIELD_MODEL_HPP_
#define COVERSIM_FIELD_MODEL_HPP_

#include <cstddef>
#include <vector>

#include "coversim/vec2.hpp"

namespace coversim {

/// One 5D target: ground position plus horizontal/vertical viewing angle.
struct VirtualPoint {
    double x = 0.0;        // m
    double y = 0.0;        // m
    double z = 0.0;        // m
    double theta_h = 0.0;  // rad, in [-pi, pi)
    double theta_v = 0.0;  // rad, in (0, pi/2]
};

struct MappingParams {
    double z_c = 10.0;  // common drone altitude, must exceed every target z
};

/// Ground position from which a drone at altitude z_c observes target q.
/// Rejects theta_v outside (0, pi/2] and z_c <= q.z.
Vec2 project(const VirtualPoint& q, const MappingParams& m);

/// Uniform discretization of the 5D target field. Ground cells are squares
/// of edge `spacing`; theta_h bins tile [-pi, pi), theta_v bins tile
/// (0, pi/2], all cells sit at bin centers (so theta_v never hits 0).
/// Importance phi is stored per cell, flat index order:
/// ((vbin * hbins + hbin) * ny + iy) * nx + ix.
class VirtualField {
public:
    static VirtualField discretize(double size_x, double size_y, double spacing,
                                   int theta_h_bins, int theta_v_bins);

    std::size_t cell_count() const { return phi.size(); }
    double cell_volume() const { return cell_volume_; }
    VirtualPoint point(std::size_t cell) const;

    // Ground-plane projection of a cell under mapping m (z = 0 everywhere).
    Vec2 projected(std::size_t cell, const MappingParams& m) const;

    double total_phi() const;

    int nx = 0, ny = 0;          // ground cells per axis
    int n_theta_h = 0, n_theta_v = 0;
    double spacing = 0.0;        // m per ground cell
    double d_theta_h = 0.0, d_theta_v = 0.0;
    std::vector<double> phi;     // importance per cell, >= 0

private:
    double cell_volume_ = 0.0;   // dx*dy*dth*dtv, shared by all cells
};

/// Equal-area rectangular decomposition of the drone plane. psi holds the
/// compressed importance per polygon; cell_volume carries the 5D cell
/// volume A of the field it was compressed from (1.0 until then).
class GroundGrid {
public:
    static GroundGrid make(double size_x, double size_y, int cols, int rows);

    std::size_t polygon_count() const { return psi.size(); }
    Vec2 gravity_point(std::size_t l) const;
    double polygon_area() const { return pitch_x * pitch_y; }

    // Half-open assignment: x in [left, right), y in [bottom, top).
    // Returns -1 when p falls outside the grid.
    long polygon_index(Vec2 p) const;

    double total_psi() const;

    int cols = 0, rows = 0;
    double pitch_x = 0.0, pitch_y = 0.0;  // polygon edge lengths, m
    std::vector<double> psi;              // row-major, >= 0
    double cell_volume = 1.0;             // A of the source field
};

struct CompressionReport {
    std::size_t kept = 0;     // 5D cells assigned to a polygon
    std::size_t dropped = 0;  // cells whose projection fell outside the grid
};

/// psi_l = sum of phi over 5D cells projecting into polygon l. Cells whose
/// projection lands outside the grid are dropped and counted. Stamps the
/// field's cell volume onto the grid.
CompressionReport compress(const VirtualField& f, GroundGrid& g, const MappingParams& m);

/// J = sum_l psi_l * A  (A = 5D cell volume carried by the grid).
double objective_J(const GroundGrid& g);

}  // namespace coversim

#endif  // COVERSIM_FIELD_MODEL_HPP_
