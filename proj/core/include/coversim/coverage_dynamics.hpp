#ifndef COVERSIM_COVERAGE_DYNAMICS_HPP_
#define COVERSIM_COVERAGE_DYNAMICS_HPP_

#include <cstddef>
#include <vector>

#include "coversim/field_model.hpp"
#include "coversim/vec2.hpp"

namespace coversim {

struct FleetState {
    std::vector<Vec2> positions;   // m
    std::vector<Vec2> velocities;  // m/s, same length as positions

    std::size_t count() const { return positions.size(); }
};

struct PerfParams {
    double sigma = 1.0;  // m, sensor spread
    double delta = 5.0;  // 1/s, importance decay rate
};

/// Gaussian monitoring quality in (0, 1]: exp(-|p - x|^2 / (2 sigma^2)).
double performance(Vec2 p, Vec2 x, double sigma);

/// Exact exponential decay step on the full 5D field for frozen positions:
/// phi <- phi * exp(-delta * max_i l(p_i, zeta(q)) * dt).
void decay_full(VirtualField& f, const FleetState& fleet, const PerfParams& params,
                const MappingParams& m, double dt);

/// Compressed counterpart, evaluated at the polygon gravity points.
void decay_compressed(GroundGrid& g, const FleetState& fleet, const PerfParams& params,
                      double dt);

/// Voronoi ownership of ground polygons by drone index.
struct Partition {
    std::vector<int> owner;  // one entry per polygon, in [0, N)
};

/// Nearest-drone assignment of gravity points; ties go to the lowest index.
Partition voronoi_assign(const FleetState& fleet, const GroundGrid& g);

/// I_xi = delta * A * sum over owned polygons of l(p_xi, X_l) * psi_l.
/// The instantaneous importance-removal rate credited to drone xi.
double metric_I(std::size_t xi, const FleetState& fleet, const Partition& part,
                const GroundGrid& g, const PerfParams& params);

/// dJ/dt = -sum_xi I_xi under the decay dynamics; test oracle for the
/// finite-difference of J across a step.
double cost_rate_check(const FleetState& fleet, const Partition& part,
                       const GroundGrid& g, const PerfParams& params);

/// Importance mass within strict radius 2 sigma of p: sum psi_l * A.
double j_near(Vec2 p, const GroundGrid& g, const PerfParams& params);

}  // namespace coversim

#endif  // COVERSIM_COVERAGE_DYNAMICS_HPP_
