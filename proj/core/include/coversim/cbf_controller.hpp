#ifndef COVERSIM_CBF_CONTROLLER_HPP_
#define COVERSIM_CBF_CONTROLLER_HPP_

#include <cstddef>
#include <vector>

#include "coversim/coverage_dynamics.hpp"
#include "coversim/field_model.hpp"
#include "coversim/vec2.hpp"

namespace coversim {

struct ControllerParams {
    double sigma = 1.0;      // m
    double delta = 5.0;      // 1/s
    double gamma = 5000.0;   // coverage-rate floor
    double epsilon = 1e-4;   // velocity penalty weight
    double a = 5.0;          // 1/s, linear class-K gain
    double d_ca = 0.5;       // m, collision radius
    double u_max = 5.0;      // m/s, speed cap

    PerfParams perf() const { return {sigma, delta}; }
};

/// Coverage barrier h = I_xi - gamma linearized in the control:
/// dh/dt = grad_b . u_xi + drift_c, with the Voronoi partition held fixed.
struct LinearizedBarrier {
    double h = 0.0;
    Vec2 grad_b;           // coefficient of u_xi in dh/dt
    double drift_c = 0.0;  // u-independent part (importance decay under all drones)
};

LinearizedBarrier barrier(std::size_t xi, const FleetState& fleet, const Partition& part,
                          const GroundGrid& g, const ControllerParams& params);

/// One linear inequality c_u . u + c_w * w >= lb over the QP variables.
struct ConstraintRow {
    Vec2 c_u;
    double c_w = 0.0;
    double lb = 0.0;
};

/// Pairwise distance barriers h_ca = |p_xi - p_j|^2 - d_ca^2, one hard row
/// per other drone, with the class-K gain split evenly between the pair.
/// Throws on coincident drone positions (degenerate row).
std::vector<ConstraintRow> collision_rows(std::size_t xi, const FleetState& fleet,
                                          const ControllerParams& params);

/// min eps_u |u|^2 + w^2  s.t. rows. Row 0 is the soft coverage row
/// (slack enters through its -w coefficient); the rest are hard.
struct QPProblem {
    double eps_u = 1e-4;
    std::vector<ConstraintRow> rows;
};

QPProblem assemble_qp(const LinearizedBarrier& lb, const std::vector<ConstraintRow>& collision,
                      const ControllerParams& params);

struct QPSolution {
    Vec2 u;
    double w = 0.0;
    bool feasible = false;
    std::vector<int> active_set;  // row indices active at the optimum
    double kkt_residual = 0.0;
};

/// Global optimum of the 3-variable convex QP by active-set enumeration;
/// each candidate set is resolved through its KKT linear system.
/// feasible == false means the hard rows admit no point.
QPSolution solve_qp(const QPProblem& qp);

/// Rescales u onto the ball of radius u_max, direction preserved.
Vec2 saturate(Vec2 u, double u_max);

struct ControlOutput {
    Vec2 u;                       // post-saturation
    double w = 0.0;               // slack at the optimum (0 on fallback)
    double h = 0.0;               // coverage barrier value
    std::vector<int> active_set;
    bool fallback = false;        // hard rows infeasible, repulsion step taken
};

/// barrier -> rows -> QP -> saturation. Pure function of its inputs.
ControlOutput compute_control(std::size_t xi, const FleetState& fleet, const Partition& part,
                              const GroundGrid& g, const ControllerParams& params);

}  // namespace coversim

#endif  // COVERSIM_CBF_CONTROLLER_HPP_
