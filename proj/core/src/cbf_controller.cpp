#include "coversim/cbf_controller.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace coversim {

LinearizedBarrier barrier(std::size_t xi, const FleetState& fleet, const Partition& part,
                          const GroundGrid& g, const ControllerParams& params) {
    const Vec2 p = fleet.positions[xi];
    const double inv_sig_sq = 1.0 / (params.sigma * params.sigma);

    double sum_perf = 0.0;   // sum l(p, X_l) psi_l
    Vec2 sum_grad;           // sum psi_l * grad_p l(p, X_l)
    double sum_drift = 0.0;  // sum l(p, X_l) * psi_dot_l / (delta A)

    for (std::size_t l = 0; l < g.polygon_count(); ++l) {
        if (part.owner[l] != static_cast<int>(xi)) continue;
        const Vec2 x = g.gravity_point(l);
        const double perf = performance(p, x, params.sigma);
        sum_perf += perf * g.psi[l];
        // grad_p l = -((p - x)/sigma^2) l
        sum_grad += g.psi[l] * perf * inv_sig_sq * (x - p);

        double best = perf;
        for (std::size_t i = 0; i < fleet.count(); ++i) {
            if (i == xi) continue;
            best = std::max(best, performance(fleet.positions[i], x, params.sigma));
        }
        sum_drift += perf * (-params.delta * best * g.psi[l]);
    }

    const double dA = params.delta * g.cell_volume;
    LinearizedBarrier lb;
    lb.h = dA * sum_perf - params.gamma;
    lb.grad_b = dA * sum_grad;
    lb.drift_c = dA * sum_drift;
    return lb;
}

std::vector<ConstraintRow> collision_rows(std::size_t xi, const FleetState& fleet,
                                          const ControllerParams& params) {
    std::vector<ConstraintRow> rows;
    rows.reserve(fleet.count() - 1);
    const Vec2 p = fleet.positions[xi];
    for (std::size_t j = 0; j < fleet.count(); ++j) {
        if (j == xi) continue;
        const Vec2 d = p - fleet.positions[j];
        const double dist_sq = norm_sq(d);
        if (dist_sq <= 0.0) {
            throw std::runtime_error("collision_rows: coincident drone positions");
        }
        const double h_ca = dist_sq - params.d_ca * params.d_ca;
        // 2 (p_xi - p_j)^T u >= -(a/2) h_ca ; half the gain because drone j
        // enforces the mirrored row.
        ConstraintRow row;
        row.c_u = 2.0 * d;
        row.c_w = 0.0;
        row.lb = -(0.5 * params.a) * h_ca;
        rows.push_back(row);
    }
    return rows;
}

QPProblem assemble_qp(const LinearizedBarrier& lb, const std::vector<ConstraintRow>& collision,
                      const ControllerParams& params) {
    QPProblem qp;
    qp.eps_u = params.epsilon;
    qp.rows.reserve(collision.size() + 1);
    // Coverage row: grad_b . u + drift_c + a h >= w, slack on this row only.
    ConstraintRow coverage;
    coverage.c_u = lb.grad_b;
    coverage.c_w = -1.0;
    coverage.lb = -(lb.drift_c + params.a * lb.h);
    qp.rows.push_back(coverage);
    qp.rows.insert(qp.rows.end(), collision.begin(), collision.end());
    return qp;
}

namespace {

// Gaussian elimination with partial pivoting on an n x n system (n <= 6).
// Returns false when the matrix is numerically singular.
bool solve_dense(int n, double a[6][6], double b[6], double x[6]) {
    int perm[6];
    for (int i = 0; i < n; ++i) perm[i] = i;

    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(a[i][j]));
    if (scale == 0.0) return false;
    const double tiny = 1e-12 * scale;

    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(a[perm[r]][col]) > std::abs(a[perm[pivot]][col])) pivot = r;
        }
        std::swap(perm[col], perm[pivot]);
        const double diag = a[perm[col]][col];
        if (std::abs(diag) < tiny) return false;
        for (int r = col + 1; r < n; ++r) {
            const double f = a[perm[r]][col] / diag;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) a[perm[r]][c] -= f * a[perm[col]][c];
            b[perm[r]] -= f * b[perm[col]];
        }
    }
    for (int row = n - 1; row >= 0; --row) {
        double s = b[perm[row]];
        for (int c = row + 1; c < n; ++c) s -= a[perm[row]][c] * x[c];
        x[row] = s / a[perm[row]][row];
    }
    return true;
}

struct Candidate {
    double z[3];
    double lambda[6];
    double objective;
    double residual;
};

double row_dot(const ConstraintRow& row, const double z[3]) {
    return row.c_u.x * z[0] + row.c_u.y * z[1] + row.c_w * z[2];
}

double row_scale(const ConstraintRow& row) {
    return std::max({1.0, std::abs(row.c_u.x), std::abs(row.c_u.y), std::abs(row.c_w),
                     std::abs(row.lb)});
}

// Solves the equality-constrained KKT system for active set S:
//   H z = A_S^T lambda,  A_S z = b_S
// and accepts the candidate when lambda >= 0 and every row is satisfied.
bool try_active_set(const QPProblem& qp, const std::vector<int>& set, Candidate& out) {
    const int k = static_cast<int>(set.size());
    const int n = 3 + k;
    double a[6][6] = {};
    double rhs[6] = {};
    double sol[6] = {};

    a[0][0] = 2.0 * qp.eps_u;
    a[1][1] = 2.0 * qp.eps_u;
    a[2][2] = 2.0;
    for (int s = 0; s < k; ++s) {
        const ConstraintRow& row = qp.rows[static_cast<std::size_t>(set[s])];
        const double coef[3] = {row.c_u.x, row.c_u.y, row.c_w};
        for (int v = 0; v < 3; ++v) {
            a[v][3 + s] = -coef[v];
            a[3 + s][v] = coef[v];
        }
        rhs[3 + s] = row.lb;
    }
    if (!solve_dense(n, a, rhs, sol)) return false;

    for (int v = 0; v < 3; ++v) out.z[v] = sol[v];
    for (int s = 0; s < k; ++s) out.lambda[s] = sol[3 + s];

    // Dual feasibility.
    double lambda_scale = 1.0;
    for (int s = 0; s < k; ++s) lambda_scale = std::max(lambda_scale, std::abs(out.lambda[s]));
    for (int s = 0; s < k; ++s) {
        if (out.lambda[s] < -1e-9 * lambda_scale) return false;
    }
    // Primal feasibility over all rows.
    for (const ConstraintRow& row : qp.rows) {
        if (row_dot(row, out.z) < row.lb - 1e-7 * row_scale(row) * std::max(1.0, std::abs(out.z[0]) + std::abs(out.z[1]) + std::abs(out.z[2]))) {
            return false;
        }
    }

    out.objective = qp.eps_u * (out.z[0] * out.z[0] + out.z[1] * out.z[1]) + out.z[2] * out.z[2];

    // KKT residual: stationarity, active-row equality, primal violation, dual sign.
    double grad[3] = {2.0 * qp.eps_u * out.z[0], 2.0 * qp.eps_u * out.z[1], 2.0 * out.z[2]};
    for (int s = 0; s < k; ++s) {
        const ConstraintRow& row = qp.rows[static_cast<std::size_t>(set[s])];
        grad[0] -= out.lambda[s] * row.c_u.x;
        grad[1] -= out.lambda[s] * row.c_u.y;
        grad[2] -= out.lambda[s] * row.c_w;
    }
    double res = std::max({std::abs(grad[0]), std::abs(grad[1]), std::abs(grad[2])});
    for (int s = 0; s < k; ++s) {
        const ConstraintRow& row = qp.rows[static_cast<std::size_t>(set[s])];
        res = std::max(res, std::abs(row_dot(row, out.z) - row.lb));
        res = std::max(res, std::max(0.0, -out.lambda[s]));
    }
    for (const ConstraintRow& row : qp.rows) {
        res = std::max(res, std::max(0.0, row.lb - row_dot(row, out.z)));
    }
    out.residual = res;
    return true;
}

}  // namespace

QPSolution solve_qp(const QPProblem& qp) {
    if (!(qp.eps_u > 0.0)) throw std::invalid_argument("solve_qp: objective must be positive definite");
    if (qp.rows.empty()) throw std::invalid_argument("solve_qp: at least one constraint row required");

    const int n_rows = static_cast<int>(qp.rows.size());
    QPSolution best;
    double best_obj = std::numeric_limits<double>::infinity();

    std::vector<int> set;
    Candidate cand;

    auto consider = [&](const std::vector<int>& s) {
        if (!try_active_set(qp, s, cand)) return;
        if (cand.objective < best_obj) {
            best_obj = cand.objective;
            best.u = {cand.z[0], cand.z[1]};
            best.w = cand.z[2];
            best.feasible = true;
            best.kkt_residual = cand.residual;
        }
    };

    consider(set);  // unconstrained optimum z = 0
    for (int i = 0; i < n_rows; ++i) {
        set = {i};
        consider(set);
    }
    for (int i = 0; i < n_rows; ++i) {
        for (int j = i + 1; j < n_rows; ++j) {
            set = {i, j};
            consider(set);
        }
    }
    for (int i = 0; i < n_rows; ++i) {
        for (int j = i + 1; j < n_rows; ++j) {
            for (int k = j + 1; k < n_rows; ++k) {
                set = {i, j, k};
                consider(set);
            }
        }
    }

    if (best.feasible) {
        // Geometric active set at the returned point.
        const double z[3] = {best.u.x, best.u.y, best.w};
        for (int i = 0; i < n_rows; ++i) {
            const ConstraintRow& row = qp.rows[static_cast<std::size_t>(i)];
            if (std::abs(row_dot(row, z) - row.lb) <= 1e-7 * row_scale(row) * std::max(1.0, std::abs(z[0]) + std::abs(z[1]) + std::abs(z[2]))) {
                best.active_set.push_back(i);
            }
        }
    }
    return best;
}

Vec2 saturate(Vec2 u, double u_max) {
    const double speed = norm(u);
    if (speed > u_max) return u * (u_max / speed);
    return u;
}

ControlOutput compute_control(std::size_t xi, const FleetState& fleet, const Partition& part,
                              const GroundGrid& g, const ControllerParams& params) {
    const LinearizedBarrier lb = barrier(xi, fleet, part, g, params);
    const std::vector<ConstraintRow> collision = collision_rows(xi, fleet, params);
    const QPProblem qp = assemble_qp(lb, collision, params);
    const QPSolution sol = solve_qp(qp);

    ControlOutput out;
    out.h = lb.h;
    if (sol.feasible) {
        out.u = sol.u;
        out.w = sol.w;
        out.active_set = sol.active_set;
    } else {
        // Hard rows conflict: take a pure repulsion step away from the others.
        Vec2 dir;
        for (std::size_t j = 0; j < fleet.count(); ++j) {
            if (j == xi) continue;
            const Vec2 d = fleet.positions[xi] - fleet.positions[j];
            dir += d / norm_sq(d);
        }
        const double len = norm(dir);
        out.u = (len > 0.0) ? dir * (params.u_max / len) : Vec2{};
        out.w = 0.0;
        out.fallback = true;
    }
    out.u = saturate(out.u, params.u_max);
    return out;
}

}  // namespace coversim
