#include "coversim/coverage_dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace coversim {

double performance(Vec2 p, Vec2 x, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("performance: sigma must be positive");
    return std::exp(-norm_sq(p - x) / (2.0 * sigma * sigma));
}

namespace {

double best_performance(const FleetState& fleet, Vec2 target, double sigma) {
    double best = 0.0;
    for (Vec2 p : fleet.positions) {
        const double l = performance(p, target, sigma);
        if (l > best) best = l;
    }
    return best;
}

}  // namespace

void decay_full(VirtualField& f, const FleetState& fleet, const PerfParams& params,
                const MappingParams& m, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("decay_full: dt must be positive");
    for (std::size_t cell = 0; cell < f.cell_count(); ++cell) {
        if (f.phi[cell] == 0.0) continue;
        const double l = best_performance(fleet, f.projected(cell, m), params.sigma);
        f.phi[cell] *= std::exp(-params.delta * l * dt);
    }
}

void decay_compressed(GroundGrid& g, const FleetState& fleet, const PerfParams& params,
                      double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("decay_compressed: dt must be positive");
    for (std::size_t l = 0; l < g.polygon_count(); ++l) {
        if (g.psi[l] == 0.0) continue;
        const double perf = best_performance(fleet, g.gravity_point(l), params.sigma);
        g.psi[l] *= std::exp(-params.delta * perf * dt);
    }
}

Partition voronoi_assign(const FleetState& fleet, const GroundGrid& g) {
    if (fleet.count() == 0) throw std::invalid_argument("voronoi_assign: empty fleet");
    Partition part;
    part.owner.resize(g.polygon_count());
    for (std::size_t l = 0; l < g.polygon_count(); ++l) {
        const Vec2 x = g.gravity_point(l);
        int best = 0;
        double best_d = norm_sq(fleet.positions[0] - x);
        for (std::size_t i = 1; i < fleet.count(); ++i) {
            const double d = norm_sq(fleet.positions[i] - x);
            if (d < best_d) {  // strict: ties stay with the lower index
                best_d = d;
                best = static_cast<int>(i);
            }
        }
        part.owner[l] = best;
    }
    return part;
}

double metric_I(std::size_t xi, const FleetState& fleet, const Partition& part,
                const GroundGrid& g, const PerfParams& params) {
    const Vec2 p = fleet.positions[xi];
    double sum = 0.0;
    for (std::size_t l = 0; l < g.polygon_count(); ++l) {
        if (part.owner[l] != static_cast<int>(xi)) continue;
        sum += performance(p, g.gravity_point(l), params.sigma) * g.psi[l];
    }
    return params.delta * g.cell_volume * sum;
}

double cost_rate_check(const FleetState& fleet, const Partition& part,
                       const GroundGrid& g, const PerfParams& params) {
    double rate = 0.0;
    for (std::size_t xi = 0; xi < fleet.count(); ++xi) {
        rate -= metric_I(xi, fleet, part, g, params);
    }
    return rate;
}

double j_near(Vec2 p, const GroundGrid& g, const PerfParams& params) {
    const double r_sq = 4.0 * params.sigma * params.sigma;
    double sum = 0.0;
    for (std::size_t l = 0; l < g.polygon_count(); ++l) {
        if (norm_sq(p - g.gravity_point(l)) < r_sq) {
            sum += g.psi[l] * g.cell_volume;
        }
    }
    return sum;
}

}  // namespace coversim
