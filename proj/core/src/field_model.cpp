#include "coversim/field_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace coversim {

namespace {
constexpr double kPi = std::numbers::pi;
}

Vec2 project(const VirtualPoint& q, const MappingParams& m) {
    if (!(q.theta_v > 0.0) || q.theta_v > 0.5 * kPi + 1e-12) {
        throw std::invalid_argument("project: theta_v must lie in (0, pi/2]");
    }
    if (!(m.z_c > q.z)) {
        throw std::invalid_argument("project: drone altitude z_c must exceed target z");
    }
    const double reach = (m.z_c - q.z) * std::tan(0.5 * kPi - q.theta_v);
    return {q.x - reach * std::cos(q.theta_h),
            q.y - reach * std::sin(q.theta_h)};
}

VirtualField VirtualField::discretize(double size_x, double size_y, double spacing,
                                      int theta_h_bins, int theta_v_bins) {
    if (!(size_x > 0.0) || !(size_y > 0.0) || !(spacing > 0.0)) {
        throw std::invalid_argument("discretize: field extents and spacing must be positive");
    }
    if (theta_h_bins < 1 || theta_v_bins < 1) {
        throw std::invalid_argument("discretize: need at least one bin per angle");
    }
    VirtualField f;
    f.nx = static_cast<int>(std::lround(size_x / spacing));
    f.ny = static_cast<int>(std::lround(size_y / spacing));
    if (f.nx < 1 || f.ny < 1) {
        throw std::invalid_argument("discretize: field smaller than one cell");
    }
    f.spacing = spacing;
    f.n_theta_h = theta_h_bins;
    f.n_theta_v = theta_v_bins;
    f.d_theta_h = 2.0 * kPi / theta_h_bins;
    f.d_theta_v = 0.5 * kPi / theta_v_bins;
    f.cell_volume_ = spacing * spacing * f.d_theta_h * f.d_theta_v;
    f.phi.assign(static_cast<std::size_t>(f.nx) * f.ny * theta_h_bins * theta_v_bins, 0.0);
    return f;
}

VirtualPoint VirtualField::point(std::size_t cell) const {
    const std::size_t ground = static_cast<std::size_t>(nx) * ny;
    const std::size_t ix = cell % nx;
    const std::size_t iy = (cell / nx) % ny;
    const std::size_t hbin = (cell / ground) % n_theta_h;
    const std::size_t vbin = cell / (ground * n_theta_h);
    VirtualPoint q;
    q.x = (static_cast<double>(ix) + 0.5) * spacing;
    q.y = (static_cast<double>(iy) + 0.5) * spacing;
    q.z = 0.0;  // flat ground
    q.theta_h = -kPi + (static_cast<double>(hbin) + 0.5) * d_theta_h;
    q.theta_v = (static_cast<double>(vbin) + 0.5) * d_theta_v;
    return q;
}

Vec2 VirtualField::projected(std::size_t cell, const MappingParams& m) const {
    return project(point(cell), m);
}

double VirtualField::total_phi() const {
    double s = 0.0;
    for (double v : phi) s += v;
    return s;
}

GroundGrid GroundGrid::make(double size_x, double size_y, int cols, int rows) {
    if (!(size_x > 0.0) || !(size_y > 0.0) || cols < 1 || rows < 1) {
        throw std::invalid_argument("GroundGrid: extents and polygon counts must be positive");
    }
    GroundGrid g;
    g.cols = cols;
    g.rows = rows;
    g.pitch_x = size_x / cols;
    g.pitch_y = size_y / rows;
    g.psi.assign(static_cast<std::size_t>(cols) * rows, 0.0);
    return g;
}

Vec2 GroundGrid::gravity_point(std::size_t l) const {
    const std::size_t col = l % cols;
    const std::size_t row = l / cols;
    return {(static_cast<double>(col) + 0.5) * pitch_x,
            (static_cast<double>(row) + 0.5) * pitch_y};
}

long GroundGrid::polygon_index(Vec2 p) const {
    const double fx = p.x / pitch_x;
    const double fy = p.y / pitch_y;
    if (fx < 0.0 || fy < 0.0) return -1;
    const long col = static_cast<long>(fx);
    const long row = static_cast<long>(fy);
    if (col >= cols || row >= rows) return -1;
    return row * cols + col;
}

double GroundGrid::total_psi() const {
    double s = 0.0;
    for (double v : psi) s += v;
    return s;
}

CompressionReport compress(const VirtualField& f, GroundGrid& g, const MappingParams& m) {
    std::fill(g.psi.begin(), g.psi.end(), 0.0);
    g.cell_volume = f.cell_volume();
    CompressionReport report;

    const std::size_t ground = static_cast<std::size_t>(f.nx) * f.ny;
    // The projection offset depends only on the angle bin (z = 0 for all
    // cells), so hoist the trig out of the ground loop.
    for (int vbin = 0; vbin < f.n_theta_v; ++vbin) {
        const double theta_v = (vbin + 0.5) * f.d_theta_v;
        const double reach = m.z_c * std::tan(0.5 * kPi - theta_v);
        for (int hbin = 0; hbin < f.n_theta_h; ++hbin) {
            const double theta_h = -kPi + (hbin + 0.5) * f.d_theta_h;
            const Vec2 offset{reach * std::cos(theta_h), reach * std::sin(theta_h)};
            const std::size_t base = (static_cast<std::size_t>(vbin) * f.n_theta_h + hbin) * ground;
            for (int iy = 0; iy < f.ny; ++iy) {
                const double cy = (iy + 0.5) * f.spacing;
                for (int ix = 0; ix < f.nx; ++ix) {
                    const double cx = (ix + 0.5) * f.spacing;
                    const long l = g.polygon_index({cx - offset.x, cy - offset.y});
                    const std::size_t cell = base + static_cast<std::size_t>(iy) * f.nx + ix;
                    if (l < 0) {
                        ++report.dropped;
                    } else {
                        g.psi[static_cast<std::size_t>(l)] += f.phi[cell];
                        ++report.kept;
                    }
                }
            }
        }
    }
    return report;
}

double objective_J(const GroundGrid& g) {
    double j = 0.0;
    for (double v : g.psi) j += v * g.cell_volume;
    return j;
}

}  // namespace coversim
