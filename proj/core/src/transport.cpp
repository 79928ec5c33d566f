#include "stretchlab/transport.hpp"

#include <array>
#include <cmath>

#include "stretchlab/errors.hpp"
#include "stretchlab/parallel.hpp"

namespace stretchlab {

namespace {

std::size_t grid_index(const BrownianPath& path, double t, const char* where) {
    const double kf = t / path.dt;
    const auto idx = static_cast<std::size_t>(std::llround(kf));
    if (std::abs(kf - std::round(kf)) > 1e-6 || idx > path.n_steps) {
        throw ValidationError(std::string(where) + ": t is not on the path grid");
    }
    return idx;
}

// Seven-point stencil around x: center plus +-h along each axis.
std::array<Vec3, 7> stencil(const Vec3& x, double h) {
    return {x,
            {x.x + h, x.y, x.z}, {x.x - h, x.y, x.z},
            {x.x, x.y + h, x.z}, {x.x, x.y - h, x.z},
            {x.x, x.y, x.z + h}, {x.x, x.y, x.z - h}};
}

Mat3 jacobian_from_stencil(const std::array<Vec3, 7>& pts, double h) {
    Mat3 j;
    for (int i = 0; i < 3; ++i) {
        const Vec3 col = (pts[1 + 2 * i] - pts[2 + 2 * i]) / (2.0 * h);
        j(0, i) = col.x;
        j(1, i) = col.y;
        j(2, i) = col.z;
    }
    return j;
}

// Reverse-integrate the whole stencil in lockstep over the first t_index
// increments (reversed). Returns the final states.
std::array<Vec3, 7> reverse_stencil(const VelocityField& field,
                                    std::array<Vec3, 7> pts, const BrownianPath& path,
                                    double sigma, std::size_t t_index) {
    const double dt = path.dt;
    for (std::size_t j = 0; j < t_index; ++j) {
        const std::size_t k = t_index - 1 - j;
        const double t_hi = dt * static_cast<double>(k + 1);
        for (Vec3& p : pts) {
            p = detail::reverse_step(field, t_hi, p, dt, path.increments[k], sigma);
            if (!p.finite()) {
                throw NonFiniteError("pullback: non-finite reverse trajectory");
            }
        }
    }
    return pts;
}

FieldSample assemble_pullback(const InitialField& b0, const std::array<Vec3, 7>& ends,
                              double t, const Vec3& x, double h) {
    const Mat3 j_inv = jacobian_from_stencil(ends, h);
    FieldSample s;
    s.t = t;
    s.x = x;
    s.provenance = FieldSample::Provenance::pullback;
    s.B = adjugate(j_inv) * b0.evaluate(ends[0]);
    s.det_residual = std::abs(det3(j_inv) - 1.0);
    if (!s.B.finite()) throw NonFiniteError("pullback: non-finite field value");
    return s;
}

}  // namespace

FieldSample pushforward(const InitialField& b0, const FlowSample& flow, double t) {
    const std::size_t idx = flow.index_of(t);
    if (flow.jacobians.size() != flow.trajectory.size()) {
        throw MissingJacobianError("pushforward: flow carries no Jacobian history");
    }
    FieldSample s;
    s.t = t;
    s.x = flow.trajectory[idx];
    s.B = flow.jacobians[idx] * b0.evaluate(flow.trajectory[0]);
    s.provenance = FieldSample::Provenance::pushforward;
    s.det_residual = std::abs(det3(flow.jacobians[idx]) - 1.0);
    return s;
}

FieldSample pullback_sample(const InitialField& b0, const VelocityField& field,
                            const BrownianPath& path, double sigma, double t,
                            const Vec3& x, const PullbackOptions& opts) {
    if (!x.finite()) throw NonFiniteError("pullback: non-finite evaluation point");
    const std::size_t idx = grid_index(path, t, "pullback");
    const auto ends = reverse_stencil(field, stencil(x, opts.fd_step), path, sigma, idx);
    return assemble_pullback(b0, ends, t, x, opts.fd_step);
}

Vec3 pullback_at(const InitialField& b0, const VelocityField& field,
                 const BrownianPath& path, double sigma, double t, const Vec3& x,
                 const PullbackOptions& opts) {
    return pullback_sample(b0, field, path, sigma, t, x, opts).B;
}

std::vector<Vec3> pullback_history(const InitialField& b0, const VelocityField& field,
                                   const BrownianPath& path, double sigma,
                                   const std::vector<std::size_t>& t_indices,
                                   const Vec3& x, const PullbackOptions& opts) {
    std::vector<Vec3> out;
    out.reserve(t_indices.size());
    for (std::size_t i = 1; i < t_indices.size(); ++i) {
        if (t_indices[i] <= t_indices[i - 1]) {
            throw ValidationError("pullback_history: t_indices must be ascending");
        }
    }
    if (sigma == 0.0 && field.time_independent()) {
        // Autonomous deterministic flow: the inverse at duration tau is the
        // backward flow for tau, so one sweep serves every requested time.
        auto pts = stencil(x, opts.fd_step);
        std::size_t done = 0;
        const double dt = path.dt;
        for (std::size_t target : t_indices) {
            for (; done < target; ++done) {
                const double t_hi = dt * static_cast<double>(done + 1);
                for (Vec3& p : pts) {
                    p = detail::reverse_step(field, t_hi, p, dt, Vec3{}, 0.0);
                    if (!p.finite()) {
                        throw NonFiniteError("pullback: non-finite reverse trajectory");
                    }
                }
            }
            out.push_back(
                assemble_pullback(b0, pts, dt * static_cast<double>(target), x,
                                  opts.fd_step)
                    .B);
        }
        return out;
    }
    for (std::size_t target : t_indices) {
        const double t = path.dt * static_cast<double>(target);
        out.push_back(pullback_at(b0, field, path, sigma, t, x, opts));
    }
    return out;
}

std::vector<double> AnnulusGrid::radii() const {
    std::vector<double> rs(n_r);
    if (n_r == 1) {
        rs[0] = r_min;
        return rs;
    }
    for (int i = 0; i < n_r; ++i) {
        const double f = static_cast<double>(i) / (n_r - 1);
        rs[i] = log_spaced ? r_min * std::pow(r_max / r_min, f)
                           : r_min + f * (r_max - r_min);
    }
    return rs;
}

std::vector<Vec3> AnnulusGrid::points() const {
    std::vector<Vec3> pts;
    pts.reserve(static_cast<std::size_t>(n_r) * n_theta);
    for (double r : radii()) {
        for (int j = 0; j < n_theta; ++j) {
            const double th = 2.0 * M_PI * j / n_theta;
            pts.push_back({r * std::cos(th), r * std::sin(th), z});
        }
    }
    return pts;
}

std::vector<Vec3> BoxGrid::points() const {
    std::vector<Vec3> pts;
    pts.reserve(static_cast<std::size_t>(n) * n * n);
    const double half = 0.5 * spacing * (n - 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                pts.push_back({center.x - half + i * spacing,
                               center.y - half + j * spacing,
                               center.z - half + k * spacing});
    return pts;
}

std::vector<FieldSample> reconstruct_grid(const InitialField& b0,
                                          const VelocityField& field,
                                          const BrownianPath& path, double sigma,
                                          double t, const AnnulusGrid& grid,
                                          const PullbackOptions& opts) {
    const std::vector<Vec3> pts = grid.points();
    std::vector<FieldSample> samples(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        try {
            samples[i] = pullback_sample(b0, field, path, sigma, t, pts[i], opts);
        } catch (const Error& e) {
            samples[i].t = t;
            samples[i].x = pts[i];
            samples[i].ok = false;
            samples[i].error = e.what();
        }
    });
    return samples;
}

}  // namespace stretchlab
