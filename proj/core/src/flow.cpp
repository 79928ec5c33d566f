#include "stretchlab/flow.hpp"

#include <cmath>

#include "stretchlab/errors.hpp"

namespace stretchlab {

namespace detail {

Vec3 rk4_step(const VelocityField& field, double t, const Vec3& x, double dt) {
    const Vec3 k1 = field.evaluate(t, x);
    const Vec3 k2 = field.evaluate(t + 0.5 * dt, x + (0.5 * dt) * k1);
    const Vec3 k3 = field.evaluate(t + 0.5 * dt, x + (0.5 * dt) * k2);
    const Vec3 k4 = field.evaluate(t + dt, x + dt * k3);
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Vec3 em_step(const VelocityField& field, double t, const Vec3& x, double dt,
             const Vec3& dw, double sigma) {
    return x + dt * field.evaluate(t, x) + sigma * dw;
}

Vec3 reverse_step(const VelocityField& field, double t_hi, const Vec3& x, double dt,
                  const Vec3& dw, double sigma) {
    // Negated drift and noise; Heun stages for the drift keep the rotation-
    // dominated fields from drifting radially. Exact when v = 0.
    const Vec3 v1 = field.evaluate(t_hi, x);
    const Vec3 pred = x - dt * v1 - sigma * dw;
    const Vec3 v2 = field.evaluate(t_hi - dt, pred);
    return x - (0.5 * dt) * (v1 + v2) - sigma * dw;
}

Vec3 solve3(const Mat3& a, const Vec3& b) {
    const double d = det3(a);
    if (!(std::abs(d) > 1e-300)) {
        throw NonFiniteError("solve3: singular matrix");
    }
    return adjugate(a) * b / d;
}

}  // namespace detail

namespace {

void check_finite(const Vec3& x, const char* where) {
    if (!x.finite()) {
        throw NonFiniteError(std::string(where) +
                             ": non-finite state (dt too large or field error)");
    }
}

// Forward trajectory only; RK4 for sigma = 0, Euler-Maruyama otherwise.
std::vector<Vec3> forward_trajectory(const VelocityField& field, const Vec3& x0,
                                     const BrownianPath& path, double sigma) {
    if (!x0.finite()) throw NonFiniteError("integrate_flow: non-finite x0");
    std::vector<Vec3> traj(path.n_steps + 1);
    traj[0] = x0;
    Vec3 x = x0;
    const double dt = path.dt;
    if (sigma == 0.0) {
        for (std::size_t k = 0; k < path.n_steps; ++k) {
            x = detail::rk4_step(field, dt * static_cast<double>(k), x, dt);
            check_finite(x, "integrate_flow");
            traj[k + 1] = x;
        }
    } else {
        for (std::size_t k = 0; k < path.n_steps; ++k) {
            x = detail::em_step(field, dt * static_cast<double>(k), x, dt,
                                path.increments[k], sigma);
            check_finite(x, "integrate_flow");
            traj[k + 1] = x;
        }
    }
    return traj;
}

// Coupled RK4 for (X, Z) with dZ = Dv(t, X) Z dt. Used when sigma = 0.
std::vector<Mat3> variational_rk4(const VelocityField& field, const Vec3& x0,
                                  const BrownianPath& path) {
    std::vector<Mat3> hist(path.n_steps + 1);
    hist[0] = Mat3::identity();
    Vec3 x = x0;
    Mat3 z = Mat3::identity();
    const double dt = path.dt;
    for (std::size_t k = 0; k < path.n_steps; ++k) {
        const double t = dt * static_cast<double>(k);
        const Vec3 k1 = field.evaluate(t, x);
        const Mat3 m1 = field.jacobian(t, x) * z;
        const Vec3 x2 = x + (0.5 * dt) * k1;
        const Vec3 k2 = field.evaluate(t + 0.5 * dt, x2);
        const Mat3 m2 = field.jacobian(t + 0.5 * dt, x2) * (z + (0.5 * dt) * m1);
        const Vec3 x3 = x + (0.5 * dt) * k2;
        const Vec3 k3 = field.evaluate(t + 0.5 * dt, x3);
        const Mat3 m3 = field.jacobian(t + 0.5 * dt, x3) * (z + (0.5 * dt) * m2);
        const Vec3 x4 = x + dt * k3;
        const Vec3 k4 = field.evaluate(t + dt, x4);
        const Mat3 m4 = field.jacobian(t + dt, x4) * (z + dt * m3);
        x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        z = z + (dt / 6.0) * (m1 + 2.0 * m2 + 2.0 * m3 + m4);
        check_finite(x, "flow_jacobian");
        if (!z.finite()) throw NonFiniteError("flow_jacobian: non-finite Jacobian");
        hist[k + 1] = z;
    }
    return hist;
}

// Derivative of the discrete Euler-Maruyama map: Z_{k+1} = (I + dt A_k) Z_k.
// The additive noise drops out of the variational equation; it enters only
// through the trajectory the gradient is evaluated on.
std::vector<Mat3> variational_em(const VelocityField& field,
                                 const std::vector<Vec3>& traj, double dt) {
    const std::size_t n = traj.size() - 1;
    std::vector<Mat3> hist(n + 1);
    hist[0] = Mat3::identity();
    Mat3 z = Mat3::identity();
    for (std::size_t k = 0; k < n; ++k) {
        const Mat3 a = field.jacobian(dt * static_cast<double>(k), traj[k]);
        z = z + dt * (a * z);
        if (!z.finite()) throw NonFiniteError("flow_jacobian: non-finite Jacobian");
        hist[k + 1] = z;
    }
    return hist;
}

std::vector<Mat3> finite_difference_jacobian(const VelocityField& field,
                                             const Vec3& x0, const BrownianPath& path,
                                             double sigma, double h) {
    std::vector<Vec3> plus[3], minus[3];
    for (int i = 0; i < 3; ++i) {
        Vec3 e;
        (i == 0 ? e.x : i == 1 ? e.y : e.z) = h;
        plus[i] = forward_trajectory(field, x0 + e, path, sigma);
        minus[i] = forward_trajectory(field, x0 - e, path, sigma);
    }
    std::vector<Mat3> hist(path.n_steps + 1);
    for (std::size_t k = 0; k <= path.n_steps; ++k) {
        Mat3 j;
        for (int i = 0; i < 3; ++i) {
            const Vec3 col = (plus[i][k] - minus[i][k]) / (2.0 * h);
            j(0, i) = col.x;
            j(1, i) = col.y;
            j(2, i) = col.z;
        }
        hist[k] = j;
    }
    return hist;
}

double det_drift(const std::vector<Mat3>& hist) {
    double worst = 0.0;
    for (const Mat3& j : hist) worst = std::max(worst, std::abs(det3(j) - 1.0));
    return worst;
}

}  // namespace

std::size_t FlowSample::index_of(double t) const {
    const double k = t / dt;
    const auto idx = static_cast<std::size_t>(std::llround(k));
    if (std::abs(k - std::round(k)) > 1e-6 || idx > n_steps()) {
        throw ValidationError("FlowSample::index_of: t is not on the path grid");
    }
    return idx;
}

FlowSample integrate_flow(const VelocityField& field, const Vec3& x0,
                          const BrownianPath& path, double sigma,
                          const FlowOptions& opts) {
    FlowSample s;
    s.sigma = sigma;
    s.dt = path.dt;
    s.scheme = (sigma == 0.0) ? "rk4" : "euler_maruyama";
    s.trajectory = forward_trajectory(field, x0, path, sigma);
    if (opts.with_jacobian) {
        if (opts.jacobian_method == JacobianMethod::finite_difference) {
            s.jacobians = finite_difference_jacobian(field, x0, path, sigma, opts.fd_step);
        } else if (sigma == 0.0) {
            s.jacobians = variational_rk4(field, x0, path);
        } else {
            s.jacobians = variational_em(field, s.trajectory, path.dt);
        }
        s.max_det_drift = det_drift(s.jacobians);
    }
    return s;
}

std::vector<Mat3> flow_jacobian(const VelocityField& field, const Vec3& x0,
                                const BrownianPath& path, double sigma,
                                JacobianMethod method, double fd_step) {
    if (method == JacobianMethod::finite_difference) {
        return finite_difference_jacobian(field, x0, path, sigma, fd_step);
    }
    if (sigma == 0.0) return variational_rk4(field, x0, path);
    return variational_em(field, forward_trajectory(field, x0, path, sigma), path.dt);
}

std::vector<Vec3> reverse_sweep(const VelocityField& field, const Vec3& y,
                                const BrownianPath& path, double sigma,
                                std::size_t t_index) {
    if (t_index > path.n_steps) {
        throw ValidationError("reverse_sweep: t_index beyond the path grid");
    }
    std::vector<Vec3> states(t_index + 1);
    states[0] = y;
    Vec3 x = y;
    const double dt = path.dt;
    for (std::size_t j = 0; j < t_index; ++j) {
        const std::size_t k = t_index - 1 - j;  // consuming increment k
        x = detail::reverse_step(field, dt * static_cast<double>(k + 1), x, dt,
                                 path.increments[k], sigma);
        check_finite(x, "integrate_inverse_flow");
        states[j + 1] = x;
    }
    return states;
}

Vec3 integrate_inverse_flow(const VelocityField& field, const Vec3& y,
                            const BrownianPath& path, double sigma, double t,
                            const InverseOptions& opts) {
    const double kf = t / path.dt;
    const auto t_index = static_cast<std::size_t>(std::llround(kf));
    if (std::abs(kf - std::round(kf)) > 1e-6 || t_index > path.n_steps) {
        throw ValidationError("integrate_inverse_flow: t is not on the path grid");
    }
    Vec3 x = reverse_sweep(field, y, path, sigma, t_index).back();

    BrownianPath prefix;
    auto forward_to_t = [&](const Vec3& from) {
        if (prefix.increments.empty() && t_index > 0) {
            prefix.seed = path.seed;
            prefix.dt = path.dt;
            prefix.n_steps = t_index;
            prefix.increments.assign(path.increments.begin(),
                                     path.increments.begin() + t_index);
        }
        if (t_index == 0) return from;
        return forward_trajectory(field, from, prefix, sigma).back();
    };

    for (int it = 0; it < opts.newton_iters; ++it) {
        const Vec3 residual = y - forward_to_t(x);
        if (residual.norm() < 1e-14) break;
        Mat3 j;
        const double h = opts.fd_step;
        for (int i = 0; i < 3; ++i) {
            Vec3 e;
            (i == 0 ? e.x : i == 1 ? e.y : e.z) = h;
            const Vec3 col = (forward_to_t(x + e) - forward_to_t(x - e)) / (2.0 * h);
            j(0, i) = col.x;
            j(1, i) = col.y;
            j(2, i) = col.z;
        }
        x += detail::solve3(j, residual);
        check_finite(x, "integrate_inverse_flow(newton)");
    }

    if (opts.verify) {
        const double gap = (forward_to_t(x) - y).norm();
        if (gap > opts.inverse_tol) {
            throw InverseVerificationError(
                "inverse flow round trip residual " + std::to_string(gap) +
                " exceeds tolerance " + std::to_string(opts.inverse_tol));
        }
    }
    return x;
}

std::vector<Mat3> inverse_jacobian_evolve(const VelocityField& field,
                                          const FlowSample& flow) {
    const std::size_t n = flow.n_steps();
    std::vector<Mat3> hist(n + 1);
    hist[0] = Mat3::identity();
    Mat3 m = Mat3::identity();
    const double dt = flow.dt;
    for (std::size_t k = 0; k < n; ++k) {
        const Mat3 a = field.jacobian(dt * static_cast<double>(k), flow.trajectory[k]);
        // exact inverse of the one-step factor I + dt A
        const Mat3 f = Mat3::identity() + dt * a;
        const double d = det3(f);
        if (!(std::abs(d) > 1e-300)) {
            throw NonFiniteError("inverse_jacobian_evolve: singular step factor");
        }
        m = m * (adjugate(f) * (1.0 / d));
        if (!m.finite()) {
            throw NonFiniteError("inverse_jacobian_evolve: non-finite state");
        }
        hist[k + 1] = m;
    }
    return hist;
}

}  // namespace stretchlab
