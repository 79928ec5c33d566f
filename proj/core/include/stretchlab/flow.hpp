#ifndef STRETCHLAB_FLOW_HPP
#define STRETCHLAB_FLOW_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "stretchlab/brownian.hpp"
#include "stretchlab/fields.hpp"
#include "stretchlab/geometry.hpp"

namespace stretchlab {

enum class JacobianMethod { variational, finite_difference };

struct FlowOptions {
    /// Also carry the Jacobian history DPhi_t(x0) in the sample.
    bool with_jacobian = false;
    JacobianMethod jacobian_method = JacobianMethod::variational;
    /// Perturbation size for the finite-difference Jacobian.
    double fd_step = 1e-5;
};

/// One realization of the Lagrangian flow from a fixed starting point:
/// trajectory of X_t and, optionally, the Jacobian history.
struct FlowSample {
    std::vector<Vec3> trajectory;  // n_steps + 1 states, trajectory[0] = x0
    std::vector<Mat3> jacobians;   // empty, or n_steps + 1 with jacobians[0] = I
    double sigma = 0.0;
    double dt = 0.0;
    std::string scheme;            // "rk4" (sigma = 0) or "euler_maruyama"
    /// Largest |det(DPhi) - 1| seen along the Jacobian history.
    double max_det_drift = 0.0;

    std::size_t n_steps() const { return trajectory.empty() ? 0 : trajectory.size() - 1; }
    /// Grid index of time t; throws if t is not a grid point.
    std::size_t index_of(double t) const;
};

struct InverseOptions {
    /// Forward-integrate the result and check the round trip.
    bool verify = false;
    double inverse_tol = 1e-3;
    /// Newton polish iterations against the discrete forward map (0 = off).
    int newton_iters = 0;
    double fd_step = 1e-5;
};

/// Integrate dX = v(t, X) dt + sigma dW from x0 over the whole path.
/// sigma = 0 uses classical RK4 on the ODE; sigma != 0 uses Euler-Maruyama,
/// which for this additive noise already has strong order one.
/// Throws NonFiniteError if a step produces NaN/Inf.
FlowSample integrate_flow(const VelocityField& field, const Vec3& x0,
                          const BrownianPath& path, double sigma,
                          const FlowOptions& opts = {});

/// Jacobian history DPhi_t(x0) on the path grid.
///   variational: sigma = 0 co-integrates the matrix ODE with the position by
///     RK4; sigma != 0 propagates the exact derivative of the discrete
///     Euler-Maruyama map, Z_{k+1} = (I + dt Dv(t_k, X_k)) Z_k.
///   finite_difference: six perturbed flows x0 +- h e_i sharing the same
///     increments, central differences per column.
std::vector<Mat3> flow_jacobian(const VelocityField& field, const Vec3& x0,
                                const BrownianPath& path, double sigma,
                                JacobianMethod method, double fd_step = 1e-5);

/// Inverse flow by time reversal: starting from y at grid time t, step backward
/// through the same stored increments in reverse order with negated drift and
/// noise (Heun drift stages; exact for pure noise). Returns x with
/// Phi_t(x) ~= y up to O(dt). Optional Newton polish drives the round-trip
/// residual of the discrete forward map to round-off.
Vec3 integrate_inverse_flow(const VelocityField& field, const Vec3& y,
                            const BrownianPath& path, double sigma, double t,
                            const InverseOptions& opts = {});

/// Backward sweep from y consuming the first t_index increments in reverse;
/// element j of the result is the state after j backward steps (element 0 is y,
/// the last element equals integrate_inverse_flow at the same time).
std::vector<Vec3> reverse_sweep(const VelocityField& field, const Vec3& y,
                                const BrownianPath& path, double sigma,
                                std::size_t t_index);

/// History of (DPhi_t(x))^{-1} along an existing flow sample, integrating
/// d/dt M = -M Dv(t, Phi_t(x)) with M_0 = I. Each step applies the exact matrix
/// inverse of the one-step factor I + dt Dv, so for Euler-Maruyama samples the
/// product with the variational Jacobian history stays at identity to round-off.
std::vector<Mat3> inverse_jacobian_evolve(const VelocityField& field,
                                          const FlowSample& flow);

namespace detail {

Vec3 rk4_step(const VelocityField& field, double t, const Vec3& x, double dt);
Vec3 em_step(const VelocityField& field, double t, const Vec3& x, double dt,
             const Vec3& dw, double sigma);
/// One backward step from grid time t_hi to t_hi - dt.
Vec3 reverse_step(const VelocityField& field, double t_hi, const Vec3& x, double dt,
                  const Vec3& dw, double sigma);
/// solve a * x = b via the adjugate; throws NonFiniteError for singular a.
Vec3 solve3(const Mat3& a, const Vec3& b);

}  // namespace detail

}  // namespace stretchlab

#endif
