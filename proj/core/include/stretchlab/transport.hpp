#ifndef STRETCHLAB_TRANSPORT_HPP
#define STRETCHLAB_TRANSPORT_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "stretchlab/fields.hpp"
#include "stretchlab/flow.hpp"
#include "stretchlab/geometry.hpp"

namespace stretchlab {

/// One reconstructed value of the passive field.
struct FieldSample {
    enum class Provenance { pushforward, pullback };

    double t = 0.0;
    Vec3 x;                      // evaluation point
    Vec3 B;                      // field value there
    Provenance provenance = Provenance::pullback;
    /// |det(DPhi^{-1}) - 1| of the Jacobian used; 0 for exact identities.
    double det_residual = 0.0;
    bool ok = true;
    std::string error;           // set when ok is false (grid aggregation)
};

struct PullbackOptions {
    /// Step for the finite-difference Jacobian of the inverse map.
    double fd_step = 1e-5;
};

/// Field value carried to the advected point: (Phi_t(x0), DPhi_t(x0) B0(x0)).
/// The flow must have been integrated with a Jacobian history through t,
/// otherwise MissingJacobianError is thrown.
FieldSample pushforward(const InitialField& b0, const FlowSample& flow, double t);

/// Field value at a fixed point x: reverse-integrate to y = Phi_t^{-1}(x),
/// build the Jacobian of the inverse map by central differences of the reversed
/// integration (all seven trajectories share the same reversed increments), and
/// return adjugate(J_inv) B0(y). The adjugate *is* the inverse here because the
/// flow is measure-preserving; no matrix inversion is performed.
Vec3 pullback_at(const InitialField& b0, const VelocityField& field,
                 const BrownianPath& path, double sigma, double t, const Vec3& x,
                 const PullbackOptions& opts = {});

/// Same computation, with provenance and the det quality metric attached.
FieldSample pullback_sample(const InitialField& b0, const VelocityField& field,
                            const BrownianPath& path, double sigma, double t,
                            const Vec3& x, const PullbackOptions& opts = {});

/// Pullback values at several grid times for one point. For sigma = 0 and a
/// time-independent field all times are read off one backward sweep; otherwise
/// each time is integrated separately. t_indices must be ascending grid indices.
std::vector<Vec3> pullback_history(const InitialField& b0, const VelocityField& field,
                                   const BrownianPath& path, double sigma,
                                   const std::vector<std::size_t>& t_indices,
                                   const Vec3& x, const PullbackOptions& opts = {});

/// Annulus sample grid in the z = z0 plane: n_r radii (log-spaced by default)
/// by n_theta uniform angles.
struct AnnulusGrid {
    double r_min = 0.1;
    double r_max = 1.0;
    int n_r = 8;
    int n_theta = 16;
    double z = 0.0;
    bool log_spaced = true;

    std::vector<double> radii() const;
    std::vector<Vec3> points() const;
};

/// Cubic lattice of n^3 points centered at `center` with the given spacing.
struct BoxGrid {
    Vec3 center;
    double spacing = 1e-2;
    int n = 7;

    std::vector<Vec3> points() const;
};

/// pullback_sample applied pointwise over an annulus grid, one shared Brownian
/// path for the whole sweep. Per-point failures are recorded in the samples,
/// not thrown.
std::vector<FieldSample> reconstruct_grid(const InitialField& b0,
                                          const VelocityField& field,
                                          const BrownianPath& path, double sigma,
                                          double t, const AnnulusGrid& grid,
                                          const PullbackOptions& opts = {});

}  // namespace stretchlab

#endif
