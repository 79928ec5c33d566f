#ifndef STRETCHLAB_DIAGNOSTICS_HPP
#define STRETCHLAB_DIAGNOSTICS_HPP

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "stretchlab/brownian.hpp"
#include "stretchlab/exact_solution.hpp"
#include "stretchlab/fields.hpp"
#include "stretchlab/geometry.hpp"
#include "stretchlab/transport.hpp"

namespace stretchlab {

/// A reconstructed field: any callable giving B(t, x). Implementations may
/// throw library errors at points they cannot evaluate; grid sweeps count those
/// points as skipped.
using FieldAt = std::function<Vec3(double, const Vec3&)>;

/// B(t, x) from the closed-form deterministic solution (valid on 0 < r < 1).
FieldAt exact_reconstructor(const ExactSolution& exact);

/// B(t, x) by numerical pullback along one noise realization. The field and
/// path must outlive the functor.
FieldAt pullback_reconstructor(const InitialField& b0, const VelocityField& field,
                               const BrownianPath& path, double sigma,
                               const PullbackOptions& opts = {});

struct StretchReport {
    double t = 0.0;
    double r_min = 0.0, r_max = 0.0;  // annulus scanned
    double sup_B = 0.0;               // max |B| over the grid (lower bound of the sup)
    Vec3 argmax;
    int samples = 0;                  // points evaluated
    int skipped = 0;                  // points that failed to evaluate
};

/// Max |B(t, .)| over a log-spaced-r by uniform-theta grid at z = grid.z.
StretchReport stretch_supremum(const FieldAt& field_at, double t,
                               const AnnulusGrid& grid);

/// Max |B| per radius ring, for blow-up scans: one entry per grid radius.
std::vector<StretchReport> stretch_per_radius(const FieldAt& field_at, double t,
                                              const AnnulusGrid& grid);

struct Polyline {
    std::vector<Vec3> vertices;
    double t = 0.0;

    double arc_length() const;
};

struct LineEvolveOptions {
    double dt = 1e-3;
    /// Split any segment whose image chord exceeds this length.
    double refine_len = 0.05;
    /// Split when the re-advected midpoint strays from the chord midpoint by
    /// more than this; negative selects refine_len / 8.
    double sagitta_tol = -1.0;
    /// Split when the polyline turns by more than this angle (radians) at the
    /// re-advected midpoint. This is what detects the unbounded winding of the
    /// deterministic spiral, whose total curvature diverges at the axis even
    /// though its arc length stays finite.
    double turn_tol = 0.5;
    int vertex_budget = 4000;
    int initial_vertices = 33;
    /// Throw VertexBudgetError instead of returning a saturated result.
    bool throw_on_budget = true;
};

struct LineEvolution {
    std::vector<Polyline> snapshots;
    bool budget_exhausted = false;
    int vertices_used = 0;
};

/// Advect the material segment [from, to] under one shared noise realization
/// and record it at each snapshot time. Refinement points are inserted at t = 0
/// and re-advected through the whole history, which is exact Lagrangian
/// refinement. Snapshot times must be ascending multiples of dt.
LineEvolution evolve_line(const VelocityField& field, double sigma,
                          std::uint64_t seed, const std::vector<double>& t_snapshots,
                          const Vec3& from, const Vec3& to,
                          const LineEvolveOptions& opts = {});

struct PowerLawFit {
    double slope = 0.0;
    double r2 = 0.0;
};

/// Least-squares slope of log(sup) against log(r). Requires at least 5 samples
/// spanning at least two decades of r; throws InsufficientSpanError otherwise.
PowerLawFit fit_blowup_exponent(const std::vector<std::pair<double, double>>& r_sup);

/// Smooth localized test function phi(x) = amplitude * exp(-|x-c|^2 / (2 w^2))
/// with closed-form gradient and Laplacian. Numerically supported inside
/// |x - c| <= cutoff_sigmas * w.
struct GaussianBump {
    Vec3 center;
    double width = 0.1;
    Vec3 amplitude{1.0, 0.0, 0.0};
    double cutoff_sigmas = 4.0;

    double envelope(const Vec3& x) const;
    Vec3 phi(const Vec3& x) const;
    /// Row-major gradient, entry(i,j) = d phi_i / d x_j.
    Mat3 dphi(const Vec3& x) const;
    Vec3 laplacian(const Vec3& x) const;
    double support_radius() const { return cutoff_sigmas * width; }
};

struct WeakFormSpec {
    /// Points per axis of the tensor space grid. Simpson rule over the bump
    /// support (point count forced odd), or Gauss-Hermite when hermite is set.
    int space_n = 25;
    /// Gauss-Hermite tensor nodes matched to the bump's Gaussian factor.
    /// Every term of the weak identity carries exactly one such factor, so the
    /// per-axis quadrature error falls much faster than Simpson's h^4.
    bool hermite = false;
    /// Number of sub-intervals of [0, t] for the time quadrature and the
    /// left-endpoint stochastic sums.
    int time_nodes = 10;
    /// Re-evaluate on a doubled grid and fail if the residual moves > 20%.
    bool check_resolution = false;
};

struct WeakFormResult {
    double residual = 0.0;      // signed defect of the weak identity
    double scale = 0.0;         // ||phi||_L1 * max(1, sup |B| seen)
    double pairing_t = 0.0;     // <B_t, phi>
    double pairing_0 = 0.0;     // <B_0, phi>
    double drift_term = 0.0;    // integral of <(Dphi)^A v, B_r> dr
    double ito_term = 0.0;      // sigma * sum_k int <(Dphi) e_k, B_r> dW^k
    double laplace_term = 0.0;  // sigma^2/2 * integral of <Delta phi, B_r> dr

    double scaled() const { return std::abs(residual) / scale; }
};

/// Residual of the weak formulation along one realization. The drift and
/// Laplacian integrals use trapezoidal time quadrature; the stochastic
/// integrals use left-endpoint sums against the stored increments (the Ito
/// convention), so their ensemble mean vanishes for a true solution. For
/// sigma = 0 the stochastic and Laplacian terms are identically zero and the
/// identity reduces to the transport balance.
WeakFormResult weak_form_residual(
    const std::function<std::vector<Vec3>(const Vec3&, const std::vector<std::size_t>&)>&
        field_history,
    const GaussianBump& phi, const VelocityField& v, const BrownianPath& path,
    double sigma, double t, const WeakFormSpec& spec = {});

/// History evaluator backed by the numerical pullback.
std::function<std::vector<Vec3>(const Vec3&, const std::vector<std::size_t>&)>
history_from_pullback(const InitialField& b0, const VelocityField& field,
                      const BrownianPath& path, double sigma,
                      const PullbackOptions& opts = {});

/// History evaluator backed by the closed-form solution (sigma = 0 only).
std::function<std::vector<Vec3>(const Vec3&, const std::vector<std::size_t>&)>
history_from_exact(const ExactSolution& exact, double dt);

/// Max |central-difference divergence| over the interior of a cubic lattice of
/// field values (row-major x, y, z; n points per axis).
double divergence_residual(const std::vector<Vec3>& values, int n, double spacing);

/// Evaluate a reconstructed field on a box lattice (parallel, deterministic).
std::vector<Vec3> sample_box(const FieldAt& field_at, double t, const BoxGrid& grid);

}  // namespace stretchlab

#endif
