#ifndef STRETCHLAB_EXACT_SOLUTION_HPP
#define STRETCHLAB_EXACT_SOLUTION_HPP

#include <functional>

#include "stretchlab/fields.hpp"
#include "stretchlab/geometry.hpp"

namespace stretchlab {

/// Initial field given as cylindrical component functions of (r, theta, z).
struct CylComponents {
    std::function<double(double, double, double)> br;
    std::function<double(double, double, double)> btheta;
    std::function<double(double, double, double)> bz;
};

/// Project a Cartesian initial field onto the cylindrical frame pointwise.
CylComponents cyl_components(const InitialField& b0);

/// Closed-form deterministic (sigma = 0) solution for the v_theta = r^alpha
/// rotation field, valid on the annulus 0 < r < 1 where that profile is exact:
/// the radial and vertical components are transported along the rotation
/// theta -> theta - r^(alpha-1) t, and the angular component picks up a source
/// term growing linearly in t and like r^(alpha-1) toward the axis. This is the
/// ground-truth oracle for the numerical transport pipeline.
class ExactSolution {
  public:
    /// alpha in (0, 1]; at alpha = 1 the growth term vanishes (rigid rotation).
    ExactSolution(double alpha, CylComponents b0);
    ExactSolution(double alpha, const InitialField& b0);

    /// Throws OutOfDomainError unless 0 < q.r < 1.
    CylVec at_cyl(double t, const CylPoint& q) const;

    /// Cartesian wrapper around at_cyl.
    Vec3 at(double t, const Vec3& x) const;

    /// Central finite-difference residual of the three transport equations
    /// evaluated on this solution. Second-order in (h_t, h_theta).
    CylVec transport_residual(double t, const CylPoint& q, double h_t,
                              double h_theta) const;

    double alpha() const { return alpha_; }

  private:
    double alpha_;
    CylComponents b0_;
};

/// Guaranteed growth magnitude (1 - alpha) r^(alpha-1) t br0_inf of the angular
/// component, where br0_inf bounds |B_r^0| on the circle of radius r.
double blowup_envelope(double alpha, double t, double r, double br0_inf);

}  // namespace stretchlab

#endif
