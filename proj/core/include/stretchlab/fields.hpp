#ifndef STRETCHLAB_FIELDS_HPP
#define STRETCHLAB_FIELDS_HPP

#include <functional>
#include <memory>
#include <string>

#include "stretchlab/geometry.hpp"

namespace stretchlab {

/// Time-dependent divergence-free velocity field, the drift of the particle SDE.
class VelocityField {
  public:
    virtual ~VelocityField() = default;

    virtual Vec3 evaluate(double t, const Vec3& p) const = 0;

    /// Spatial gradient, row-major (entry(i,j) = dv_i/dx_j). Throws NearAxisError
    /// below the radius floor where the gradient is not evaluable.
    virtual Mat3 jacobian(double t, const Vec3& p) const = 0;

    /// Holder exponent of the field, in (0, 1].
    virtual double holder_exponent() const = 0;

    /// Sup-norm bound of |v| over all of space and time.
    virtual double bound() const = 0;

    /// Smallest axis distance at which jacobian() may be evaluated.
    virtual double jacobian_r_floor() const = 0;

    virtual bool time_independent() const { return true; }
};

/// Rotation field v = v_theta(r) e_theta with v_theta(r) = r^alpha on [0, 1]
/// and v_theta(r) = r^alpha * exp(-gamma (r-1)^3) beyond, which matches value
/// and first two derivatives at r = 1, stays positive and decays
/// super-exponentially. The velocity is 0 on the axis (continuous limit); the
/// gradient scales like r^(alpha-1) toward the axis and is refused below the
/// radius floor.
class HolderRotationField : public VelocityField {
  public:
    /// alpha in (0, 1], gamma > 0; r_floor < 0 selects the default
    /// (1e-12 for alpha = 1, else 1e-6).
    explicit HolderRotationField(double alpha, double gamma = 1.0, double r_floor = -1.0);

    Vec3 evaluate(double t, const Vec3& p) const override;
    Mat3 jacobian(double t, const Vec3& p) const override;
    double holder_exponent() const override { return alpha_; }
    double bound() const override;
    double jacobian_r_floor() const override { return r_floor_; }

    double alpha() const { return alpha_; }
    double gamma() const { return gamma_; }

    /// Angular speed profile v_theta(r).
    double v_theta(double r) const;

  private:
    double alpha_;
    double gamma_;
    double r_floor_;
};

/// v = 0 everywhere; pure-noise transport in tests and controls.
class ZeroVelocity : public VelocityField {
  public:
    Vec3 evaluate(double, const Vec3&) const override { return {}; }
    Mat3 jacobian(double, const Vec3&) const override { return {}; }
    double holder_exponent() const override { return 1.0; }
    double bound() const override { return 0.0; }
    double jacobian_r_floor() const override { return 0.0; }
};

/// Initial passive field B0: continuous, bounded, divergence-free.
struct InitialField {
    std::string name;
    std::function<Vec3(const Vec3&)> evaluate;
    double sup_norm = 1.0;
};

/// Presets: constant_ex (B0 = e_x), constant_ez (B0 = e_z),
/// solid_rotor (B0 = (x, y, -2z)). Throws UnknownPresetError otherwise.
InitialField preset_initial_field(const std::string& name);

}  // namespace stretchlab

#endif
