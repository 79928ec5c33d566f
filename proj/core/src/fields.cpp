#include "stretchlab/fields.hpp"

#include <cmath>

#include "stretchlab/errors.hpp"

namespace stretchlab {

HolderRotationField::HolderRotationField(double alpha, double gamma, double r_floor)
    : alpha_(alpha), gamma_(gamma), r_floor_(r_floor) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw ValidationError("HolderRotationField: alpha must be in (0, 1]");
    }
    if (!(gamma > 0.0)) {
        throw ValidationError("HolderRotationField: gamma must be > 0");
    }
    if (r_floor_ < 0.0) {
        r_floor_ = (alpha_ == 1.0) ? 1e-12 : 1e-6;
    }
}

double HolderRotationField::v_theta(double r) const {
    if (r <= 0.0) return 0.0;
    if (r <= 1.0) return std::pow(r, alpha_);
    const double d = r - 1.0;
    return std::pow(r, alpha_) * std::exp(-gamma_ * d * d * d);
}

Vec3 HolderRotationField::evaluate(double, const Vec3& p) const {
    const double r = p.radius();
    if (r <= 0.0) return {};
    // v = v_theta(r) e_theta; g = v_theta / r is the angular speed.
    const double g = v_theta(r) / r;
    return {-p.y * g, p.x * g, 0.0};
}

Mat3 HolderRotationField::jacobian(double, const Vec3& p) const {
    const double r = p.radius();
    if (r < r_floor_) {
        throw NearAxisError("HolderRotationField::jacobian: r below radius floor");
    }
    // With g(r) = v_theta(r)/r:  v = (-y g, x g, 0),
    //   dvx/dx = -(xy/r) g',  dvx/dy = -g - (y^2/r) g',
    //   dvy/dx =  g + (x^2/r) g',  dvy/dy = (xy/r) g'.
    double g, gp;
    if (r <= 1.0) {
        g = std::pow(r, alpha_ - 1.0);
        gp = (alpha_ - 1.0) * std::pow(r, alpha_ - 2.0);
    } else {
        const double d = r - 1.0;
        const double e = std::exp(-gamma_ * d * d * d);
        g = std::pow(r, alpha_ - 1.0) * e;
        gp = ((alpha_ - 1.0) * std::pow(r, alpha_ - 2.0) -
              3.0 * gamma_ * d * d * std::pow(r, alpha_ - 1.0)) *
             e;
    }
    const double x = p.x, y = p.y;
    Mat3 j;
    j(0, 0) = -(x * y / r) * gp;
    j(0, 1) = -g - (y * y / r) * gp;
    j(0, 2) = 0.0;
    j(1, 0) = g + (x * x / r) * gp;
    j(1, 1) = (x * y / r) * gp;
    j(1, 2) = 0.0;
    return j;
}

double HolderRotationField::bound() const {
    // v_theta increases to 1 on [0,1]; beyond, r^alpha exp(-gamma (r-1)^3) has a
    // single interior maximum. Scan once and cache nothing; this is metadata.
    double m = 1.0;
    for (int i = 0; i <= 400; ++i) {
        const double r = 1.0 + 3.0 * i / 400.0;
        m = std::max(m, v_theta(r));
    }
    return m;
}

InitialField preset_initial_field(const std::string& name) {
    if (name == "constant_ex") {
        return {name, [](const Vec3&) { return Vec3{1.0, 0.0, 0.0}; }, 1.0};
    }
    if (name == "constant_ez") {
        return {name, [](const Vec3&) { return Vec3{0.0, 0.0, 1.0}; }, 1.0};
    }
    if (name == "solid_rotor") {
        // linear, divergence-free; sup norm quoted on the unit ball
        return {name, [](const Vec3& p) { return Vec3{p.x, p.y, -2.0 * p.z}; }, 2.0};
    }
    throw UnknownPresetError("unknown initial field preset: " + name);
}

}  // namespace stretchlab
