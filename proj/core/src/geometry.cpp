#include "stretchlab/geometry.hpp"

#include "stretchlab/errors.hpp"

namespace stretchlab {

double reduce_angle(double theta) {
    const double two_pi = 2.0 * M_PI;
    double t = std::fmod(theta + M_PI, two_pi);
    if (t < 0) t += two_pi;
    return t - M_PI;
}

CylPoint to_cylindrical(const Vec3& p) {
    return {std::hypot(p.x, p.y), std::atan2(p.y, p.x), p.z};
}

Vec3 from_cylindrical(const CylPoint& q) {
    return {q.r * std::cos(q.theta), q.r * std::sin(q.theta), q.z};
}

CylVec vector_to_cylindrical(const Vec3& p, const Vec3& v) {
    const double r = p.radius();
    if (r <= 0.0) {
        throw AxisPointError("vector_to_cylindrical: base point on the z-axis (r = 0)");
    }
    const double cx = p.x / r, cy = p.y / r;
    // e_r = (cx, cy, 0), e_theta = (-cy, cx, 0), e_z = (0, 0, 1)
    return {v.x * cx + v.y * cy, -v.x * cy + v.y * cx, v.z};
}

Vec3 vector_from_cylindrical(const Vec3& p, const CylVec& v) {
    const double r = p.radius();
    if (r <= 0.0) {
        throw AxisPointError("vector_from_cylindrical: base point on the z-axis (r = 0)");
    }
    const double cx = p.x / r, cy = p.y / r;
    return {v.r_comp * cx - v.theta_comp * cy, v.r_comp * cy + v.theta_comp * cx,
            v.z_comp};
}

Vec3 vector_from_cylindrical(const CylPoint& q, const CylVec& v) {
    const double c = std::cos(q.theta), s = std::sin(q.theta);
    return {v.r_comp * c - v.theta_comp * s, v.r_comp * s + v.theta_comp * c, v.z_comp};
}

double det3(const Mat3& a) {
    return a.m[0][0] * (a.m[1][1] * a.m[2][2] - a.m[1][2] * a.m[2][1]) -
           a.m[0][1] * (a.m[1][0] * a.m[2][2] - a.m[1][2] * a.m[2][0]) +
           a.m[0][2] * (a.m[1][0] * a.m[2][1] - a.m[1][1] * a.m[2][0]);
}

Mat3 adjugate(const Mat3& a) {
    Mat3 h;
    h.m[0][0] = a.m[1][1] * a.m[2][2] - a.m[1][2] * a.m[2][1];
    h.m[0][1] = a.m[0][2] * a.m[2][1] - a.m[0][1] * a.m[2][2];
    h.m[0][2] = a.m[0][1] * a.m[1][2] - a.m[0][2] * a.m[1][1];
    h.m[1][0] = a.m[1][2] * a.m[2][0] - a.m[1][0] * a.m[2][2];
    h.m[1][1] = a.m[0][0] * a.m[2][2] - a.m[0][2] * a.m[2][0];
    h.m[1][2] = a.m[0][2] * a.m[1][0] - a.m[0][0] * a.m[1][2];
    h.m[2][0] = a.m[1][0] * a.m[2][1] - a.m[1][1] * a.m[2][0];
    h.m[2][1] = a.m[0][1] * a.m[2][0] - a.m[0][0] * a.m[2][1];
    h.m[2][2] = a.m[0][0] * a.m[1][1] - a.m[0][1] * a.m[1][0];
    return h;
}

}  // namespace stretchlab
