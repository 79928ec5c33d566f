#ifndef STRETCHLAB_GEOMETRY_HPP
#define STRETCHLAB_GEOMETRY_HPP

#include <cmath>

namespace stretchlab {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    Vec3& operator-=(const Vec3& o) {
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
    double norm_inf() const {
        return std::max(std::abs(x), std::max(std::abs(y), std::abs(z)));
    }
    /// Distance from the z-axis.
    double radius() const { return std::hypot(x, y); }
    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// 3x3 matrix, row-major: entry(i,j) of a Jacobian is d(component i)/d(coordinate j).
/// Every module in this library follows that layout.
struct Mat3 {
    double m[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};

    Mat3() = default;
    Mat3(double a00, double a01, double a02, double a10, double a11, double a12,
         double a20, double a21, double a22)
        : m{{a00, a01, a02}, {a10, a11, a12}, {a20, a21, a22}} {}

    static Mat3 identity() { return {1, 0, 0, 0, 1, 0, 0, 0, 1}; }
    static Mat3 diagonal(double a, double b, double c) {
        return {a, 0, 0, 0, b, 0, 0, 0, c};
    }
    /// Rotation about the z-axis by `angle` radians.
    static Mat3 rotation_z(double angle) {
        const double c = std::cos(angle), s = std::sin(angle);
        return {c, -s, 0, s, c, 0, 0, 0, 1};
    }

    double operator()(int i, int j) const { return m[i][j]; }
    double& operator()(int i, int j) { return m[i][j]; }

    Vec3 operator*(const Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }
    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j] + m[i][2] * o.m[2][j];
        return r;
    }
    Mat3 operator+(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] + o.m[i][j];
        return r;
    }
    Mat3 operator-(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] - o.m[i][j];
        return r;
    }
    Mat3 operator*(double s) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] * s;
        return r;
    }
    Mat3 transpose() const {
        return {m[0][0], m[1][0], m[2][0], m[0][1], m[1][1], m[2][1],
                m[0][2], m[1][2], m[2][2]};
    }
    double trace() const { return m[0][0] + m[1][1] + m[2][2]; }
    double norm_inf() const {
        double r = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r = std::max(r, std::abs(m[i][j]));
        return r;
    }
    bool finite() const {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (!std::isfinite(m[i][j])) return false;
        return true;
    }
};

inline Mat3 operator*(double s, const Mat3& a) { return a * s; }

/// Vector expressed in the cylindrical frame (e_r, e_theta, e_z) at an implicit
/// base point. The base point is not stored; conversions take it explicitly.
struct CylVec {
    double r_comp = 0.0;
    double theta_comp = 0.0;
    double z_comp = 0.0;

    CylVec() = default;
    CylVec(double r_, double th_, double z_) : r_comp(r_), theta_comp(th_), z_comp(z_) {}
    double norm() const {
        return std::sqrt(r_comp * r_comp + theta_comp * theta_comp + z_comp * z_comp);
    }
};

/// Point in cylindrical coordinates. theta is stored unreduced so winding
/// accumulates; reduce mod 2*pi only when comparing angles.
struct CylPoint {
    double r = 0.0;
    double theta = 0.0;
    double z = 0.0;

    CylPoint() = default;
    CylPoint(double r_, double th_, double z_) : r(r_), theta(th_), z(z_) {}
};

/// Reduce an angle to [-pi, pi).
double reduce_angle(double theta);

CylPoint to_cylindrical(const Vec3& p);
Vec3 from_cylindrical(const CylPoint& q);

/// Express Cartesian vector v in the cylindrical frame at base point p.
/// Throws AxisPointError when p lies on the z-axis (the frame is undefined there).
CylVec vector_to_cylindrical(const Vec3& p, const Vec3& v);
Vec3 vector_from_cylindrical(const Vec3& p, const CylVec& v);
Vec3 vector_from_cylindrical(const CylPoint& q, const CylVec& v);

double det3(const Mat3& a);

/// Transpose of the cofactor matrix, by explicit 2x2 minors. Defined for all
/// inputs, including singular ones, and satisfies a * adjugate(a) = det3(a) * I.
/// For det = 1 this is the matrix inverse.
Mat3 adjugate(const Mat3& a);

}  // namespace stretchlab

#endif
