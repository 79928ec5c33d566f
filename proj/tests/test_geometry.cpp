#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "stretchlab/errors.hpp"
#include "stretchlab/geometry.hpp"

using namespace stretchlab;

namespace {

Mat3 random_matrix(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Mat3 a;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) = u(gen);
    return a;
}

Vec3 random_off_axis_point(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (;;) {
        Vec3 p{u(gen), u(gen), u(gen)};
        if (p.radius() > 1e-3) return p;
    }
}

}  // namespace

TEST_CASE("cylindrical basis at cardinal points") {
    // e_x equals e_r on the positive x-axis
    const CylVec a = vector_to_cylindrical({1, 0, 0}, {1, 0, 0});
    CHECK(a.r_comp == doctest::Approx(1.0));
    CHECK(a.theta_comp == doctest::Approx(0.0));
    CHECK(a.z_comp == doctest::Approx(0.0));

    // e_x equals -e_theta on the positive y-axis
    const CylVec b = vector_to_cylindrical({0, 1, 0}, {1, 0, 0});
    CHECK(b.r_comp == doctest::Approx(0.0));
    CHECK(b.theta_comp == doctest::Approx(-1.0));
    CHECK(b.z_comp == doctest::Approx(0.0));
}

TEST_CASE("point round trip off axis") {
    const Vec3 p{0.3, -0.4, 2.0};
    const Vec3 back = from_cylindrical(to_cylindrical(p));
    CHECK((back - p).norm() <= 1e-15);
}

TEST_CASE("vector conversion requires an off-axis base point") {
    CHECK_THROWS_AS(vector_to_cylindrical({0, 0, 5}, {1, 0, 0}), AxisPointError);
    CHECK_THROWS_AS(vector_from_cylindrical(Vec3{0, 0, 0}, CylVec{1, 0, 0}),
                    AxisPointError);
}

TEST_CASE("cylindrical round trips and norm preservation, 1000 random points") {
    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 p = random_off_axis_point(gen);
        const Vec3 v{u(gen), u(gen), u(gen)};

        const Vec3 p_back = from_cylindrical(to_cylindrical(p));
        CHECK((p_back - p).norm() <= 1e-12);

        const CylVec cv = vector_to_cylindrical(p, v);
        CHECK(std::abs(cv.norm() - v.norm()) <= 1e-12);
        const Vec3 v_back = vector_from_cylindrical(p, cv);
        CHECK((v_back - v).norm() <= 1e-12);
    }
}

TEST_CASE("angle reduction") {
    CHECK(reduce_angle(0.0) == doctest::Approx(0.0));
    CHECK(reduce_angle(2.0 * M_PI + 0.25) == doctest::Approx(0.25));
    CHECK(reduce_angle(-7.0 * M_PI / 2.0) == doctest::Approx(M_PI / 2.0));
}

TEST_CASE("determinant basics") {
    CHECK(det3(Mat3::identity()) == doctest::Approx(1.0));
    CHECK(det3(Mat3::rotation_z(0.7)) == doctest::Approx(1.0));
    // product of eigenvalues
    CHECK(det3(Mat3::diagonal(2, 3, 4)) == doctest::Approx(24.0));
}

TEST_CASE("adjugate on simple matrices") {
    const Mat3 id = adjugate(Mat3::identity());
    CHECK((id - Mat3::identity()).norm_inf() <= 1e-15);

    // det = 1, so the adjugate is the inverse
    const Mat3 d = adjugate(Mat3::diagonal(2.0, 0.5, 1.0));
    CHECK((d - Mat3::diagonal(0.5, 2.0, 1.0)).norm_inf() <= 1e-15);

    // each 2x2 minor of 2I is 4 (cofactor expansion by hand)
    const Mat3 two = adjugate(Mat3::diagonal(2.0, 2.0, 2.0));
    CHECK((two - Mat3::diagonal(4.0, 4.0, 4.0)).norm_inf() <= 1e-15);

    // defined for singular input; every 2x2 minor of a rank-1 matrix vanishes
    Mat3 singular{1, 2, 3, 2, 4, 6, 3, 6, 9};
    CHECK(det3(singular) == doctest::Approx(0.0));
    CHECK(adjugate(singular).norm_inf() <= 1e-15);
}

TEST_CASE("adjugate identity a * adj(a) = det(a) I, 1000 random matrices") {
    std::mt19937_64 gen(1234);
    for (int i = 0; i < 1000; ++i) {
        const Mat3 a = random_matrix(gen);
        const Mat3 lhs = a * adjugate(a);
        const Mat3 rhs = Mat3::identity() * det3(a);
        CHECK((lhs - rhs).norm_inf() <= 1e-12);
    }
}
