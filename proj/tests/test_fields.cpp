#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "stretchlab/errors.hpp"
#include "stretchlab/fields.hpp"

using namespace stretchlab;

namespace {

// Fourth-order central differences: the r^(alpha-1) gradients near the axis
// make second-order stencils too blunt for a 1e-6 divergence bound.
double fd_divergence(const VelocityField& f, const Vec3& p, double h) {
    auto d4 = [&](int comp, int axis) {
        Vec3 e;
        (axis == 0 ? e.x : axis == 1 ? e.y : e.z) = h;
        auto pick = [comp](const Vec3& v) {
            return comp == 0 ? v.x : comp == 1 ? v.y : v.z;
        };
        const double f1 = pick(f.evaluate(0.0, p + 2.0 * e));
        const double f2 = pick(f.evaluate(0.0, p + e));
        const double f3 = pick(f.evaluate(0.0, p - e));
        const double f4 = pick(f.evaluate(0.0, p - 2.0 * e));
        return (-f1 + 8.0 * f2 - 8.0 * f3 + f4) / (12.0 * h);
    };
    return d4(0, 0) + d4(1, 1) + d4(2, 2);
}

double fd_divergence_initial(const InitialField& f, const Vec3& p, double h) {
    auto d = [&](int comp, int axis) {
        Vec3 e;
        (axis == 0 ? e.x : axis == 1 ? e.y : e.z) = h;
        auto pick = [comp](const Vec3& v) {
            return comp == 0 ? v.x : comp == 1 ? v.y : v.z;
        };
        return (pick(f.evaluate(p + e)) - pick(f.evaluate(p - e))) / (2.0 * h);
    };
    return d(0, 0) + d(1, 1) + d(2, 2);
}

}  // namespace

TEST_CASE("holder velocity values") {
    const HolderRotationField f05(0.5);
    // r^alpha = 0.25^0.5 = 0.5 along e_theta
    const Vec3 v = f05.evaluate(0.0, {0.25, 0.0, 0.0});
    CHECK(v.x == doctest::Approx(0.0));
    CHECK(v.y == doctest::Approx(0.5));
    CHECK(v.z == doctest::Approx(0.0));

    // axis value is the continuous limit 0
    const Vec3 a = f05.evaluate(0.0, {0.0, 0.0, 5.0});
    CHECK(a.norm() == 0.0);

    // rigid rotation: v = e_theta at r = 1
    const HolderRotationField f1(1.0);
    const Vec3 w = f1.evaluate(0.0, {0.0, 1.0, 0.0});
    CHECK(w.x == doctest::Approx(-1.0));
    CHECK(w.y == doctest::Approx(0.0));
}

TEST_CASE("rigid rotation jacobian is the rotation generator") {
    const HolderRotationField f1(1.0);
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (int i = 0; i < 20; ++i) {
        const Vec3 p{u(gen), u(gen), u(gen)};
        if (p.radius() < 0.05 || p.radius() > 1.0) continue;
        const Mat3 j = f1.jacobian(0.0, p);
        const Mat3 gen_z{0, -1, 0, 1, 0, 0, 0, 0, 0};
        CHECK((j - gen_z).norm_inf() <= 1e-12);
    }
}

TEST_CASE("jacobian matches central finite differences") {
    const HolderRotationField f(0.5);
    const double h = 1e-5;
    for (const Vec3 p : {Vec3{1, 0, 0}, Vec3{0.3, 0.2, 1.0}, Vec3{-0.4, 0.7, -2.0},
                         Vec3{1.4, -0.3, 0.1}}) {
        const Mat3 j = f.jacobian(0.0, p);
        Mat3 fd;
        for (int axis = 0; axis < 3; ++axis) {
            Vec3 e;
            (axis == 0 ? e.x : axis == 1 ? e.y : e.z) = h;
            const Vec3 col = (f.evaluate(0.0, p + e) - f.evaluate(0.0, p - e)) / (2.0 * h);
            fd(0, axis) = col.x;
            fd(1, axis) = col.y;
            fd(2, axis) = col.z;
        }
        CHECK((j - fd).norm_inf() <= 1e-6);
    }
}

TEST_CASE("jacobian is traceless at random off-axis points") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (double alpha : {0.2, 0.5, 0.8, 1.0}) {
        const HolderRotationField f(alpha);
        int checked = 0;
        while (checked < 100) {
            const Vec3 p{u(gen), u(gen), u(gen)};
            if (p.radius() < 0.01) continue;
            ++checked;
            CHECK(std::abs(f.jacobian(0.0, p).trace()) <= 1e-12);
        }
    }
}

TEST_CASE("jacobian refuses to evaluate at the axis") {
    const HolderRotationField f(0.5);
    CHECK_THROWS_AS(f.jacobian(0.0, {1e-9, 0.0, 0.0}), NearAxisError);
    // alpha = 1 has a globally smooth gradient, so its floor is far lower
    const HolderRotationField rigid(1.0);
    CHECK(rigid.jacobian(0.0, {1e-9, 0.0, 0.0}).finite());
}

TEST_CASE("numerical divergence of every preset field") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const double h = 1e-4;
    std::vector<Vec3> pts;
    while (pts.size() < 1000) {
        const Vec3 p{u(gen), u(gen), u(gen)};
        if (p.radius() > 0.01) pts.push_back(p);
    }
    for (double alpha : {0.2, 0.5, 0.8, 1.0}) {
        const HolderRotationField f(alpha);
        double worst = 0.0;
        for (const Vec3& p : pts) worst = std::max(worst, std::abs(fd_divergence(f, p, h)));
        CHECK(worst <= 1e-6);
    }
    for (const char* name : {"constant_ex", "constant_ez", "solid_rotor"}) {
        const InitialField b0 = preset_initial_field(name);
        double worst = 0.0;
        for (const Vec3& p : pts) {
            worst = std::max(worst, std::abs(fd_divergence_initial(b0, p, h)));
        }
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("velocity is globally bounded") {
    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    std::vector<Vec3> pts(100000);
    for (auto& p : pts) p = {u(gen), u(gen), u(gen)};
    for (double alpha : {0.2, 0.5}) {
        const HolderRotationField f(alpha, 1.0);
        double sup = 0.0;
        for (const Vec3& p : pts) sup = std::max(sup, f.evaluate(0.0, p).norm());
        CHECK(sup <= 1.2);
        CHECK(f.bound() <= 1.2);
    }
    // The far-field peak of r^alpha e^{-(r-1)^3} sits where 3 r (r-1)^2 = alpha
    // and climbs with alpha: 1.2296 at alpha = 0.8 and 1.3252 at alpha = 1
    // (gamma = 1). Bounded always, under 1.2 only for alpha up to ~0.7.
    const HolderRotationField f08(0.8, 1.0);
    const HolderRotationField rigid(1.0, 1.0);
    double sup08 = 0.0, sup1 = 0.0;
    for (const Vec3& p : pts) {
        sup08 = std::max(sup08, f08.evaluate(0.0, p).norm());
        sup1 = std::max(sup1, rigid.evaluate(0.0, p).norm());
    }
    CHECK(sup08 <= 1.2296);
    CHECK(sup1 <= 1.3253);
    CHECK(f08.bound() <= 1.2296);
    CHECK(rigid.bound() <= 1.3253);
}

TEST_CASE("holder quotient over the unit ball stays under 3 for alpha = 0.2") {
    const HolderRotationField f(0.2);
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    int pairs = 0;
    while (pairs < 10000) {
        const Vec3 p{u(gen), u(gen), u(gen)};
        const Vec3 q{u(gen), u(gen), u(gen)};
        if (p.norm() > 1.0 || q.norm() > 1.0) continue;
        const double gap = (p - q).norm();
        if (gap < 1e-12) continue;
        ++pairs;
        const double quot =
            (f.evaluate(0.0, p) - f.evaluate(0.0, q)).norm() / std::pow(gap, 0.2);
        worst = std::max(worst, quot);
    }
    // brute-force maximum over the sampled pairs sits near 2, threshold 3
    CHECK(worst <= 3.0);
    CHECK(worst > 1.0);
}

TEST_CASE("profile is C2 across r = 1") {
    const double h = 1e-4;
    for (double alpha : {0.2, 0.5, 1.0}) {
        for (double gamma : {1.0, 3.0}) {
            const HolderRotationField f(alpha, gamma);
            auto vt = [&](double r) { return f.v_theta(r); };
            // second-order one-sided stencils from both sides of r = 1
            const double d1_right = (-3.0 * vt(1.0) + 4.0 * vt(1.0 + h) - vt(1.0 + 2 * h)) / (2 * h);
            const double d1_left = (3.0 * vt(1.0) - 4.0 * vt(1.0 - h) + vt(1.0 - 2 * h)) / (2 * h);
            const double d2_right =
                (2.0 * vt(1.0) - 5.0 * vt(1.0 + h) + 4.0 * vt(1.0 + 2 * h) - vt(1.0 + 3 * h)) /
                (h * h);
            const double d2_left =
                (2.0 * vt(1.0) - 5.0 * vt(1.0 - h) + 4.0 * vt(1.0 - 2 * h) - vt(1.0 - 3 * h)) /
                (h * h);
            CHECK(std::abs(vt(1.0) - 1.0) <= 1e-14);
            CHECK(std::abs(d1_right - d1_left) <= 1e-6);
            CHECK(std::abs(d2_right - d2_left) <= 1e-6);
        }
    }
}

TEST_CASE("initial field presets") {
    const InitialField ex = preset_initial_field("constant_ex");
    const Vec3 v = ex.evaluate({0.3, 0.0, 7.0});
    CHECK(v.x == 1.0);
    CHECK(v.y == 0.0);
    CHECK(v.z == 0.0);

    // e_x = -e_theta at theta = pi/2
    const CylVec cv = vector_to_cylindrical({0.0, 1.0, 0.0}, ex.evaluate({0.0, 1.0, 0.0}));
    CHECK(cv.r_comp == doctest::Approx(0.0));
    CHECK(cv.theta_comp == doctest::Approx(-1.0));

    const InitialField rotor = preset_initial_field("solid_rotor");
    const Vec3 w = rotor.evaluate({1.0, 1.0, 1.0});
    CHECK(w.x == 1.0);
    CHECK(w.y == 1.0);
    CHECK(w.z == -2.0);

    CHECK_THROWS_AS(preset_initial_field("vortex_sheet"), UnknownPresetError);
}
