#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "stretchlab/brownian.hpp"
#include "stretchlab/errors.hpp"

using namespace stretchlab;

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Kolmogorov-Smirnov statistic against the standard normal.
double ks_statistic(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = normal_cdf(xs[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    }
    return d;
}

}  // namespace

TEST_CASE("same seed reproduces the path bit-exactly") {
    const BrownianPath a = sample_brownian(424242, 1e-3, 5000);
    const BrownianPath b = sample_brownian(424242, 1e-3, 5000);
    REQUIRE(a.increments.size() == b.increments.size());
    for (std::size_t k = 0; k < a.n_steps; ++k) {
        CHECK(a.increments[k].x == b.increments[k].x);
        CHECK(a.increments[k].y == b.increments[k].y);
        CHECK(a.increments[k].z == b.increments[k].z);
    }
    const BrownianPath c = sample_brownian(424243, 1e-3, 5000);
    CHECK(c.increments[0].x != a.increments[0].x);
}

TEST_CASE("increment moments: mean within 4 sigma, variance within 5%") {
    const double dt = 0.01;
    const BrownianPath p = sample_brownian(777, dt, 100000);
    const double n = static_cast<double>(p.n_steps);
    for (int comp = 0; comp < 3; ++comp) {
        auto pick = [comp](const Vec3& v) {
            return comp == 0 ? v.x : comp == 1 ? v.y : v.z;
        };
        double mean = 0.0;
        for (const Vec3& dw : p.increments) mean += pick(dw);
        mean /= n;
        CHECK(std::abs(mean) <= 4.0 * std::sqrt(dt / n));
        double var = 0.0;
        for (const Vec3& dw : p.increments) var += (pick(dw) - mean) * (pick(dw) - mean);
        var /= (n - 1.0);
        CHECK(var == doctest::Approx(dt).epsilon(0.05));
    }
}

TEST_CASE("variance of W_T over 10^4 seeds is about T") {
    const double dt = 0.01;
    const std::size_t n_steps = 100;  // T = 1
    const int n_seeds = 10000;
    double sum = 0.0, sum2 = 0.0;
    for (int s = 0; s < n_seeds; ++s) {
        const BrownianPath p = sample_brownian(static_cast<std::uint64_t>(s), dt, n_steps);
        const double w = p.partial_sum(n_steps).x;
        sum += w;
        sum2 += w * w;
    }
    const double mean = sum / n_seeds;
    const double var = sum2 / n_seeds - mean * mean;
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("single-step draws pass a 1% Kolmogorov-Smirnov test") {
    std::vector<double> xs;
    xs.reserve(10000);
    for (int s = 0; s < 10000; ++s) {
        const BrownianPath p = sample_brownian(900000u + static_cast<std::uint64_t>(s), 1.0, 1);
        xs.push_back(p.increments[0].x);
    }
    // asymptotic critical value at the 1% level: 1.6276 / sqrt(n)
    CHECK(ks_statistic(std::move(xs)) <= 1.6276 / std::sqrt(10000.0));
}

TEST_CASE("coarsening sums consecutive increments") {
    const BrownianPath fine = sample_brownian(5, 0.25, 8);
    const BrownianPath coarse = fine.coarsen(2);
    CHECK(coarse.n_steps == 4);
    CHECK(coarse.dt == doctest::Approx(0.5));
    for (std::size_t k = 0; k < 4; ++k) {
        const Vec3 expect = fine.increments[2 * k] + fine.increments[2 * k + 1];
        CHECK((coarse.increments[k] - expect).norm() == 0.0);
    }
    // endpoint unchanged
    CHECK((coarse.partial_sum(4) - fine.partial_sum(8)).norm() <= 1e-15);
    CHECK_THROWS_AS(fine.coarsen(3), ValidationError);
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(sample_brownian(1, 0.0, 10), ValidationError);
    CHECK_THROWS_AS(sample_brownian(1, 1e-3, 0), ValidationError);
}
