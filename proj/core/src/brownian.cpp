#include "stretchlab/brownian.hpp"

#include <cmath>
#include <random>

#include "stretchlab/errors.hpp"

namespace stretchlab {

namespace {

// Box-Muller over mt19937_64. Produces a deterministic stream of standard
// normals for a given seed on every platform.
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0,1] so the log is finite; u2 in [0,1).
        const double u1 = 1.0 - uniform01();
        const double u2 = uniform01();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        spare_ = mag * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return mag * std::cos(2.0 * M_PI * u2);
    }

  private:
    double uniform01() { return (gen_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace

Vec3 BrownianPath::partial_sum(std::size_t k) const {
    Vec3 w;
    for (std::size_t i = 0; i < k && i < increments.size(); ++i) w += increments[i];
    return w;
}

BrownianPath BrownianPath::coarsen(std::size_t factor) const {
    if (factor == 0 || n_steps % factor != 0) {
        throw ValidationError("BrownianPath::coarsen: n_steps must be divisible by factor");
    }
    BrownianPath c;
    c.seed = seed;
    c.dt = dt * static_cast<double>(factor);
    c.n_steps = n_steps / factor;
    c.increments.resize(c.n_steps);
    for (std::size_t k = 0; k < c.n_steps; ++k) {
        Vec3 s;
        for (std::size_t j = 0; j < factor; ++j) s += increments[k * factor + j];
        c.increments[k] = s;
    }
    return c;
}

BrownianPath sample_brownian(std::uint64_t seed, double dt, std::size_t n_steps) {
    if (!(dt > 0.0) || n_steps < 1) {
        throw ValidationError("sample_brownian: need dt > 0 and n_steps >= 1");
    }
    BrownianPath path;
    path.seed = seed;
    path.dt = dt;
    path.n_steps = n_steps;
    path.increments.resize(n_steps);
    GaussianStream g(seed);
    const double s = std::sqrt(dt);
    for (std::size_t k = 0; k < n_steps; ++k) {
        path.increments[k] = {s * g.next(), s * g.next(), s * g.next()};
    }
    return path;
}

std::vector<double> standard_normals(std::uint64_t seed, std::size_t count) {
    GaussianStream g(seed);
    std::vector<double> out(count);
    for (auto& x : out) x = g.next();
    return out;
}

}  // namespace stretchlab
