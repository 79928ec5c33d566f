#ifndef STRETCHLAB_BROWNIAN_HPP
#define STRETCHLAB_BROWNIAN_HPP

#include <cstdint>
#include <vector>

#include "stretchlab/geometry.hpp"

namespace stretchlab {

/// Grid-sampled 3D Brownian increments. Regenerating from the same seed
/// reproduces the increments bit-exactly: the generator is mt19937_64 and the
/// Gaussian transform is an in-house Box-Muller, so the stream does not depend
/// on the standard library's unspecified normal_distribution algorithm.
struct BrownianPath {
    std::uint64_t seed = 0;
    double dt = 0.0;
    std::size_t n_steps = 0;
    /// n_steps entries; each component ~ N(0, dt), independent.
    std::vector<Vec3> increments;

    double total_time() const { return dt * static_cast<double>(n_steps); }

    /// W at grid index k, i.e. the sum of the first k increments.
    Vec3 partial_sum(std::size_t k) const;

    /// Path on a grid coarsened by an integer factor: consecutive increments are
    /// summed, so the coarse path is the same Brownian motion sampled coarser.
    /// Requires n_steps divisible by factor.
    BrownianPath coarsen(std::size_t factor) const;
};

/// Draw a fresh path: i.i.d. Gaussian increments with per-component variance dt.
BrownianPath sample_brownian(std::uint64_t seed, double dt, std::size_t n_steps);

/// Standard normal samples from the same deterministic stream, for tests.
std::vector<double> standard_normals(std::uint64_t seed, std::size_t count);

}  // namespace stretchlab

#endif
