#ifndef STRETCHLAB_ENSEMBLE_HPP
#define STRETCHLAB_ENSEMBLE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace stretchlab {

/// Replicate seed derivation: a 64-bit hash mix of (base_seed, index). Injective
/// in the index for a fixed base, and independent of execution order, so
/// ensembles are reproducible under any parallel schedule.
std::uint64_t split_seed(std::uint64_t base_seed, std::uint64_t index);

struct EnsembleSpec {
    int n_replicates = 1;
    std::uint64_t base_seed = 0;
    /// Worker threads; 0 = hardware concurrency.
    unsigned parallelism = 0;
    /// Abort with EnsembleError when more than this fraction of replicates fail.
    double max_failure_fraction = 0.10;
};

struct ReplicateFailure {
    int index = 0;
    std::uint64_t seed = 0;
    std::string message;
};

/// Per-replicate metrics with order statistics. All statistics are recomputed
/// from the index-ordered value vector, so they are invariant under replicate
/// reordering and parallel schedule.
struct EnsembleStats {
    std::vector<double> values;  // one entry per successful replicate, index order
    std::vector<std::uint64_t> seeds;
    std::vector<ReplicateFailure> failures;

    double min = 0, q05 = 0, q25 = 0, median = 0, q75 = 0, q95 = 0, max = 0;
    double mean = 0;
    double std_error = 0;

    /// Linear-interpolation quantile of the sorted values (q in [0, 1]).
    double quantile(double q) const;
    /// Fill the summary fields from `values`.
    void recompute();
};

/// Run metric(seed_i) for i = 0..n-1 with seed_i = split_seed(base, i).
/// Deterministic in base_seed regardless of the parallel schedule. Replicate
/// failures (library errors) are recorded with their seed, and only abort the
/// ensemble beyond the configured failure fraction.
EnsembleStats run_ensemble(const EnsembleSpec& spec,
                           const std::function<double(std::uint64_t)>& metric);

/// Deterministic grid supremum divided by the ensemble median of the same
/// metric: the quantitative face of blow-up versus noise suppression.
double suppression_ratio(double deterministic_sup, const EnsembleStats& ensemble);

/// Percentile-bootstrap confidence interval for the median.
std::pair<double, double> bootstrap_ci_median(const std::vector<double>& values,
                                              int n_boot, std::uint64_t seed,
                                              double level = 0.95);

}  // namespace stretchlab

#endif
