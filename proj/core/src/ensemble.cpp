#include "stretchlab/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "stretchlab/errors.hpp"
#include "stretchlab/parallel.hpp"

namespace stretchlab {

std::uint64_t split_seed(std::uint64_t base_seed, std::uint64_t index) {
    // splitmix64 finalizer over base ^ index * odd constant; both maps are
    // bijections on 64 bits, so distinct indices give distinct seeds.
    std::uint64_t z = base_seed ^ (index * 0x9E3779B97F4A7C15ull);
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double EnsembleStats::quantile(double q) const {
    if (values.empty()) throw EnsembleError("quantile of an empty ensemble");
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

void EnsembleStats::recompute() {
    if (values.empty()) return;
    min = quantile(0.0);
    q05 = quantile(0.05);
    q25 = quantile(0.25);
    median = quantile(0.5);
    q75 = quantile(0.75);
    q95 = quantile(0.95);
    max = quantile(1.0);
    double s = 0.0;
    for (double v : values) s += v;
    mean = s / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const auto n = static_cast<double>(values.size());
    std_error = (values.size() > 1) ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
}

EnsembleStats run_ensemble(const EnsembleSpec& spec,
                           const std::function<double(std::uint64_t)>& metric) {
    if (spec.n_replicates < 1) {
        throw ValidationError("run_ensemble: n_replicates must be >= 1");
    }
    const auto n = static_cast<std::size_t>(spec.n_replicates);
    std::vector<std::optional<double>> slots(n);
    std::vector<std::string> errors(n);
    std::vector<std::uint64_t> seeds(n);
    for (std::size_t i = 0; i < n; ++i) seeds[i] = split_seed(spec.base_seed, i);

    parallel_for(
        n,
        [&](std::size_t i) {
            try {
                slots[i] = metric(seeds[i]);
            } catch (const Error& e) {
                errors[i] = e.what();
            }
        },
        spec.parallelism);

    EnsembleStats stats;
    for (std::size_t i = 0; i < n; ++i) {
        if (slots[i]) {
            stats.values.push_back(*slots[i]);
            stats.seeds.push_back(seeds[i]);
        } else {
            stats.failures.push_back(
                {static_cast<int>(i), seeds[i], errors[i]});
        }
    }
    if (static_cast<double>(stats.failures.size()) >
        spec.max_failure_fraction * static_cast<double>(n)) {
        throw EnsembleError("run_ensemble: " + std::to_string(stats.failures.size()) +
                            " of " + std::to_string(n) + " replicates failed");
    }
    stats.recompute();
    return stats;
}

double suppression_ratio(double deterministic_sup, const EnsembleStats& ensemble) {
    if (ensemble.values.empty()) {
        throw EnsembleError("suppression_ratio: degenerate ensemble");
    }
    return deterministic_sup / ensemble.median;
}

std::pair<double, double> bootstrap_ci_median(const std::vector<double>& values,
                                              int n_boot, std::uint64_t seed,
                                              double level) {
    if (values.empty() || n_boot < 1) {
        throw ValidationError("bootstrap_ci_median: empty input");
    }
    std::mt19937_64 gen(seed);
    const std::size_t n = values.size();
    std::vector<double> medians(n_boot);
    std::vector<double> resample(n);
    for (int b = 0; b < n_boot; ++b) {
        for (std::size_t i = 0; i < n; ++i) {
            resample[i] = values[gen() % n];
        }
        std::nth_element(resample.begin(), resample.begin() + n / 2, resample.end());
        medians[b] = resample[n / 2];
    }
    std::sort(medians.begin(), medians.end());
    const double alpha = 1.0 - level;
    const auto lo = static_cast<std::size_t>(alpha / 2.0 * (n_boot - 1));
    const auto hi = static_cast<std::size_t>((1.0 - alpha / 2.0) * (n_boot - 1));
    return {medians[lo], medians[hi]};
}

}  // namespace stretchlab
