#pragma once

// Brute-force references for verifying the solvers. Nothing here calls into
// the solver modules: group minimizers are recomputed from scratch.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "monocal/core.hpp"

namespace monocal {

struct OracleResult {
    double best_loss = 0.0;
    std::vector<double> best_values;       // per sample
    std::vector<std::size_t> block_sizes;  // winning partition
    std::uint64_t n_partitions_checked = 0;
};

enum class GroupMinimizer {
    // Weighted mean for the squared-error family, derivative bisection to
    // 1e-9 (and beyond) for anything else.
    Exact,
    // Refined uniform-grid search over the loss values.
    Grid,
};

struct OracleOptions {
    GroupMinimizer minimizer = GroupMinimizer::Exact;
    // Keep only partitions whose group minimizers strictly increase instead
    // of merely not decreasing.
    bool strict = false;
    // Search interval for Grid; defaults to the family domain when finite.
    double grid_lo = 0.0;
    double grid_hi = 0.0;
    std::size_t grid_steps = 1000;
    std::size_t grid_refinements = 4;
};

constexpr std::size_t kOracleMaxSamples = 20;

// Enumerates all 2^(N-1) contiguous partitions of the problem, keeps the ones
// whose group minimizers are monotone, and returns the cheapest.
// Throws TooLarge above kOracleMaxSamples samples, EmptyProblem on none.
OracleResult brute_force_fit(const Problem& problem, const OracleOptions& options = {});

// argmin of f over lo + k (hi - lo) / steps, k = 0..steps. Ties keep the
// smallest point.
double grid_minimize(const std::function<double(double)>& f, double lo, double hi, std::size_t steps);

// grid_minimize repeated on the cell around the previous winner.
double grid_minimize_refined(const std::function<double(double)>& f, double lo, double hi,
                             std::size_t steps, std::size_t refinements);

} // namespace monocal
