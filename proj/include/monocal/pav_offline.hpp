#pragma once

// Offline solvers for the optimal monotone staircase of a mergeable family.
//
// fit_direct runs whole passes: every adjacent pair whose minimizers violate
// strict increase (y_i >= y_{i+1}) is joined, runs of violating pairs collapse
// into one group, and the pass repeats until no violation is left.
//
// fit_stack does the same joins in a single left-to-right sweep, keeping the
// groups on a stack and merging the top into its predecessor while the
// predecessor's minimizer is >= the top's. Both return the same partition.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "monocal/core.hpp"

namespace monocal {

struct FitReport {
    std::vector<Block> blocks;
    std::size_t merge_count = 0;
    std::size_t passes = 0; // merging passes; fit_direct only
    double total_loss = 0.0;
};

// Called after each merging pass of fit_direct with the 1-based pass number.
using PassObserver = std::function<void(std::size_t pass, std::span<const Block> groups)>;

FitReport fit_direct(const Problem& problem, const PassObserver& observer = {});
FitReport fit_stack(const Problem& problem);

// Sum of reported per-sample losses at the block minimizers.
double total_loss(const Problem& problem, std::span<const Block> blocks);

} // namespace monocal
