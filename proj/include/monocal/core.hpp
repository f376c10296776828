#pragma once

// Domain types shared by all solvers: samples, problems, blocks and the
// fitted staircase transform.

#include <cstddef>
#include <span>
#include <vector>

#include "monocal/error.hpp"

namespace monocal {

class LossFamily;

// One observation. The loss family decides how `target` and `weight` are read:
// for the squared-error family the loss is weight * (z - target)^2, for the
// log-loss family target is the (possibly pooled) label frequency.
// `offset` is a constant added to the loss; it is nonzero only for composite
// samples produced by pooling tied scores, so that a composite's loss is
// exactly the sum of its members' losses.
struct Sample {
    double score = 0.0; // may be +-infinity
    double target = 0.0;
    double weight = 1.0;
    double offset = 0.0;

    friend bool operator==(const Sample&, const Sample&) = default;
};

// Samples sorted by strictly increasing score, paired with the loss family
// that interprets them. Only `normalize` produces a non-empty Problem.
class Problem {
public:
    Problem();

    std::span<const Sample> samples() const noexcept { return samples_; }
    const Sample& operator[](std::size_t i) const { return samples_[i]; }
    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }
    const LossFamily& family() const noexcept { return *family_; }

    // Scores in sample order, for breakpoint placement.
    std::vector<double> scores() const;

private:
    friend Problem normalize(std::vector<Sample> raw, const LossFamily& family);
    Problem(std::vector<Sample> samples, const LossFamily& family);

    std::vector<Sample> samples_;
    const LossFamily* family_;
};

// Sorts by score and pools equal-score samples through the family's pooling
// rule. Throws EmptyProblem, InvalidWeight, InvalidValue, or whatever the
// family's own validation raises.
Problem normalize(std::vector<Sample> raw, const LossFamily& family);

// A contiguous run [first, last] of samples (0-based, inclusive) that share
// one fitted value.
struct Block {
    std::size_t first = 0;
    std::size_t last = 0;
    double minimizer = 0.0;
    double aux = 0.0;

    std::size_t size() const noexcept { return last - first + 1; }

    friend bool operator==(const Block&, const Block&) = default;
};

// Right-continuous nondecreasing step function. values[j] is returned for
// x with exactly j breakpoints b <= x.
class Staircase {
public:
    // Throws InvalidValue unless values are finite and strictly increasing,
    // breakpoints are finite and strictly increasing, and
    // breakpoints.size() + 1 == values.size().
    Staircase(std::vector<double> breakpoints, std::vector<double> values);

    std::span<const double> breakpoints() const noexcept { return breakpoints_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t step_count() const noexcept { return values_.size(); }

    // Throws InvalidValue on NaN.
    double evaluate(double x) const;
    double operator()(double x) const { return evaluate(x); }

    friend bool operator==(const Staircase&, const Staircase&) = default;

private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
};

double evaluate(const Staircase& staircase, double x);

// Collapses adjacent blocks with identical minimizers (sizes add, aux adds).
// Throws NotMonotone if any minimizer decreases, InvalidValue if the blocks
// do not partition [0, n) contiguously.
std::vector<Block> merge_equal_blocks(std::span<const Block> blocks, std::size_t n);

// Breakpoints sit halfway between the last score of one step and the first
// score of the next. An infinite neighbour falls back to the finite side.
Staircase blocks_to_staircase(std::span<const Block> blocks, std::span<const double> scores);
Staircase blocks_to_staircase(std::span<const Block> blocks, const Problem& problem);

// Per-sample fitted values expanded from a block list.
std::vector<double> expand_blocks(std::span<const Block> blocks);

} // namespace monocal
