#pragma once

// Streaming solver for samples that arrive in ascending score order. After
// every push the block stack is the optimal staircase of everything seen so
// far; total merge work is bounded by the number of distinct scores.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "monocal/core.hpp"
#include "monocal/losses.hpp"

namespace monocal {

class OnlineState {
public:
    // The family must be mergeable and must outlive the state.
    explicit OnlineState(const LossFamily& family);

    // Adds one sample and restores optimality. A sample whose score equals
    // the previous one is pooled with the samples already at that score; the
    // top block is then rebuilt from its members, since raising a pooled
    // target can split it. Returns the merges performed, counting those of
    // the rebuild; cumulative_merges() stays equal to n_seen() - step_count(). Throws OutOfOrder on a score below the last one; the
    // state is unchanged on any error.
    std::size_t push(const Sample& sample);

    // Staircase for the samples seen so far. Throws EmptyProblem before the
    // first push.
    Staircase current() const;

    std::span<const Block> blocks() const noexcept { return stack_; }
    std::size_t n_seen() const noexcept { return scores_.size(); } // distinct scores
    std::size_t n_arrivals() const noexcept { return arrivals_; }
    std::size_t step_count() const noexcept { return stack_.size(); }
    std::size_t cumulative_merges() const noexcept { return merges_; }
    double last_score() const noexcept { return last_score_; }

private:
    std::size_t restore();
    Block single(std::size_t n) const;

    const LossFamily* family_;
    std::vector<Block> stack_;
    std::vector<double> scores_;
    std::vector<Summary> pooled_; // one per distinct score
    std::size_t arrivals_ = 0;
    std::size_t merges_ = 0;
    double last_score_ = -std::numeric_limits<double>::infinity();
};

} // namespace monocal
