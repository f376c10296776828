#pragma once

// Anytime solver for families that only expose a derivative.
//
// Every group keeps a bracket [lower, upper] on its minimizer and probes the
// negative derivative D at the bracket's probe point. Adjacent groups with
// identical brackets and D_i >= 0 >= D_{i+1} are joined (D adds up), after
// which each bracket is halved toward the sign of D. Stopping after any round
// leaves a valid answer: each fitted value is within half its bracket width
// of the optimum. Unbounded brackets are closed by doubling probes.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "monocal/core.hpp"

namespace monocal {

struct AnytimeConfig {
    double upper = std::numeric_limits<double>::infinity();
    double lower = -std::numeric_limits<double>::infinity();
    double delta = 1e-6;          // target bracket width
    std::size_t max_iters = 4096; // round cap
};

struct AnytimeGroup {
    std::size_t first = 0;
    std::size_t last = 0;
    double upper = 0.0;
    double lower = 0.0;
    double probe = 0.0;
    double neg_deriv = 0.0;

    bool settled() const noexcept { return upper == lower; }
    double width() const noexcept { return upper - lower; }
    double midpoint() const noexcept;

    friend bool operator==(const AnytimeGroup&, const AnytimeGroup&) = default;
};

// Throws InvalidConfig for delta <= 0, NaN bounds, upper <= lower or a zero
// round cap.
void validate(const AnytimeConfig& config);

// One group per sample, all with the configured bracket.
// Throws EmptyProblem or InvalidConfig.
std::vector<AnytimeGroup> anytime_init(const Problem& problem, const AnytimeConfig& config);

// Midpoint for finite brackets, otherwise the doubling schedule:
// (inf, -inf) -> 0, (inf, 0) -> 1, (inf, b >= 1) -> 2b, (0, -inf) -> -1,
// (a <= -1, -inf) -> 2a. Throws NoWidth unless upper > lower.
double probe_point(double upper, double lower);

// Per-round diagnostics.
struct RoundStats {
    std::size_t probes = 0;
    std::size_t joins = 0;
};

// One full round: probe every unsettled group, join, then shrink brackets.
// Throws OracleFailure if the derivative is NaN, Unbounded if a doubling
// probe overflows.
std::vector<AnytimeGroup> iterate(std::span<const AnytimeGroup> groups, const Problem& problem,
                                  RoundStats* stats = nullptr);

struct AnytimeResult {
    Staircase staircase;
    std::vector<AnytimeGroup> groups;  // final brackets
    std::vector<Block> blocks;         // groups with equal outputs collapsed
    double width_bound = 0.0;          // largest remaining bracket width
    std::size_t iters = 0;             // rounds run
    std::size_t rounds_to_finite = 0;  // rounds until every bracket was finite
    std::size_t joins = 0;
};

// Rounds until every bracket is at most delta wide or max_iters is hit.
// Throws Unbounded if the cap is hit with an infinite bracket left.
AnytimeResult anytime_run(const Problem& problem, const AnytimeConfig& config);

} // namespace monocal
