#include <doctest.h>

#include <random>

#include "monocal/online.hpp"
#include "monocal/pav_offline.hpp"
#include "test_support.hpp"

using namespace monocal;
using namespace monocal::testing;

namespace {

std::vector<double> values_of(const Staircase& s) { return {s.values().begin(), s.values().end()}; }

OnlineState push_prefix(std::size_t k) {
    OnlineState state(weighted_square());
    for (std::size_t i = 0; i < k; ++i) state.push({double(i + 1), kExample1Targets[i], 1, 0});
    return state;
}

void check_matches_offline(const OnlineState& state, const Problem& prefix) {
    const auto offline = fit_stack(prefix);
    REQUIRE(state.blocks().size() == offline.blocks.size());
    for (std::size_t i = 0; i < offline.blocks.size(); ++i) {
        CHECK(state.blocks()[i].first == offline.blocks[i].first);
        CHECK(state.blocks()[i].last == offline.blocks[i].last);
        CHECK(close_rel(state.blocks()[i].minimizer, offline.blocks[i].minimizer, 1e-12));
    }
    CHECK(state.cumulative_merges() == state.n_seen() - state.step_count());
}

} // namespace

TEST_CASE("online trace of the worked instance") {
    auto s3 = push_prefix(3);
    REQUIRE(s3.blocks().size() == 1);
    CHECK(s3.blocks()[0].minimizer == 38);
    CHECK(s3.blocks()[0].size() == 3);

    auto s8 = push_prefix(8);
    CHECK(block_sizes(s8.blocks()) == std::vector<std::size_t>{4, 4});
    CHECK(values_of(s8.current()) == std::vector<double>{32, 58.5});

    auto s9 = push_prefix(9);
    CHECK(block_sizes(s9.blocks()) == std::vector<std::size_t>{4, 5});
    CHECK(values_of(s9.current()) == std::vector<double>{32, 47});

    auto s15 = push_prefix(15);
    CHECK(values_of(s15.current()) == std::vector<double>{32, 47, 55, 69});
    CHECK(s15.cumulative_merges() == 11);
}

TEST_CASE("one push gives a constant staircase") {
    auto s = push_prefix(1);
    CHECK(values_of(s.current()) == std::vector<double>{44});
    CHECK(s.cumulative_merges() == 0);
}

TEST_CASE("every prefix of the worked instance equals the offline fit") {
    OnlineState state(weighted_square());
    for (std::size_t k = 1; k <= kExample1Targets.size(); ++k) {
        state.push({double(k), kExample1Targets[k - 1], 1, 0});
        check_matches_offline(state, make_problem(std::span(kExample1Targets).first(k)));
        CHECK(state.current() == blocks_to_staircase(fit_stack(make_problem(std::span(kExample1Targets).first(k))).blocks,
                                                     make_problem(std::span(kExample1Targets).first(k))));
    }
}

TEST_CASE("out-of-order arrivals are rejected and leave the state untouched") {
    auto state = push_prefix(4);
    const auto before = std::vector<Block>(state.blocks().begin(), state.blocks().end());
    try {
        state.push({2.5, 0, 1, 0});
        FAIL("expected OutOfOrder");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::OutOfOrder);
    }
    CHECK(std::vector<Block>(state.blocks().begin(), state.blocks().end()) == before);
    CHECK(state.n_seen() == 4);
    CHECK(state.last_score() == 4);
    CHECK_THROWS_AS(state.push({5, 0, 0, 0}), Error);
    CHECK(state.n_seen() == 4);
}

TEST_CASE("current before any push is an error") {
    OnlineState state(weighted_square());
    try {
        (void)state.current();
        FAIL("expected EmptyProblem");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptyProblem);
    }
}

TEST_CASE("online solver needs a mergeable family") {
    CHECK_THROWS_AS(OnlineState{linex_derivative_only()}, Error);
}

TEST_CASE("pushing above the top minimizer performs no merge") {
    auto state = push_prefix(9); // top block 47
    CHECK(state.push({10, 95, 1, 0}) == 0);
    CHECK(state.push({11, 21, 1, 0}) == 1);
}

TEST_CASE("tied arrivals pool into the top block") {
    OnlineState state(weighted_square());
    const std::vector<Sample> stream = {{1, 10, 1, 0}, {2, 50, 1, 0}, {2, 0, 3, 0}, {3, 40, 1, 0}, {3, 45, 1, 0}};
    std::vector<Sample> seen;
    for (const auto& s : stream) {
        state.push(s);
        seen.push_back(s);
        check_matches_offline(state, normalize(seen, weighted_square()));
    }
    CHECK(state.n_arrivals() == 5);
    CHECK(state.n_seen() == 3);
}

TEST_CASE("a tie that raises the last target splits the top block") {
    OnlineState state(weighted_square());
    state.push({1, 10, 1, 0});
    state.push({2, 5, 1, 0});
    REQUIRE(state.blocks().size() == 1);
    state.push({2, 100, 1, 0});
    REQUIRE(state.blocks().size() == 2);
    CHECK(state.blocks()[0].minimizer == 10);
    CHECK(state.blocks()[1].minimizer == 52.5);
    CHECK(state.cumulative_merges() == 0);
}

TEST_CASE("property: random ordered streams stay prefix-optimal") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        OnlineState state(trial % 2 ? log_loss() : weighted_square());
        const auto& family = trial % 2 ? log_loss() : weighted_square();
        std::vector<Sample> seen;
        double score = 0;
        const std::size_t n = 1 + trial % 60;
        for (std::size_t i = 0; i < n; ++i) {
            if (u(rng) > 0.1) score += u(rng);
            const double target = trial % 2 ? (u(rng) < score / 30 ? 1.0 : 0.0) : 100 * u(rng);
            const Sample s{score, target, 0.1 + 2 * u(rng), 0};
            const std::size_t before = state.cumulative_merges();
            const bool tie = !seen.empty() && s.score == seen.back().score;
            state.push(s);
            seen.push_back(s);
            // Only a tie can split the top block and undo merges.
            if (!tie) CHECK(state.cumulative_merges() >= before);
            CHECK(state.cumulative_merges() == state.n_seen() - state.step_count());
            CHECK(state.cumulative_merges() <= state.n_seen() - 1);
            for (std::size_t b = 1; b < state.blocks().size(); ++b) {
                CHECK(state.blocks()[b - 1].minimizer < state.blocks()[b].minimizer);
            }
        }
        check_matches_offline(state, normalize(seen, family));
    }
}
