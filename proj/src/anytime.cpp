#include "monocal/anytime.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "monocal/losses.hpp"

namespace monocal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite_bracket(const AnytimeGroup& g) { return std::isfinite(g.upper) && std::isfinite(g.lower); }

bool joinable(const AnytimeGroup& lo, const AnytimeGroup& hi) {
    return lo.upper == hi.upper && lo.lower == hi.lower && lo.neg_deriv >= 0.0 && hi.neg_deriv <= 0.0;
}

} // namespace

double AnytimeGroup::midpoint() const noexcept {
    if (settled()) return upper;
    const double mid = (upper + lower) / 2.0;
    return std::isfinite(mid) ? mid : upper / 2.0 + lower / 2.0;
}

void validate(const AnytimeConfig& config) {
    if (!(config.delta > 0.0)) throw Error(ErrorKind::InvalidConfig, "delta must be positive");
    if (std::isnan(config.upper) || std::isnan(config.lower)) {
        throw Error(ErrorKind::InvalidConfig, "bounds must not be NaN");
    }
    if (!(config.upper > config.lower)) {
        throw Error(ErrorKind::InvalidConfig, "upper bound must exceed lower bound");
    }
    if (config.upper == -kInf || config.lower == kInf) {
        throw Error(ErrorKind::InvalidConfig, "bracket is empty");
    }
    if (config.max_iters == 0) throw Error(ErrorKind::InvalidConfig, "max_iters must be at least 1");
}

std::vector<AnytimeGroup> anytime_init(const Problem& problem, const AnytimeConfig& config) {
    if (problem.empty()) throw Error(ErrorKind::EmptyProblem, "no samples");
    validate(config);
    std::vector<AnytimeGroup> groups;
    groups.reserve(problem.size());
    for (std::size_t n = 0; n < problem.size(); ++n) {
        groups.push_back({n, n, config.upper, config.lower, 0.0, 0.0});
    }
    return groups;
}

double probe_point(double upper, double lower) {
    if (!(upper > lower)) throw Error(ErrorKind::NoWidth, "bracket has no width");
    if (upper == kInf && lower == -kInf) return 0.0;
    if (upper == kInf) {
        if (lower < 0.0) return 0.0;
        if (lower < 1.0) return 1.0;
        return 2.0 * lower;
    }
    if (lower == -kInf) {
        if (upper > 0.0) return 0.0;
        if (upper > -1.0) return -1.0;
        return 2.0 * upper;
    }
    const double mid = (upper + lower) / 2.0;
    return std::isfinite(mid) ? mid : upper / 2.0 + lower / 2.0;
}

std::vector<AnytimeGroup> iterate(std::span<const AnytimeGroup> groups, const Problem& problem,
                                  RoundStats* stats) {
    const auto& family = problem.family();
    const auto samples = problem.samples();
    RoundStats local;

    std::vector<AnytimeGroup> out;
    out.reserve(groups.size());
    for (AnytimeGroup g : groups) {
        if (!g.settled()) {
            g.probe = probe_point(g.upper, g.lower);
            if (!std::isfinite(g.probe)) {
                throw Error(ErrorKind::Unbounded, "doubling probe overflowed; the loss has no finite minimizer");
            }
            g.neg_deriv = family.neg_derivative(samples.subspan(g.first, g.last - g.first + 1), g.probe);
            if (std::isnan(g.neg_deriv)) {
                throw Error(ErrorKind::OracleFailure,
                            "derivative oracle returned NaN at z = " + std::to_string(g.probe));
            }
            ++local.probes;
        }
        out.push_back(g);
        // Chained joins: the joined group is re-tested against its new
        // predecessor; its successor is tested when pushed.
        while (out.size() > 1 && joinable(out[out.size() - 2], out.back())) {
            const AnytimeGroup hi = out.back();
            out.pop_back();
            AnytimeGroup& lo = out.back();
            lo.last = hi.last;
            lo.neg_deriv += hi.neg_deriv;
            ++local.joins;
        }
    }

    for (auto& g : out) {
        if (g.settled()) continue;
        if (g.neg_deriv >= 0.0) g.lower = g.probe;
        if (g.neg_deriv <= 0.0) g.upper = g.probe;
    }
    if (stats) *stats = local;
    return out;
}

AnytimeResult anytime_run(const Problem& problem, const AnytimeConfig& config) {
    auto groups = anytime_init(problem, config);

    auto all_finite = [&] { return std::all_of(groups.begin(), groups.end(), finite_bracket); };
    auto done = [&] {
        return std::all_of(groups.begin(), groups.end(), [&](const AnytimeGroup& g) {
            return finite_bracket(g) && g.width() <= config.delta;
        });
    };

    AnytimeResult result{Staircase({}, {0.0}), {}, {}, 0.0, 0, 0, 0};
    bool finite_seen = all_finite();
    while (!done()) {
        if (result.iters == config.max_iters) {
            if (!all_finite()) {
                throw Error(ErrorKind::Unbounded, "round cap reached with an unbounded bracket");
            }
            break;
        }
        RoundStats stats;
        groups = iterate(groups, problem, &stats);
        ++result.iters;
        result.joins += stats.joins;
        if (!finite_seen && all_finite()) {
            finite_seen = true;
            result.rounds_to_finite = result.iters;
        }
    }

    std::vector<Block> blocks;
    blocks.reserve(groups.size());
    for (const auto& g : groups) {
        blocks.push_back({g.first, g.last, g.midpoint(), static_cast<double>(g.last - g.first + 1)});
        result.width_bound = std::max(result.width_bound, g.width());
    }
    result.blocks = merge_equal_blocks(blocks, problem.size());
    result.staircase = blocks_to_staircase(result.blocks, problem);
    result.groups = std::move(groups);
    return result;
}

} // namespace monocal
