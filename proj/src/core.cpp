#include "monocal/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "monocal/losses.hpp"

namespace monocal {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::EmptyProblem: return "EmptyProblem";
    case ErrorKind::InvalidWeight: return "InvalidWeight";
    case ErrorKind::InvalidValue: return "InvalidValue";
    case ErrorKind::InvalidLabel: return "InvalidLabel";
    case ErrorKind::NotMonotone: return "NotMonotone";
    case ErrorKind::OutOfOrder: return "OutOfOrder";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::NoWidth: return "NoWidth";
    case ErrorKind::OracleFailure: return "OracleFailure";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::Parse: return "Parse";
    }
    return "Unknown";
}

Problem::Problem() : family_(&weighted_square()) {}

Problem::Problem(std::vector<Sample> samples, const LossFamily& family)
    : samples_(std::move(samples)), family_(&family) {}

std::vector<double> Problem::scores() const {
    std::vector<double> out;
    out.reserve(samples_.size());
    for (const auto& s : samples_) out.push_back(s.score);
    return out;
}

namespace {

void check_sample(const Sample& s, std::size_t index) {
    if (std::isnan(s.score)) {
        throw Error(ErrorKind::InvalidValue, "NaN score at sample " + std::to_string(index));
    }
    if (!std::isfinite(s.target)) {
        throw Error(ErrorKind::InvalidValue, "non-finite target at sample " + std::to_string(index));
    }
    if (!std::isfinite(s.offset)) {
        throw Error(ErrorKind::InvalidValue, "non-finite offset at sample " + std::to_string(index));
    }
    if (!(s.weight > 0.0) || !std::isfinite(s.weight)) {
        throw Error(ErrorKind::InvalidWeight,
                    "weight must be positive and finite at sample " + std::to_string(index));
    }
}

} // namespace

Problem normalize(std::vector<Sample> raw, const LossFamily& family) {
    if (raw.empty()) throw Error(ErrorKind::EmptyProblem, "no samples");
    for (std::size_t i = 0; i < raw.size(); ++i) {
        check_sample(raw[i], i);
        family.validate(raw[i]);
    }
    std::stable_sort(raw.begin(), raw.end(),
                     [](const Sample& a, const Sample& b) { return a.score < b.score; });

    std::vector<Sample> pooled;
    pooled.reserve(raw.size());
    for (const auto& s : raw) {
        if (!pooled.empty() && pooled.back().score == s.score) {
            pooled.back() = family.pool(pooled.back(), s);
        } else {
            pooled.push_back(s);
        }
    }
    return Problem(std::move(pooled), family);
}

Staircase::Staircase(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (values_.empty()) throw Error(ErrorKind::InvalidValue, "staircase needs at least one step");
    if (breakpoints_.size() + 1 != values_.size()) {
        throw Error(ErrorKind::InvalidValue, "staircase needs exactly one breakpoint between steps");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) throw Error(ErrorKind::InvalidValue, "non-finite step value");
        if (i > 0 && !(values_[i - 1] < values_[i])) {
            throw Error(ErrorKind::InvalidValue, "step values must be strictly increasing");
        }
    }
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        if (!std::isfinite(breakpoints_[i])) throw Error(ErrorKind::InvalidValue, "non-finite breakpoint");
        if (i > 0 && !(breakpoints_[i - 1] < breakpoints_[i])) {
            throw Error(ErrorKind::InvalidValue, "breakpoints must be strictly increasing");
        }
    }
}

double Staircase::evaluate(double x) const {
    if (std::isnan(x)) throw Error(ErrorKind::InvalidValue, "cannot evaluate at NaN");
    auto j = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x) - breakpoints_.begin();
    return values_[static_cast<std::size_t>(j)];
}

double evaluate(const Staircase& staircase, double x) { return staircase.evaluate(x); }

std::vector<Block> merge_equal_blocks(std::span<const Block> blocks, std::size_t n) {
    if (blocks.empty() || n == 0) throw Error(ErrorKind::EmptyProblem, "no blocks");
    std::vector<Block> out;
    out.reserve(blocks.size());
    std::size_t expected_first = 0;
    for (const auto& b : blocks) {
        if (b.first != expected_first || b.last < b.first) {
            throw Error(ErrorKind::InvalidValue, "blocks do not partition the samples contiguously");
        }
        if (std::isnan(b.minimizer)) throw Error(ErrorKind::InvalidValue, "NaN block minimizer");
        expected_first = b.last + 1;
        if (!out.empty()) {
            if (b.minimizer < out.back().minimizer) {
                throw Error(ErrorKind::NotMonotone, "block minimizers decrease at sample " +
                                                        std::to_string(b.first));
            }
            if (b.minimizer == out.back().minimizer) {
                out.back().last = b.last;
                out.back().aux += b.aux;
                continue;
            }
        }
        out.push_back(b);
    }
    if (expected_first != n) {
        throw Error(ErrorKind::InvalidValue, "blocks do not cover all samples");
    }
    return out;
}

namespace {

double breakpoint_between(double left, double right) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (left == -inf && right == inf) return 0.0;
    if (left == -inf) return right;
    if (right == inf) return std::nextafter(left, inf);
    double mid = left / 2.0 + right / 2.0;
    // Adjacent doubles: the halfway point rounds onto an endpoint.
    if (mid <= left) mid = right;
    return mid;
}

} // namespace

Staircase blocks_to_staircase(std::span<const Block> blocks, std::span<const double> scores) {
    auto merged = merge_equal_blocks(blocks, scores.size());
    std::vector<double> breakpoints;
    std::vector<double> values;
    breakpoints.reserve(merged.size() - 1);
    values.reserve(merged.size());
    for (std::size_t i = 0; i < merged.size(); ++i) {
        values.push_back(merged[i].minimizer);
        if (i + 1 < merged.size()) {
            breakpoints.push_back(breakpoint_between(scores[merged[i].last], scores[merged[i + 1].first]));
        }
    }
    return Staircase(std::move(breakpoints), std::move(values));
}

Staircase blocks_to_staircase(std::span<const Block> blocks, const Problem& problem) {
    auto scores = problem.scores();
    return blocks_to_staircase(blocks, scores);
}

std::vector<double> expand_blocks(std::span<const Block> blocks) {
    std::vector<double> out;
    if (!blocks.empty()) out.reserve(blocks.back().last + 1);
    for (const auto& b : blocks) out.insert(out.end(), b.size(), b.minimizer);
    return out;
}

} // namespace monocal
