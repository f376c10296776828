#include "monocal/pav_offline.hpp"

#include <string>

#include "monocal/losses.hpp"

namespace monocal {

namespace {

void require_mergeable(const Problem& problem) {
    if (problem.empty()) throw Error(ErrorKind::EmptyProblem, "no samples");
    if (!problem.family().mergeable()) {
        throw Error(ErrorKind::Unsupported, "family '" + std::string(problem.family().name()) +
                                                "' has no merge rule; use the anytime solver");
    }
}

std::vector<Block> singleton_blocks(const Problem& problem) {
    const auto& family = problem.family();
    std::vector<Block> blocks;
    blocks.reserve(problem.size());
    for (std::size_t n = 0; n < problem.size(); ++n) {
        const auto s = family.summarize(problem[n]);
        blocks.push_back({n, n, s.minimizer, s.aux});
    }
    return blocks;
}

Block join(const LossFamily& family, const Block& lo, const Block& hi) {
    const auto m = family.merge({lo.minimizer, lo.aux}, {hi.minimizer, hi.aux});
    return {lo.first, hi.last, m.minimizer, m.aux};
}

} // namespace

double total_loss(const Problem& problem, std::span<const Block> blocks) {
    const auto& family = problem.family();
    const auto samples = problem.samples();
    double total = 0.0;
    for (const auto& b : blocks) {
        total += family.reported_loss(samples.subspan(b.first, b.size()), b.minimizer);
    }
    return total;
}

FitReport fit_direct(const Problem& problem, const PassObserver& observer) {
    require_mergeable(problem);
    const auto& family = problem.family();

    FitReport report;
    auto groups = singleton_blocks(problem);
    for (;;) {
        std::vector<Block> next;
        next.reserve(groups.size());
        bool violated = false;
        std::size_t i = 0;
        while (i < groups.size()) {
            Block run = groups[i];
            // Extend over the maximal run of consecutive violating pairs,
            // comparing the original minimizers of this pass.
            while (i + 1 < groups.size() && groups[i].minimizer >= groups[i + 1].minimizer) {
                run = join(family, run, groups[i + 1]);
                ++i;
                violated = true;
            }
            next.push_back(run);
            ++i;
        }
        if (!violated) break;
        report.merge_count += groups.size() - next.size();
        groups = std::move(next);
        ++report.passes;
        if (observer) observer(report.passes, groups);
    }
    report.total_loss = total_loss(problem, groups);
    report.blocks = std::move(groups);
    return report;
}

FitReport fit_stack(const Problem& problem) {
    require_mergeable(problem);
    const auto& family = problem.family();

    FitReport report;
    std::vector<Block> stack;
    stack.reserve(problem.size());
    for (std::size_t n = 0; n < problem.size(); ++n) {
        const auto s = family.summarize(problem[n]);
        stack.push_back({n, n, s.minimizer, s.aux});
        while (stack.size() > 1 && stack[stack.size() - 2].minimizer >= stack.back().minimizer) {
            Block top = stack.back();
            stack.pop_back();
            stack.back() = join(family, stack.back(), top);
            ++report.merge_count;
        }
    }
    report.total_loss = total_loss(problem, stack);
    report.blocks = std::move(stack);
    return report;
}

} // namespace monocal
