#include "monocal/online.hpp"

#include <cmath>
#include <string>

#include "monocal/losses.hpp"

namespace monocal {

OnlineState::OnlineState(const LossFamily& family) : family_(&family) {
    if (!family.mergeable()) {
        throw Error(ErrorKind::Unsupported,
                    "online solver needs a mergeable family, got '" + std::string(family.name()) + "'");
    }
}

std::size_t OnlineState::push(const Sample& sample) {
    if (std::isnan(sample.score) || !std::isfinite(sample.target)) {
        throw Error(ErrorKind::InvalidValue, "sample score or target is not a number");
    }
    if (!(sample.weight > 0.0) || !std::isfinite(sample.weight)) {
        throw Error(ErrorKind::InvalidWeight, "weight must be positive and finite");
    }
    family_->validate(sample);
    const bool tie = !scores_.empty() && sample.score == last_score_;
    if (!scores_.empty() && sample.score < last_score_) {
        throw Error(ErrorKind::OutOfOrder, "score " + std::to_string(sample.score) +
                                               " arrived after " + std::to_string(last_score_));
    }

    const auto summary = family_->summarize(sample);
    std::size_t merged = 0;
    if (tie) {
        pooled_.back() = family_->merge(pooled_.back(), summary);
        // Undo the top block and replay its members.
        const Block top = stack_.back();
        stack_.pop_back();
        merges_ -= top.size() - 1;
        for (std::size_t n = top.first; n <= top.last; ++n) {
            stack_.push_back(single(n));
            merged += restore();
        }
    } else {
        scores_.push_back(sample.score);
        pooled_.push_back(summary);
        stack_.push_back(single(scores_.size() - 1));
        merged = restore();
    }
    last_score_ = sample.score;
    ++arrivals_;
    return merged;
}

Block OnlineState::single(std::size_t n) const { return {n, n, pooled_[n].minimizer, pooled_[n].aux}; }

std::size_t OnlineState::restore() {
    std::size_t merged = 0;
    while (stack_.size() > 1 && stack_[stack_.size() - 2].minimizer >= stack_.back().minimizer) {
        const Block top = stack_.back();
        stack_.pop_back();
        Block& below = stack_.back();
        const auto m = family_->merge({below.minimizer, below.aux}, {top.minimizer, top.aux});
        below.last = top.last;
        below.minimizer = m.minimizer;
        below.aux = m.aux;
        ++merged;
    }
    merges_ += merged;
    return merged;
}

Staircase OnlineState::current() const {
    if (stack_.empty()) throw Error(ErrorKind::EmptyProblem, "no samples pushed yet");
    return blocks_to_staircase(stack_, scores_);
}

} // namespace monocal
