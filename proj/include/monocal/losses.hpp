#pragma once

// Loss families. A family knows the per-sample loss, its negative derivative,
// and how to pool tied samples. Mergeable families additionally expose a
// closed-form minimizer plus a binary merge rule on (minimizer, aux) pairs,
// which is what the offline and online solvers run on. Families that only
// provide a derivative can still be fitted by the anytime solver.

#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "monocal/core.hpp"

namespace monocal {

// (minimizer, aux) summary of a group's summed loss.
struct Summary {
    double minimizer = 0.0;
    double aux = 0.0;

    friend bool operator==(const Summary&, const Summary&) = default;
};

class LossFamily {
public:
    virtual ~LossFamily() = default;

    virtual std::string_view name() const = 0;

    // Family-specific checks beyond what normalize() does generically.
    virtual void validate(const Sample&) const {}

    // Exact loss of one sample at z, including its offset.
    virtual double loss(const Sample& s, double z) const = 0;

    // Loss used when reporting totals. Defaults to loss().
    virtual double reported_loss(const Sample& s, double z) const { return loss(s, z); }

    // -l'(z). Must be strictly decreasing in z.
    virtual double neg_derivative(const Sample& s, double z) const = 0;

    // Closed interval the minimizers live in.
    virtual std::pair<double, double> domain() const;

    // A single sample whose loss equals a(z) + b(z) for every z.
    // Throws Unsupported if the family cannot represent that.
    virtual Sample pool(const Sample& a, const Sample& b) const;

    virtual bool mergeable() const { return false; }
    virtual Summary summarize(const Sample& s) const;
    // Merge of two adjacent groups; lo precedes hi in score order.
    virtual Summary merge(const Summary& lo, const Summary& hi) const;

    // Sums over a contiguous run of samples.
    double neg_derivative(std::span<const Sample> group, double z) const;
    double reported_loss(std::span<const Sample> group, double z) const;
};

// y* = (l_i y_i + l_j y_j) / (l_i + l_j), l* = l_i + l_j.
// Throws InvalidWeight unless both weights are positive.
Summary weighted_square_merge(double y_i, double lambda_i, double y_j, double lambda_j);

// -sum 2 a_n (z - y_n) over the group.
double weighted_square_neg_derivative(std::span<const Sample> group, double z);

// Weighted squared error a (z - y)^2.
class WeightedSquareLoss final : public LossFamily {
public:
    std::string_view name() const override { return "square"; }
    double loss(const Sample& s, double z) const override;
    double neg_derivative(const Sample& s, double z) const override;
    Sample pool(const Sample& a, const Sample& b) const override;
    bool mergeable() const override { return true; }
    Summary summarize(const Sample& s) const override;
    Summary merge(const Summary& lo, const Summary& hi) const override;
};

// Weighted binary log-loss -a [b log z + (1 - b) log(1 - z)], with the
// target b in [0, 1] (pooled ties give fractional b). Minimizers and merge
// rules coincide with the squared-error family on the same (b, a).
class LogLoss final : public LossFamily {
public:
    // Clamp applied to z when reporting totals, so that fitted values of
    // exactly 0 or 1 give a finite number.
    static constexpr double kReportEpsilon = 1e-12;

    std::string_view name() const override { return "logloss"; }
    void validate(const Sample& s) const override;
    double loss(const Sample& s, double z) const override;
    double reported_loss(const Sample& s, double z) const override;
    double neg_derivative(const Sample& s, double z) const override;
    std::pair<double, double> domain() const override { return {0.0, 1.0}; }
    Sample pool(const Sample& a, const Sample& b) const override;
    bool mergeable() const override { return true; }
    Summary summarize(const Sample& s) const override;
    Summary merge(const Summary& lo, const Summary& hi) const override;
};

const LossFamily& weighted_square();
const LossFamily& log_loss();

// Looks a built-in family up by name ("square" or "logloss").
const LossFamily& family_by_name(std::string_view name);

struct BinarySample {
    double prob = 0.0;   // estimator output in [0, 1], used as the score
    int label = 0;       // 0 or 1
    double weight = 1.0;
};

// Maps each binary sample to (score = prob, target = label, weight).
// Throws InvalidLabel for labels outside {0, 1}, InvalidWeight for
// nonpositive weights, InvalidValue for probabilities outside [0, 1].
std::vector<Sample> logloss_reduce(std::span<const BinarySample> samples);

} // namespace monocal
