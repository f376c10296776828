#include "monocal/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace monocal {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::pair<double, double> LossFamily::domain() const { return {-kInf, kInf}; }

Sample LossFamily::pool(const Sample&, const Sample&) const {
    throw Error(ErrorKind::Unsupported,
                std::string(name()) + " cannot pool samples with equal scores");
}

Summary LossFamily::summarize(const Sample&) const {
    throw Error(ErrorKind::Unsupported, std::string(name()) + " has no closed-form minimizer");
}

Summary LossFamily::merge(const Summary&, const Summary&) const {
    throw Error(ErrorKind::Unsupported, std::string(name()) + " has no merge rule");
}

double LossFamily::neg_derivative(std::span<const Sample> group, double z) const {
    double d = 0.0;
    for (const auto& s : group) d += neg_derivative(s, z);
    return d;
}

double LossFamily::reported_loss(std::span<const Sample> group, double z) const {
    double total = 0.0;
    for (const auto& s : group) total += reported_loss(s, z);
    return total;
}

Summary weighted_square_merge(double y_i, double lambda_i, double y_j, double lambda_j) {
    if (!(lambda_i > 0.0) || !(lambda_j > 0.0)) {
        throw Error(ErrorKind::InvalidWeight, "merge weights must be positive");
    }
    const double lambda = lambda_i + lambda_j;
    const double y = (lambda_i * y_i + lambda_j * y_j) / lambda;
    // A weighted mean lies between its inputs; rounding must not push it out.
    return {std::clamp(y, std::min(y_i, y_j), std::max(y_i, y_j)), lambda};
}

double weighted_square_neg_derivative(std::span<const Sample> group, double z) {
    double d = 0.0;
    for (const auto& s : group) d -= 2.0 * s.weight * (z - s.target);
    return d;
}

// ---- weighted square ------------------------------------------------------

double WeightedSquareLoss::loss(const Sample& s, double z) const {
    const double r = z - s.target;
    return s.weight * r * r + s.offset;
}

double WeightedSquareLoss::neg_derivative(const Sample& s, double z) const {
    return -2.0 * s.weight * (z - s.target);
}

Sample WeightedSquareLoss::pool(const Sample& a, const Sample& b) const {
    const auto m = weighted_square_merge(a.target, a.weight, b.target, b.weight);
    const double ra = a.target - m.minimizer;
    const double rb = b.target - m.minimizer;
    return {a.score, m.minimizer, m.aux,
            a.offset + b.offset + a.weight * ra * ra + b.weight * rb * rb};
}

Summary WeightedSquareLoss::summarize(const Sample& s) const { return {s.target, s.weight}; }

Summary WeightedSquareLoss::merge(const Summary& lo, const Summary& hi) const {
    return weighted_square_merge(lo.minimizer, lo.aux, hi.minimizer, hi.aux);
}

// ---- log-loss -------------------------------------------------------------

void LogLoss::validate(const Sample& s) const {
    if (!(s.target >= 0.0 && s.target <= 1.0)) {
        throw Error(ErrorKind::InvalidLabel, "log-loss target must lie in [0, 1]");
    }
}

double LogLoss::loss(const Sample& s, double z) const {
    if (!(z >= 0.0 && z <= 1.0)) return kInf;
    double l = 0.0;
    if (s.target > 0.0) l -= s.weight * s.target * std::log(z);
    if (s.target < 1.0) l -= s.weight * (1.0 - s.target) * std::log1p(-z);
    return l + s.offset;
}

double LogLoss::reported_loss(const Sample& s, double z) const {
    return loss(s, std::clamp(z, kReportEpsilon, 1.0 - kReportEpsilon));
}

double LogLoss::neg_derivative(const Sample& s, double z) const {
    if (!(z >= 0.0 && z <= 1.0)) return std::numeric_limits<double>::quiet_NaN();
    double d = 0.0;
    if (s.target > 0.0) d += s.weight * s.target / z;
    if (s.target < 1.0) d -= s.weight * (1.0 - s.target) / (1.0 - z);
    return d;
}

Sample LogLoss::pool(const Sample& a, const Sample& b) const {
    // The loss is linear in the target, so pooling is exact with no offset.
    const auto m = weighted_square_merge(a.target, a.weight, b.target, b.weight);
    return {a.score, m.minimizer, m.aux, a.offset + b.offset};
}

Summary LogLoss::summarize(const Sample& s) const { return {s.target, s.weight}; }

Summary LogLoss::merge(const Summary& lo, const Summary& hi) const {
    return weighted_square_merge(lo.minimizer, lo.aux, hi.minimizer, hi.aux);
}

const LossFamily& weighted_square() {
    static const WeightedSquareLoss family;
    return family;
}

const LossFamily& log_loss() {
    static const LogLoss family;
    return family;
}

const LossFamily& family_by_name(std::string_view name) {
    if (name == "square") return weighted_square();
    if (name == "logloss") return log_loss();
    throw Error(ErrorKind::InvalidConfig, "unknown loss family '" + std::string(name) + "'");
}

std::vector<Sample> logloss_reduce(std::span<const BinarySample> samples) {
    std::vector<Sample> out;
    out.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& b = samples[i];
        if (b.label != 0 && b.label != 1) {
            throw Error(ErrorKind::InvalidLabel, "label must be 0 or 1 at sample " + std::to_string(i));
        }
        if (!(b.weight > 0.0) || !std::isfinite(b.weight)) {
            throw Error(ErrorKind::InvalidWeight, "weight must be positive at sample " + std::to_string(i));
        }
        if (!(b.prob >= 0.0 && b.prob <= 1.0)) {
            throw Error(ErrorKind::InvalidValue, "probability outside [0, 1] at sample " + std::to_string(i));
        }
        out.push_back({b.prob, static_cast<double>(b.label), b.weight, 0.0});
    }
    return out;
}

} // namespace monocal
