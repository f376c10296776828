#include "monocal/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "monocal/losses.hpp"

namespace monocal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double weighted_mean(std::span<const Sample> group) {
    double num = 0.0;
    double den = 0.0;
    for (const auto& s : group) {
        num += s.weight * s.target;
        den += s.weight;
    }
    return num / den;
}

// Root of the summed negative derivative by plain bisection.
double bisect_minimizer(const LossFamily& family, std::span<const Sample> group) {
    auto d = [&](double z) { return family.neg_derivative(group, z); };
    auto [lo, hi] = family.domain();
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        double step = 1.0;
        lo = -1.0;
        hi = 1.0;
        while (d(lo) < 0.0) {
            hi = lo;
            lo -= (step *= 2.0);
            if (!std::isfinite(lo)) throw Error(ErrorKind::OracleFailure, "no lower bracket");
        }
        while (d(hi) > 0.0) {
            lo = hi;
            hi += (step *= 2.0);
            if (!std::isfinite(hi)) throw Error(ErrorKind::OracleFailure, "no upper bracket");
        }
    }
    for (int k = 0; k < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++k) {
        const double mid = lo + (hi - lo) / 2.0;
        const double v = d(mid);
        if (std::isnan(v)) throw Error(ErrorKind::OracleFailure, "NaN derivative");
        if (v > 0.0) {
            lo = mid;
        } else if (v < 0.0) {
            hi = mid;
        } else {
            return mid;
        }
    }
    return lo + (hi - lo) / 2.0;
}

} // namespace

double grid_minimize(const std::function<double(double)>& f, double lo, double hi, std::size_t steps) {
    if (!(lo < hi) || steps < 2) throw Error(ErrorKind::InvalidConfig, "grid needs lo < hi and steps >= 2");
    double best_z = lo;
    double best_v = kInf;
    for (std::size_t k = 0; k <= steps; ++k) {
        const double z = k == steps ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(steps);
        const double v = f(z);
        if (v < best_v) {
            best_v = v;
            best_z = z;
        }
    }
    return best_z;
}

double grid_minimize_refined(const std::function<double(double)>& f, double lo, double hi,
                             std::size_t steps, std::size_t refinements) {
    double z = grid_minimize(f, lo, hi, steps);
    for (std::size_t r = 0; r < refinements; ++r) {
        const double h = (hi - lo) / static_cast<double>(steps);
        const double nlo = std::max(lo, z - h);
        const double nhi = std::min(hi, z + h);
        if (!(nlo < nhi)) break;
        lo = nlo;
        hi = nhi;
        z = grid_minimize(f, lo, hi, steps);
    }
    return z;
}

OracleResult brute_force_fit(const Problem& problem, const OracleOptions& options) {
    const std::size_t n = problem.size();
    if (n == 0) throw Error(ErrorKind::EmptyProblem, "no samples");
    if (n > kOracleMaxSamples) {
        throw Error(ErrorKind::TooLarge, std::to_string(n) + " samples exceed the brute-force limit of " +
                                             std::to_string(kOracleMaxSamples));
    }
    const auto& family = problem.family();
    const auto samples = problem.samples();
    const bool is_square = &family == &weighted_square();

    double grid_lo = options.grid_lo;
    double grid_hi = options.grid_hi;
    if (options.minimizer == GroupMinimizer::Grid && !(grid_lo < grid_hi)) {
        std::tie(grid_lo, grid_hi) = family.domain();
        if (!std::isfinite(grid_lo) || !std::isfinite(grid_hi)) {
            throw Error(ErrorKind::InvalidConfig, "grid oracle needs a finite search interval");
        }
    }

    // Minimizer and loss for every contiguous range [i, j].
    std::vector<double> range_min(n * n, 0.0);
    std::vector<double> range_loss(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const auto group = samples.subspan(i, j - i + 1);
            auto group_loss = [&](double z) {
                double total = 0.0;
                for (const auto& s : group) total += family.loss(s, z);
                return total;
            };
            double z = 0.0;
            if (options.minimizer == GroupMinimizer::Grid) {
                z = grid_minimize_refined(group_loss, grid_lo, grid_hi, options.grid_steps,
                                          options.grid_refinements);
            } else {
                z = is_square ? weighted_mean(group) : bisect_minimizer(family, group);
            }
            range_min[i * n + j] = z;
            double reported = 0.0;
            for (const auto& s : group) reported += family.reported_loss(s, z);
            range_loss[i * n + j] = reported;
        }
    }

    OracleResult result;
    result.best_loss = kInf;
    const std::uint64_t count = std::uint64_t{1} << (n - 1);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        ++result.n_partitions_checked;
        // Bit k set: a new group starts after sample k.
        double loss = 0.0;
        double prev = -kInf;
        bool feasible = true;
        std::size_t start = 0;
        for (std::size_t k = 0; k < n && feasible; ++k) {
            const bool cut = k + 1 == n || (mask >> k) & 1U;
            if (!cut) continue;
            const double z = range_min[start * n + k];
            feasible = options.strict ? z > prev : z >= prev;
            prev = z;
            loss += range_loss[start * n + k];
            start = k + 1;
        }
        if (!feasible || !(loss < result.best_loss)) continue;

        result.best_loss = loss;
        result.best_values.assign(n, 0.0);
        result.block_sizes.clear();
        start = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const bool cut = k + 1 == n || (mask >> k) & 1U;
            if (!cut) continue;
            std::fill(result.best_values.begin() + static_cast<std::ptrdiff_t>(start),
                      result.best_values.begin() + static_cast<std::ptrdiff_t>(k + 1), range_min[start * n + k]);
            result.block_sizes.push_back(k + 1 - start);
            start = k + 1;
        }
    }
    return result;
}

} // namespace monocal
