#include <doctest.h>

#include <functional>
#include <random>

#include "monocal/losses.hpp"
#include "monocal/pav_offline.hpp"
#include "test_support.hpp"

using namespace monocal;
using namespace monocal::testing;

namespace {

// Root of a strictly decreasing function by bisection on [lo, hi].
double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
    for (int k = 0; k < 200; ++k) {
        const double mid = lo + (hi - lo) / 2;
        if (f(mid) > 0) lo = mid; else hi = mid;
    }
    return lo + (hi - lo) / 2;
}

std::vector<Sample> random_group(std::mt19937_64& rng, std::size_t n, bool binary = false) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Sample> g;
    for (std::size_t i = 0; i < n; ++i) {
        const double target = binary ? (u(rng) < 0.5 ? 0.0 : 1.0) : 100 * u(rng);
        g.push_back({double(i), target, 0.05 + 3 * u(rng), 0});
    }
    return g;
}

} // namespace

TEST_CASE("weighted_square_merge reproduces the worked merges") {
    const auto inner = weighted_square_merge(18, 1, 14, 1);
    CHECK(inner == Summary{16, 2});
    CHECK(weighted_square_merge(52, 1, inner.minimizer, inner.aux) == Summary{28, 3});
    CHECK(weighted_square_merge(93, 1, 37, 1) == Summary{65, 2});
}

TEST_CASE("weighted_square_merge of equal means keeps the mean") {
    for (double c : {0.1, 0.3, -7.25, 1e6 / 3}) {
        for (double a : {0.1, 1.0, 2.7}) {
            const auto m = weighted_square_merge(c, a, c, 0.2);
            CHECK(m.minimizer == c);
            CHECK(m.aux == a + 0.2);
        }
    }
}

TEST_CASE("weighted_square_merge rejects nonpositive weights") {
    CHECK_THROWS_AS(weighted_square_merge(1, 0, 2, 1), Error);
    CHECK_THROWS_AS(weighted_square_merge(1, 1, 2, -1), Error);
    try {
        weighted_square_merge(1, 1, 2, 0);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidWeight);
    }
}

TEST_CASE("weighted_square_neg_derivative examples with finite-difference cross-checks") {
    const std::vector<Sample> one = {{1, 44, 1}};
    const std::vector<Sample> two = {{1, 44, 1}, {2, 52, 1}};
    auto summed_loss = [](const std::vector<Sample>& g) {
        return [&g](double z) {
            double l = 0;
            for (const auto& s : g) l += s.weight * (z - s.target) * (z - s.target);
            return l;
        };
    };

    CHECK(weighted_square_neg_derivative(one, 44) == 0);

    const double fd_two = -central_difference(summed_loss(two), 0.0);
    CHECK(fd_two == doctest::Approx(192).epsilon(1e-6));
    CHECK(weighted_square_neg_derivative(two, 0) == 192);

    const double fd_one = -central_difference(summed_loss(one), 64.0);
    CHECK(fd_one == doctest::Approx(-40).epsilon(1e-6));
    CHECK(weighted_square_neg_derivative(one, 64) == -40);
}

TEST_CASE("logloss_reduce maps binary samples onto weighted targets") {
    const std::vector<BinarySample> in = {{0.3, 1, 2.0}};
    const auto out = logloss_reduce(in);
    REQUIRE(out.size() == 1);
    CHECK(out[0] == Sample{0.3, 1, 2, 0});

    const std::vector<BinarySample> bad_label = {{0.3, 2, 1.0}};
    try {
        logloss_reduce(bad_label);
        FAIL("expected InvalidLabel");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidLabel);
    }
    const std::vector<BinarySample> bad_weight = {{0.3, 1, 0.0}};
    CHECK_THROWS_AS(logloss_reduce(bad_weight), Error);
    const std::vector<BinarySample> bad_prob = {{1.5, 1, 1.0}};
    CHECK_THROWS_AS(logloss_reduce(bad_prob), Error);
}

TEST_CASE("log-loss fit with all labels 1 is the constant 1") {
    const std::vector<BinarySample> in = {{0.1, 1, 1}, {0.5, 1, 2}, {0.9, 1, 0.5}};
    const auto p = normalize(logloss_reduce(in), log_loss());
    const auto report = fit_stack(p);
    const auto s = blocks_to_staircase(report.blocks, p);
    REQUIRE(s.step_count() == 1);
    CHECK(s.values()[0] == 1.0);
}

TEST_CASE("log-loss fit of labels [0, 1] is [0, 1], confirmed by grid search") {
    const std::vector<BinarySample> in = {{0.25, 0, 1}, {0.75, 1, 1}};
    const auto p = normalize(logloss_reduce(in), log_loss());
    const auto s = blocks_to_staircase(fit_stack(p).blocks, p);

    // Grid search of the log-loss objective over monotone pairs z1 <= z2.
    double best = std::numeric_limits<double>::infinity();
    double best1 = -1, best2 = -1;
    for (int i = 0; i <= 1000; ++i) {
        for (int j = i; j <= 1000; ++j) {
            const double z1 = i / 1000.0, z2 = j / 1000.0;
            const double l = log_loss().loss(p[0], z1) + log_loss().loss(p[1], z2);
            if (l < best) {
                best = l;
                best1 = z1;
                best2 = z2;
            }
        }
    }
    CHECK(best1 == 0.0);
    CHECK(best2 == 1.0);
    REQUIRE(s.step_count() == 2);
    CHECK(s.values()[0] == best1);
    CHECK(s.values()[1] == best2);
}

TEST_CASE("log-loss reports a finite total at fitted values of exactly 0 and 1") {
    const Sample zero{0.1, 0, 1, 0};
    CHECK(std::isinf(log_loss().loss(zero, 1.0)));
    CHECK(std::isfinite(log_loss().reported_loss(zero, 1.0)));
    CHECK(log_loss().loss(zero, 0.0) == 0.0);
    CHECK(std::isnan(log_loss().neg_derivative(zero, 1.5)));
    CHECK_THROWS_AS(normalize({{0.1, 1.5, 1}}, log_loss()), Error);
}

TEST_CASE("family_by_name") {
    CHECK(&family_by_name("square") == &weighted_square());
    CHECK(&family_by_name("logloss") == &log_loss());
    CHECK_THROWS_AS(family_by_name("hinge"), Error);
}

TEST_CASE("property: merge folds agree in any association order") {
    std::mt19937_64 rng(3);
    for (const LossFamily* family : {&weighted_square(), static_cast<const LossFamily*>(&linex())}) {
        for (int trial = 0; trial < 300; ++trial) {
            const auto g = random_group(rng, 2 + trial % 9);
            std::vector<Summary> s;
            for (const auto& x : g) s.push_back(family->summarize(x));

            Summary left = s.front();
            for (std::size_t i = 1; i < s.size(); ++i) left = family->merge(left, s[i]);
            Summary right = s.back();
            for (std::size_t i = s.size() - 1; i-- > 0;) right = family->merge(s[i], right);
            std::function<Summary(std::size_t, std::size_t)> tree = [&](std::size_t lo, std::size_t hi) {
                if (hi - lo == 1) return s[lo];
                const std::size_t mid = lo + (hi - lo) / 2;
                return family->merge(tree(lo, mid), tree(mid, hi));
            };
            const Summary balanced = tree(0, s.size());

            CHECK(close_rel(left.minimizer, right.minimizer, 1e-12));
            CHECK(close_rel(left.minimizer, balanced.minimizer, 1e-12));
            CHECK(close_rel(left.aux, right.aux, 1e-12));
            CHECK(close_rel(left.aux, balanced.aux, 1e-12));
        }
    }
}

TEST_CASE("property: neg_derivative matches central differences of the summed loss") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    struct Case {
        const LossFamily* family;
        bool binary;
        double lo, hi;
    };
    const Case cases[] = {{&weighted_square(), false, -50, 150},
                          {&log_loss(), true, 0.05, 0.95},
                          {&linex(), false, 20, 80}};
    for (const auto& c : cases) {
        for (int trial = 0; trial < 200; ++trial) {
            const auto g = random_group(rng, 1 + trial % 6, c.binary);
            const double z = c.lo + (c.hi - c.lo) * u(rng);
            auto summed = [&](double x) {
                double l = 0;
                for (const auto& s : g) l += c.family->loss(s, x);
                return l;
            };
            const double fd = -central_difference(summed, z, 1e-6 * std::max(1.0, std::abs(z)));
            const double d = c.family->neg_derivative(std::span<const Sample>(g), z);
            CHECK(close_rel(d, fd, 1e-6, 1e-6));
        }
    }
}

TEST_CASE("property: neg_derivative is strictly decreasing") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = random_group(rng, 1 + trial % 7);
        const auto gb = random_group(rng, 1 + trial % 7, true);
        double prev = std::numeric_limits<double>::infinity();
        double prev_b = std::numeric_limits<double>::infinity();
        for (int k = 1; k < 100; ++k) {
            const double d = weighted_square().neg_derivative(std::span<const Sample>(g), -10 + 1.2 * k);
            const double db = log_loss().neg_derivative(std::span<const Sample>(gb), k / 100.0);
            CHECK(d < prev);
            CHECK(db < prev_b);
            prev = d;
            prev_b = db;
        }
    }
}

TEST_CASE("property: derivative zero crossing equals the merge-rule minimizer") {
    std::mt19937_64 rng(13);
    for (const LossFamily* family : {&weighted_square(), static_cast<const LossFamily*>(&linex())}) {
        for (int trial = 0; trial < 200; ++trial) {
            const auto g = random_group(rng, 1 + trial % 10);
            Summary folded = family->summarize(g.front());
            for (std::size_t i = 1; i < g.size(); ++i) folded = family->merge(folded, family->summarize(g[i]));
            const double root = bisect_root(
                [&](double z) { return family->neg_derivative(std::span<const Sample>(g), z); }, -1000, 1000);
            CHECK(std::abs(root - folded.minimizer) <= 1e-9 * std::max(1.0, std::abs(root)));
        }
    }
}

TEST_CASE("property: a pooled sample's loss is the sum of its members' losses") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    struct Case {
        const LossFamily* family;
        bool binary;
        double lo, hi;
    };
    const Case cases[] = {{&weighted_square(), false, -50, 150},
                          {&log_loss(), true, 0.01, 0.99},
                          {&linex(), false, 0, 100}};
    for (const auto& c : cases) {
        for (int trial = 0; trial < 200; ++trial) {
            auto g = random_group(rng, 2 + trial % 4, c.binary);
            Sample pooled = g.front();
            for (std::size_t i = 1; i < g.size(); ++i) pooled = c.family->pool(pooled, g[i]);
            const double z = c.lo + (c.hi - c.lo) * u(rng);
            double sum = 0;
            for (const auto& s : g) sum += c.family->loss(s, z);
            CHECK(close_rel(c.family->loss(pooled, z), sum, 1e-9, 1e-9));
        }
    }
}
