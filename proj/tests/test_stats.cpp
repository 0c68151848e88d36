#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "doctest.h"
#include "llmdisc/errors.hpp"
#include "llmdisc/stats.hpp"
#include "test_util.hpp"

using namespace llmdisc;

namespace {

// Independent O(n^2) tau-b oracle: classify every pair directly.
// Returns nullopt when either series is entirely tied (tau undefined).
std::optional<double> brute_tau(const std::vector<double>& x,
                                const std::vector<double>& y) {
    double concordant = 0, discordant = 0, tied_x_only = 0, tied_y_only = 0;
    size_t n = x.size();
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            double dx = x[i] - x[j];
            double dy = y[i] - y[j];
            if (dx == 0 && dy == 0) continue;
            if (dx == 0)
                ++tied_x_only;
            else if (dy == 0)
                ++tied_y_only;
            else if (dx * dy > 0)
                ++concordant;
            else
                ++discordant;
        }
    }
    double pairs_untied_x = concordant + discordant + tied_y_only;
    double pairs_untied_y = concordant + discordant + tied_x_only;
    if (pairs_untied_x == 0 || pairs_untied_y == 0) return std::nullopt;
    return (concordant - discordant) /
           std::sqrt(pairs_untied_x * pairs_untied_y);
}

bool all_equal(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double d) { return d == v[0]; });
}

}  // namespace

TEST_CASE("paired series validation") {
    CHECK_THROWS_AS(validate(PairedSeries{{1, 2}, {1}}), ConfigError);
    CHECK_THROWS_AS(validate(PairedSeries{{1}, {1}}), ConfigError);
    CHECK_THROWS_AS(validate(PairedSeries{{}, {}}), ConfigError);
    CHECK_NOTHROW(validate(PairedSeries{{1, 2}, {3, 4}}));
    CHECK_THROWS_AS(kendall_tau(PairedSeries{{1, 2, 3}, {1, 2}}), ConfigError);
    CHECK_THROWS_AS(pearson_r(PairedSeries{{1}, {1}}), ConfigError);
}

TEST_CASE("kendall tau on hand-checked series") {
    CHECK(kendall_tau({{1, 2, 3, 4, 5}, {10, 20, 30, 40, 50}}) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kendall_tau({{1, 2, 3, 4, 5}, {50, 40, 30, 20, 10}}) ==
          doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(kendall_tau({{0, 1}, {5, 2}}) == doctest::Approx(-1.0));
    CHECK(kendall_tau({{1, 2, 3}, {1, 3, 2}}) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    // C=3 D=1 tied-x-only=1 tied-y-only=1 -> 2 / sqrt(5*5)
    CHECK(kendall_tau({{1, 1, 2, 3}, {2, 1, 1, 3}}) ==
          doctest::Approx(0.4).epsilon(1e-12));
    // Ties on both sides still give a perfect monotone relation.
    CHECK(kendall_tau({{1, 1, 2}, {1, 1, 2}}) == doctest::Approx(1.0));
}

TEST_CASE("kendall tau matches the brute-force oracle on tie-heavy fuzz") {
    std::mt19937 rng(20250814);
    int checked = 0;
    for (int iter = 0; iter < 200; ++iter) {
        size_t n = 2 + rng() % 7;
        std::vector<double> x(n), y(n);
        for (size_t i = 0; i < n; ++i) {
            x[i] = static_cast<double>(rng() % 4);
            y[i] = static_cast<double>(rng() % 4);
        }
        CAPTURE(iter);
        std::optional<double> expected = brute_tau(x, y);
        if (!expected) {
            CHECK_THROWS_AS(kendall_tau({x, y}), StatsError);
            continue;
        }
        double got = kendall_tau({x, y});
        CHECK(got == doctest::Approx(*expected).epsilon(1e-12));
        ++checked;
    }
    CHECK(checked > 100);  // the fuzz must not be dominated by degenerate draws
}

TEST_CASE("kendall tau handles long tie-heavy series") {
    std::mt19937 rng(7);
    size_t n = 500;
    std::vector<double> x(n), y(n);
    for (size_t i = 0; i < n; ++i) {
        x[i] = static_cast<double>(rng() % 5);
        y[i] = static_cast<double>(rng() % 5);
    }
    std::optional<double> expected = brute_tau(x, y);
    REQUIRE(expected.has_value());
    CHECK(kendall_tau({x, y}) == doctest::Approx(*expected).epsilon(1e-12));

    std::vector<double> perm(2000);
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<double>(i);
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(kendall_tau({perm, perm}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kendall tau is invariant under strictly monotone transforms") {
    std::mt19937 rng(99);
    for (int iter = 0; iter < 50; ++iter) {
        size_t n = 3 + rng() % 6;
        std::vector<double> x(n), y(n);
        for (size_t i = 0; i < n; ++i) {
            x[i] = static_cast<double>(rng() % 5) - 2.0;
            y[i] = static_cast<double>(rng() % 5) - 2.0;
        }
        if (all_equal(x) || all_equal(y)) continue;
        std::vector<double> x2(n), y2(n);
        for (size_t i = 0; i < n; ++i) {
            x2[i] = 2.0 * x[i] + 1.0;
            y2[i] = y[i] * y[i] * y[i];
        }
        CAPTURE(iter);
        CHECK(kendall_tau({x2, y2}) ==
              doctest::Approx(kendall_tau({x, y})).epsilon(1e-12));
    }
}

TEST_CASE("degenerate correlations raise errors") {
    CHECK_THROWS_AS(kendall_tau({{1, 1, 1}, {1, 2, 3}}), StatsError);
    CHECK_THROWS_AS(kendall_tau({{1, 2, 3}, {4, 4, 4}}), StatsError);
    CHECK_THROWS_AS(pearson_r({{2, 2, 2}, {1, 2, 3}}), StatsError);
    CHECK_THROWS_AS(pearson_r({{1, 2, 3}, {9, 9, 9}}), StatsError);
}

TEST_CASE("pearson r on exact and fuzzed inputs") {
    CHECK(pearson_r({{1, 2, 3, 4}, {5, 8, 11, 14}}) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pearson_r({{1, 2, 3, 4}, {7, 6.5, 6, 5.5}}) ==
          doctest::Approx(-1.0).epsilon(1e-12));

    // Independent oracle: covariance form with long double accumulation.
    std::mt19937 rng(123);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    for (int iter = 0; iter < 50; ++iter) {
        size_t n = 2 + rng() % 20;
        std::vector<double> x(n), y(n);
        for (size_t i = 0; i < n; ++i) {
            x[i] = dist(rng);
            y[i] = dist(rng) + 0.3 * x[i];
        }
        if (all_equal(x) || all_equal(y)) continue;
        long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
        for (size_t i = 0; i < n; ++i) {
            sx += x[i];
            sy += y[i];
            sxx += static_cast<long double>(x[i]) * x[i];
            syy += static_cast<long double>(y[i]) * y[i];
            sxy += static_cast<long double>(x[i]) * y[i];
        }
        long double num = sxy - sx * sy / static_cast<long double>(n);
        long double den = std::sqrt((sxx - sx * sx / static_cast<long double>(n)) *
                                    (syy - sy * sy / static_cast<long double>(n)));
        CAPTURE(iter);
        CHECK(pearson_r({x, y}) ==
              doctest::Approx(static_cast<double>(num / den)).epsilon(1e-9));
    }
}

TEST_CASE("word counting uses maximal whitespace-separated tokens") {
    CHECK(word_count("") == 0);
    CHECK(word_count("   \t\n ") == 0);
    CHECK(word_count("one") == 1);
    CHECK(word_count("two words") == 2);
    CHECK(word_count("  padded   words  ") == 2);
    CHECK(word_count("tabs\tand\nnewlines\r\nmixed in") == 5);
    CHECK(word_count("punct, still. one-token") == 3);
}

TEST_CASE("mean and sample standard deviation") {
    MeanStd m = mean_std({2.0, 2.0, 3.0, 1.0});
    CHECK(m.mean == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(m.std == doctest::Approx(0.8164965809277260).epsilon(1e-12));
    CHECK(!m.single_sample);

    MeanStd single = mean_std({5.0});
    CHECK(single.mean == doctest::Approx(5.0));
    CHECK(single.std == 0.0);
    CHECK(single.single_sample);

    MeanStd constant = mean_std({4.0, 4.0, 4.0});
    CHECK(constant.std == doctest::Approx(0.0));

    CHECK_THROWS_AS(mean_std({}), ConfigError);
}

TEST_CASE("correlation strength bands") {
    CHECK(strength_label(0.0) == Strength::very_weak);
    CHECK(strength_label(0.0999) == Strength::very_weak);
    CHECK(strength_label(0.1) == Strength::weak);
    CHECK(strength_label(0.1999) == Strength::weak);
    CHECK(strength_label(0.2) == Strength::moderate);
    CHECK(strength_label(0.2753) == Strength::moderate);
    CHECK(strength_label(0.3) == Strength::strong);
    CHECK(strength_label(0.5213) == Strength::strong);
    CHECK(strength_label(1.0) == Strength::strong);
    CHECK_THROWS_AS(strength_label(-0.01), ConfigError);
    CHECK_THROWS_AS(strength_label(1.5), ConfigError);

    CHECK(to_string(Strength::very_weak) == "very_weak");
    CHECK(to_string(Strength::weak) == "weak");
    CHECK(to_string(Strength::moderate) == "moderate");
    CHECK(to_string(Strength::strong) == "strong");
}

TEST_CASE("self-BLEU against frozen reference values") {
    // Values frozen from an independent reference implementation of the
    // same pinned algorithm (lowercase/punctuation-stripped tokens,
    // epsilon 1e-9 smoothing, closest-reference brevity penalty).
    std::vector<std::string> corpus = {
        "the quick brown fox jumps over the lazy dog",
        "the quick brown cat sleeps under the lazy tree",
        "a slow green turtle walks past the quiet pond"};
    double got = self_bleu(corpus);
    CHECK(std::abs(got - 0.0015571608154305373) < 1e-9);

    // Sentences must reach max_n tokens: shorter candidates take the
    // epsilon for the missing n-gram orders and cannot score 1.0.
    std::vector<std::string> identical = {"the same words appear here",
                                          "the same words appear here",
                                          "the same words appear here"};
    CHECK(self_bleu(identical) == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<std::string> disjoint = {"alpha beta gamma delta",
                                         "epsilon zeta eta theta"};
    double tiny = self_bleu(disjoint);
    CHECK(tiny > 0.0);
    CHECK(tiny < 1e-6);
}

TEST_CASE("self-BLEU is permutation invariant and rises with duplication") {
    std::vector<std::string> corpus = {
        "the quick brown fox jumps over the lazy dog",
        "the quick brown cat sleeps under the lazy tree",
        "a slow green turtle walks past the quiet pond"};
    std::vector<std::string> shuffled = {corpus[2], corpus[0], corpus[1]};
    CHECK(self_bleu(shuffled) == doctest::Approx(self_bleu(corpus)).epsilon(1e-12));

    std::vector<std::string> duplicated = {corpus[0], corpus[0], corpus[2]};
    CHECK(self_bleu(duplicated) > self_bleu(corpus));
}

TEST_CASE("self-BLEU normalizes case and strips punctuation") {
    CHECK(self_bleu({"Hello, Wonderful World Of Words!",
                     "hello wonderful world of words"}) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("self-BLEU brevity penalty resolves length ties toward the shorter reference") {
    // Corpus {"w w", "w", "w w w"} with max_n = 2, derived by hand:
    //  - "w w" (len 2): closest refs are len 1 and len 3 (tie) -> r = 1,
    //    c > r so BP = 1; p1 = 1 (max ref count 3 covers both tokens),
    //    p2 = 1 ("w w" appears in "w w w") -> BLEU = 1.
    //  - "w" (len 1): r = 2, BP = e^(1-2); p1 = 1, p2 has no candidate
    //    bigrams -> epsilon -> BLEU = e^-1 * sqrt(1e-9).
    //  - "w w w" (len 3): r = 2, c > r so BP = 1; p1 = 2/3, p2 = 1/2
    //    -> BLEU = sqrt(1/3).
    double expected =
        (1.0 + std::exp(-1.0) * std::sqrt(1e-9) + std::sqrt(1.0 / 3.0)) / 3.0;
    double got = self_bleu({"w w", "w", "w w w"}, 2);
    CHECK(got == doctest::Approx(expected).epsilon(1e-12));
    // Had the tie gone to the longer reference, the first candidate would
    // take BP = e^(1 - 3/2) and the mean would drop below 0.52.
    CHECK(got > 0.52);
}

TEST_CASE("self-BLEU skips empty responses but keeps punctuation-only ones") {
    std::vector<std::string> base = {"a b", "a b"};
    std::vector<std::string> padded = {"a b", "", "a b"};
    CHECK(self_bleu(padded) == doctest::Approx(self_bleu(base)).epsilon(1e-12));

    // "..." tokenizes to nothing: zero-length candidate gets BP 0, while
    // the identical four-token twins each score a full 1.
    CHECK(self_bleu({"...", "a b c d", "a b c d"}) == doctest::Approx(2.0 / 3.0));

    CHECK_THROWS_AS(self_bleu({"", "only one usable"}), StatsError);
    CHECK_THROWS_AS(self_bleu({"just one"}), StatsError);
    CHECK_THROWS_AS(self_bleu({}), StatsError);
    CHECK_THROWS_AS(self_bleu({"a", "b"}, 0), ConfigError);
}
