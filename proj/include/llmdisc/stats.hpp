#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace llmdisc {

struct PairedSeries {
    std::vector<double> x;
    std::vector<double> y;
};

void validate(const PairedSeries& s);

// Kendall tau-b (tie-corrected), O(n log n) via merge-sort inversion
// counting. Undefined (error) when either series is entirely tied.
double kendall_tau(const PairedSeries& s);

// Product-moment correlation; error on zero variance.
double pearson_r(const PairedSeries& s);

// Maximal whitespace-separated tokens.
long word_count(std::string_view text);

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // sample (n-1); 0 for singletons, flagged
    bool single_sample = false;
};

MeanStd mean_std(const std::vector<double>& values);

enum class Strength { very_weak, weak, moderate, strong };

std::string to_string(Strength s);

// |tau| in [0,0.1) very_weak, [0.1,0.2) weak, [0.2,0.3) moderate,
// [0.3,1] strong.
Strength strength_label(double tau_abs);

// Mean over candidates of BLEU(candidate i, references = all others):
// lowercased, punctuation-stripped whitespace tokens; uniform weights up
// to max_n; add-epsilon (1e-9) for zero n-gram matches; brevity penalty
// against the closest reference length (ties toward the shorter).
// Empty responses are skipped with a warning; fewer than 2 usable is an
// error.
double self_bleu(const std::vector<std::string>& corpus, int max_n = 4);

}  // namespace llmdisc
