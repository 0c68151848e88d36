#include "llmdisc/stats.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iostream>
#include <map>
#include <numeric>

#include "llmdisc/errors.hpp"

namespace llmdisc {

namespace {

// Pairs with equal values contribute k*(k-1)/2 tied pairs.
double tied_pairs(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    double total = 0.0;
    size_t i = 0;
    while (i < values.size()) {
        size_t j = i;
        while (j < values.size() && values[j] == values[i]) ++j;
        double k = static_cast<double>(j - i);
        total += k * (k - 1) / 2.0;
        i = j;
    }
    return total;
}

// Inversions (strictly decreasing pairs) counted by merge sort.
double count_inversions(std::vector<double>& v, std::vector<double>& buf,
                        size_t lo, size_t hi) {
    if (hi - lo < 2) return 0.0;
    size_t mid = lo + (hi - lo) / 2;
    double count = count_inversions(v, buf, lo, mid) +
                   count_inversions(v, buf, mid, hi);
    size_t a = lo, b = mid, out = lo;
    while (a < mid && b < hi) {
        if (v[b] < v[a]) {
            count += static_cast<double>(mid - a);
            buf[out++] = v[b++];
        } else {
            buf[out++] = v[a++];
        }
    }
    while (a < mid) buf[out++] = v[a++];
    while (b < hi) buf[out++] = v[b++];
    std::copy(buf.begin() + lo, buf.begin() + hi, v.begin() + lo);
    return count;
}

}  // namespace

void validate(const PairedSeries& s) {
    if (s.x.size() != s.y.size())
        throw ConfigError("paired series must have equal lengths");
    if (s.x.size() < 2)
        throw ConfigError("paired series needs at least 2 observations");
}

double kendall_tau(const PairedSeries& s) {
    validate(s);
    size_t n = s.x.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (s.x[a] != s.x[b]) return s.x[a] < s.x[b];
        return s.y[a] < s.y[b];
    });

    double n0 = static_cast<double>(n) * (n - 1) / 2.0;
    double n1 = tied_pairs(s.x);        // pairs tied in x
    double n2 = tied_pairs(s.y);        // pairs tied in y
    if (n1 == n0) throw StatsError("correlation undefined: x series all tied");
    if (n2 == n0) throw StatsError("correlation undefined: y series all tied");

    // Pairs tied in both x and y.
    double n3 = 0.0;
    {
        std::map<std::pair<double, double>, double> joint;
        for (size_t i = 0; i < n; ++i) joint[{s.x[i], s.y[i]}] += 1.0;
        for (const auto& [key, k] : joint) n3 += k * (k - 1) / 2.0;
    }

    // With x sorted (ties broken by y), inversions in y are exactly the
    // discordant pairs among x-untied pairs.
    std::vector<double> y_sorted(n);
    for (size_t i = 0; i < n; ++i) y_sorted[i] = s.y[order[i]];
    std::vector<double> buf(n);
    double swaps = count_inversions(y_sorted, buf, 0, n);

    double concordant_minus_discordant = n0 - n1 - n2 + n3 - 2.0 * swaps;
    double denom = std::sqrt((n0 - n1) * (n0 - n2));
    return concordant_minus_discordant / denom;
}

double pearson_r(const PairedSeries& s) {
    validate(s);
    size_t n = s.x.size();
    double mx = std::accumulate(s.x.begin(), s.x.end(), 0.0) / n;
    double my = std::accumulate(s.y.begin(), s.y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double dx = s.x[i] - mx;
        double dy = s.y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw StatsError("correlation undefined: zero variance");
    return sxy / std::sqrt(sxx * syy);
}

long word_count(std::string_view text) {
    long count = 0;
    bool in_token = false;
    for (char c : text) {
        bool space = std::isspace(static_cast<unsigned char>(c));
        if (!space && !in_token) ++count;
        in_token = !space;
    }
    return count;
}

MeanStd mean_std(const std::vector<double>& values) {
    if (values.empty()) throw ConfigError("mean_std needs at least one value");
    MeanStd out;
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) /
               values.size();
    if (values.size() == 1) {
        out.single_sample = true;
        return out;
    }
    double ss = 0.0;
    for (double v : values) {
        double d = v - out.mean;
        ss += d * d;
    }
    out.std = std::sqrt(ss / (values.size() - 1));
    return out;
}

std::string to_string(Strength s) {
    switch (s) {
        case Strength::very_weak: return "very_weak";
        case Strength::weak: return "weak";
        case Strength::moderate: return "moderate";
        case Strength::strong: return "strong";
    }
    throw ConfigError("unknown strength value");
}

Strength strength_label(double tau_abs) {
    if (tau_abs < 0.0 || tau_abs > 1.0)
        throw ConfigError("strength_label expects |tau| in [0, 1]");
    if (tau_abs < 0.1) return Strength::very_weak;
    if (tau_abs < 0.2) return Strength::weak;
    if (tau_abs < 0.3) return Strength::moderate;
    return Strength::strong;
}

namespace {

constexpr double kSmoothingEpsilon = 1e-9;

std::vector<std::string> bleu_tokens(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(current);
            current.clear();
        }
    };
    for (char c : text) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isspace(u)) {
            flush();
        } else if (!std::ispunct(u)) {
            current += static_cast<char>(std::tolower(u));
        }
    }
    flush();
    return tokens;
}

std::map<std::vector<std::string>, long> ngram_counts(
    const std::vector<std::string>& tokens, int n) {
    std::map<std::vector<std::string>, long> counts;
    if (static_cast<int>(tokens.size()) < n) return counts;
    for (size_t i = 0; i + n <= tokens.size(); ++i)
        counts[std::vector<std::string>(tokens.begin() + i,
                                        tokens.begin() + i + n)] += 1;
    return counts;
}

double bleu_against(const std::vector<std::string>& candidate,
                    const std::vector<std::vector<std::string>>& references,
                    int max_n) {
    double log_sum = 0.0;
    for (int n = 1; n <= max_n; ++n) {
        auto cand_counts = ngram_counts(candidate, n);
        long total = 0, matched = 0;
        for (const auto& [gram, count] : cand_counts) total += count;
        if (total > 0) {
            std::map<std::vector<std::string>, long> max_ref;
            for (const auto& ref : references)
                for (const auto& [gram, count] : ngram_counts(ref, n))
                    max_ref[gram] = std::max(max_ref[gram], count);
            for (const auto& [gram, count] : cand_counts) {
                auto it = max_ref.find(gram);
                if (it != max_ref.end()) matched += std::min(count, it->second);
            }
        }
        double p = (total > 0 && matched > 0)
                       ? static_cast<double>(matched) / total
                       : kSmoothingEpsilon;
        log_sum += std::log(p);
    }
    double c = static_cast<double>(candidate.size());
    double r = 0.0;
    double best_gap = -1.0;
    for (const auto& ref : references) {
        double len = static_cast<double>(ref.size());
        double gap = std::abs(len - c);
        if (best_gap < 0 || gap < best_gap || (gap == best_gap && len < r)) {
            best_gap = gap;
            r = len;
        }
    }
    double bp = c > r ? 1.0 : c > 0.0 ? std::exp(1.0 - r / c) : 0.0;
    return bp * std::exp(log_sum / max_n);
}

}  // namespace

double self_bleu(const std::vector<std::string>& corpus, int max_n) {
    if (max_n < 1) throw ConfigError("self_bleu needs max_n >= 1");
    std::vector<std::vector<std::string>> tokenized;
    for (const std::string& response : corpus) {
        if (response.empty()) {
            std::cerr << "warning: skipping empty response in self-BLEU corpus\n";
            continue;
        }
        tokenized.push_back(bleu_tokens(response));
    }
    if (tokenized.size() < 2)
        throw StatsError("self-BLEU needs at least 2 usable responses");
    double sum = 0.0;
    for (size_t i = 0; i < tokenized.size(); ++i) {
        std::vector<std::vector<std::string>> references;
        for (size_t j = 0; j < tokenized.size(); ++j)
            if (j != i) references.push_back(tokenized[j]);
        sum += bleu_against(tokenized[i], references, max_n);
    }
    return sum / tokenized.size();
}

}  // namespace llmdisc
