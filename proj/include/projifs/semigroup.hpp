#pragma once

#include "projifs/geometry.hpp"

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace projifs {

using Letter = std::uint32_t;

struct Word {
    std::vector<Letter> letters;
    std::string str() const;  // 1-based letters, e.g. "112"; dot separated past 9 letters
    friend bool operator==(const Word&, const Word&) = default;
};

struct SystemConfig {
    std::vector<Matrix2> alphabet;
    std::optional<std::vector<double>> probs;
    NormKind norm = NormKind::Operator2;
    int depth_cap = 12;
    std::uint64_t seed = 1;

    void validate() const;  // throws std::invalid_argument
    std::size_t size() const { return alphabet.size(); }
};

SystemConfig with_alphabet(const SystemConfig& cfg, std::vector<Matrix2> alphabet);
std::vector<Matrix2> inverted(std::span<const Matrix2> alphabet);

Matrix2 word_product(std::span<const Matrix2> alphabet, std::span<const Letter> letters);

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(double requested, double budget);
    double requested;  // number of words the call would have visited
    double budget;
};

inline constexpr double kDefaultWordBudget = 1 << 26;

// Number of words with lengths in [min_len, max_len].
double word_count(std::size_t letters, int min_len, int max_len);
void check_budget(std::size_t letters, int min_len, int max_len, double budget);

// Worker count: PROJIFS_THREADS if set, else hardware concurrency.
unsigned thread_count();

// Runs task(i) for i in [0, n) on the worker pool. Each index runs exactly once.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task);

// Depth-first walk over the words that extend `prefix`, visiting those whose
// length lies in [min_len, max_len] in preorder, which is lexicographic order
// within a fixed length. visit(letters, product) receives the full word.
template <class Visit>
void walk_words(std::span<const Matrix2> alphabet, std::span<const Letter> prefix,
                int min_len, int max_len, Visit&& visit) {
    const int base = static_cast<int>(prefix.size());
    if (max_len < base || alphabet.empty()) return;
    std::vector<Letter> letters(prefix.begin(), prefix.end());
    std::vector<Matrix2> products;  // products[k] = product of the first k letters
    products.reserve(max_len + 1);
    products.push_back(Matrix2::identity());
    for (Letter l : prefix) products.push_back(products.back() * alphabet[l]);
    if (base >= min_len && base >= 1) visit(std::span<const Letter>(letters), products.back());
    if (max_len == base) return;

    const auto n = static_cast<Letter>(alphabet.size());
    letters.push_back(0);
    products.push_back(products[base] * alphabet[0]);
    while (static_cast<int>(letters.size()) > base) {
        const int len = static_cast<int>(letters.size());
        if (len >= min_len) visit(std::span<const Letter>(letters), products.back());
        if (len < max_len) {
            letters.push_back(0);
            products.push_back(products[len] * alphabet[0]);
            continue;
        }
        // advance to the next sibling, popping exhausted levels
        while (static_cast<int>(letters.size()) > base && letters.back() + 1 == n) {
            letters.pop_back();
            products.pop_back();
        }
        if (static_cast<int>(letters.size()) == base) break;
        ++letters.back();
        products.pop_back();
        products.push_back(products[letters.size() - 1] * alphabet[letters.back()]);
    }
}

// Fixed partition of the words of lengths [min_len, max_len]: one task for all words
// shorter than the split length, then one task per prefix of the split length in
// lexicographic order. The partition depends only on the alphabet size, so merged
// results do not depend on the worker count.
struct WordPartition {
    int split_len = 0;
    std::vector<std::vector<Letter>> prefixes;
    std::size_t tasks() const { return prefixes.size() + 1; }
};

WordPartition partition_words(std::size_t letters, int min_len, int max_len);

template <class Acc, class Visit>
std::vector<Acc> partitioned_walk(std::span<const Matrix2> alphabet, int min_len, int max_len,
                                  Visit visit, double budget = kDefaultWordBudget) {
    check_budget(alphabet.size(), min_len, max_len, budget);
    const WordPartition part = partition_words(alphabet.size(), min_len, max_len);
    std::vector<Acc> results(part.tasks());
    parallel_for(part.tasks(), [&](std::size_t task) {
        Acc& acc = results[task];
        auto v = [&](std::span<const Letter> w, const Matrix2& m) { visit(acc, w, m); };
        if (task == 0) {
            if (part.split_len > min_len)
                walk_words(alphabet, {}, min_len, std::min(part.split_len - 1, max_len), v);
        } else {
            walk_words(alphabet, part.prefixes[task - 1], std::max(min_len, part.split_len),
                       max_len, v);
        }
    });
    return results;
}

// Enumerates every length-n word once, in lexicographic order, with its product.
void enumerate_words(const SystemConfig& cfg, int n,
                     const std::function<void(const Word&, const Matrix2&)>& sink,
                     double budget = kDefaultWordBudget);

enum class DistanceBranch { Logarithm, IdentityOffset };
const char* to_string(DistanceBranch b);

struct Distance {
    double value = 0;
    DistanceBranch branch = DistanceBranch::Logarithm;
};

// Left-invariant distance: |log(A^-1 B)|_F when A^-1 B has positive trace,
// else |A^-1 B - I|_F.
Distance left_invariant_dist(const Matrix2& a, const Matrix2& b);
// min(dist(A, B), dist(B, A)); equal to either on the logarithm branch.
double symmetric_dist(const Matrix2& a, const Matrix2& b);

struct ClosePair {
    std::size_t first = 0, second = 0;
    double distance = 0;
};

struct PairSearch {
    std::optional<ClosePair> closest;  // closest pair above the exclusion threshold
    std::vector<ClosePair> below;      // pairs at or below the exclusion threshold (capped)
    bool exact = true;
};

inline constexpr double kCollisionTol = 1e-10;
// Distinct matrices closer than this at the deepest profiled level count as accumulating.
inline constexpr double kAccumulationTol = 1e-3;
inline constexpr std::size_t kExactPairLimit = 100000;

// Closest pair under symmetric_dist. Pairs with distance <= exclude_below are
// collected separately. Exact below kExactPairLimit matrices, else a sliding
// window over the log-norm ordering.
PairSearch closest_pair(std::span<const Matrix2> mats, double exclude_below = -1,
                        std::size_t max_below = 64, std::size_t window = 64);

struct DepthMinimum {
    int depth = 0;
    double min_distance = 0;
    Word first, second;
};

struct WordCollision {
    Word first, second;
    double distance = 0;
};

struct DiophantineProfile {
    std::vector<DepthMinimum> per_depth;
    std::optional<double> fitted_c;
    std::vector<WordCollision> collisions;
    bool exact = true;
};

DiophantineProfile diophantine_profile(const SystemConfig& cfg, int n_max,
                                       double collision_tol = kCollisionTol);

struct DiscretenessRecord {
    int depth = 0;
    double identity_distance = 0;      // min over words of length <= depth to +-Id
    double accumulation_distance = 0;  // min distance between distinct matrices of length <= depth
};

std::vector<DiscretenessRecord> discreteness_profile(const SystemConfig& cfg, int n_max,
                                                     double collision_tol = kCollisionTol);

std::optional<ProjPoint> common_fixed_point(const SystemConfig& cfg, double tol = 1e-9);

}  // namespace projifs
