#pragma once

#include "projifs/attractor.hpp"
#include "projifs/multicone.hpp"
#include "projifs/spectral.hpp"

#include <optional>
#include <string>
#include <vector>

namespace projifs {

class NotApplicable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CertificationFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ReducibleCase { UniformlyHyperbolicReducible, ParabolicAtRepeller, AttractorMeetsRepeller, SingletonAttractor };
const char* to_string(ReducibleCase c);

struct ReducibleVerdict {
    ReducibleCase kind = ReducibleCase::SingletonAttractor;
    std::optional<double> dimension;  // empty when deferred to the hyperbolic pipeline
    std::string dimension_tag;        // "1", "0" or "deferred-to-uh"
    ProjPoint common_point;
    std::optional<Word> first_witness, second_witness;
    std::vector<std::string> notes;
};

// Throws NotApplicable when the letters share no fixed point.
ReducibleVerdict reducible_dimension(const SystemConfig& cfg, int depth = 6);

struct Pivot {
    Word a0_word;      // base word; a0 is its power-th power
    int power = 1;
    Matrix2 a0;
    Arc u, u_prime, v;  // open arcs
    double margin = 0;  // min(dist(U, R), dist(V, K)) at selection time
};

// Re-checks closure(U') in U, closure(U) and closure(V) disjoint, and
// phi_{A0}(closure of the complement of V) inside U'.
bool verify_pivot(const Pivot& p);

// Pivot with U' taken as the image of the complement of V, padded. Throws NotApplicable if invalid.
Pivot make_pivot(Word a0_word, int power, const Matrix2& a0, Arc u, Arc v);

struct PivotSearchOptions {
    int cloud_depth_words = 1 << 16;  // word budget for the K and R clouds
    int max_power = 8;
};

// Throws NotApplicable for reducible or elliptic systems and std::runtime_error
// when no pivot turns up at this depth.
Pivot find_pivot(const SystemConfig& cfg, int depth, PivotSearchOptions opts = {});

struct GammaBound {
    int n = 0;
    int depth = 0;            // zeta depth used for Gamma_n
    std::size_t letters = 0;  // |Gamma_n|
    double c = 0;             // almost-multiplicativity constant from (U, U')
    Bracket bracket;          // delta_{Gamma_n}
    double raw = 0;           // min(1, bracket.lo)
    double bound = 0;         // max of raw over Gamma_1 .. Gamma_n
};

inline constexpr double kGammaWordBudget = 1 << 20;

// Each K_{Gamma_m} lies in the attractor, so every min(1, delta_{Gamma_m}) bounds its
// dimension from below; `bound` keeps the best of them up to n. Throws
// CertificationFailed when some A0 B does not map closure(U) into U'.
std::vector<GammaBound> gamma_lower_bounds(const SystemConfig& cfg, const Pivot& pivot, int n_max,
                                           double budget = kGammaWordBudget);
GammaBound gamma_lower_bound(const SystemConfig& cfg, const Pivot& pivot, int n,
                             double budget = kGammaWordBudget);

struct WordMatrix {
    Word word;
    Matrix2 matrix;
};

// {A0} together with A0 B for words B over the other letters, total length <= n_max.
std::vector<WordMatrix> a_infty_truncation(const SystemConfig& cfg, Letter a0_letter, int n_max);

inline constexpr int kMaxEllipticOrder = 64;
inline constexpr double kRationalAngleTol = 1e-9;

// Order of the projective action of an elliptic or identity matrix, or nullopt
// when its rotation angle is not a rational multiple of pi with small denominator.
std::optional<int> projective_order(const Matrix2& m);

struct EllipticReduction {
    int period = 1;  // lcm of the orders
    Matrix2 generator;
    std::vector<Matrix2> alphabet;  // A B^k, A in S, 0 <= k < period
};

EllipticReduction elliptic_reduction(std::span<const Matrix2> hyperbolic_part,
                                     std::span<const Matrix2> elliptic_part);

}  // namespace projifs
