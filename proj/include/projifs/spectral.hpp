#pragma once

#include "projifs/semigroup.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace projifs {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct ZetaSums {
    double z_n = 0;         // sum over length-n words of |A|^(-2s)
    double cumulative = 0;  // sum over lengths 1..n
    NormKind norm = NormKind::Operator2;
};

ZetaSums partial_zeta(const SystemConfig& cfg, double s, int n, double budget = kDefaultWordBudget);

// log |A| for every word up to a depth, grouped by length in lexicographic order.
// Built once and reused across the pressure evaluations of a bisection.
class NormTable {
public:
    NormTable(const SystemConfig& cfg, int depth, double budget = kDefaultWordBudget);

    int depth() const { return static_cast<int>(log_norms_.size()); }
    NormKind norm() const { return norm_; }
    // Z_m(s), compensated, summed in lexicographic order in fixed-size blocks.
    double zeta(int m, double s) const;
    double min_log_norm(int m) const;
    std::span<const double> log_norms(int m) const { return log_norms_.at(m - 1); }

private:
    std::vector<std::vector<double>> log_norms_;
    NormKind norm_;
};

struct PressureEval {
    double s = 0;
    std::vector<double> zn_roots;  // Z_m(s)^(1/m), m = 1..depth
    double lower = 0;  // max of the roots; with MaxEntry each Z_m is first scaled by 2^(-2s)
    double upper = kInfinity;
};

PressureEval pressure_bracket(const NormTable& table, double s, std::optional<double> c_const);
PressureEval pressure_bracket(const SystemConfig& cfg, double s, int depth,
                              std::optional<double> c_const);

struct Bracket {
    double lo = 0;
    double hi = kInfinity;
    int depth_used = 0;
    bool certified = false;
    std::vector<std::string> notes;
};

struct BisectionOptions {
    double tol = 1e-4;
    double s_max = 5.0;
};

class NotBracketed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// [lo, hi] with P_lower(s) > 1 at lo and P_upper(s) < 1 at hi.
Bracket critical_exponent_bracket(const NormTable& table, std::optional<double> c_const,
                                  BisectionOptions opts = {});
Bracket critical_exponent_bracket(const SystemConfig& cfg, int depth, std::optional<double> c_const,
                                  BisectionOptions opts = {});

struct LowerBoundReason {
    std::string reason;
    double bound = 0;  // lower bound on delta; infinity for non-discrete systems
};

std::vector<LowerBoundReason> quick_lower_bounds(const SystemConfig& cfg, int depth = 6);

}  // namespace projifs
