#include "projifs/spectral.hpp"

#include "projifs/numeric.hpp"
#include "projifs/subsystems.hpp"

#include <algorithm>
#include <cmath>

namespace projifs {

ZetaSums partial_zeta(const SystemConfig& cfg, double s, int n, double budget) {
    if (s < 0) throw std::invalid_argument("s must be non-negative");
    if (n < 1) throw std::invalid_argument("depth must be at least 1");
    cfg.validate();
    const NormKind norm = cfg.norm;
    struct Acc {
        std::vector<CompensatedSum> by_len;
    };
    auto parts = partitioned_walk<Acc>(
        cfg.alphabet, 1, n,
        [&](Acc& acc, std::span<const Letter> w, const Matrix2& m) {
            if (acc.by_len.empty()) acc.by_len.resize(n);
            acc.by_len[w.size() - 1].add(std::pow(op_norm(m, norm), -2 * s));
        },
        budget);
    std::vector<CompensatedSum> total(n);
    for (const auto& p : parts)
        for (std::size_t l = 0; l < p.by_len.size(); ++l) total[l].add(p.by_len[l]);
    ZetaSums out;
    out.norm = norm;
    CompensatedSum cum;
    for (int l = 0; l < n; ++l) cum.add(total[l].value());
    out.z_n = total[n - 1].value();
    out.cumulative = cum.value();
    return out;
}

NormTable::NormTable(const SystemConfig& cfg, int depth, double budget) : norm_(cfg.norm) {
    if (depth < 1) throw std::invalid_argument("depth must be at least 1");
    cfg.validate();
    struct Acc {
        std::vector<std::vector<double>> by_len;
    };
    const NormKind norm = cfg.norm;
    auto parts = partitioned_walk<Acc>(
        cfg.alphabet, 1, depth,
        [&](Acc& acc, std::span<const Letter> w, const Matrix2& m) {
            if (acc.by_len.empty()) acc.by_len.resize(depth);
            acc.by_len[w.size() - 1].push_back(std::log(op_norm(m, norm)));
        },
        budget);
    log_norms_.resize(depth);
    for (int l = 0; l < depth; ++l) {
        std::size_t total = 0;
        for (const auto& p : parts)
            if (!p.by_len.empty()) total += p.by_len[l].size();
        log_norms_[l].reserve(total);
        for (const auto& p : parts)
            if (!p.by_len.empty())
                log_norms_[l].insert(log_norms_[l].end(), p.by_len[l].begin(), p.by_len[l].end());
    }
}

double NormTable::zeta(int m, double s) const {
    const auto& v = log_norms_.at(m - 1);
    constexpr std::size_t block = 1 << 15;
    const std::size_t blocks = (v.size() + block - 1) / block;
    std::vector<CompensatedSum> partial(blocks);
    auto run = [&](std::size_t b) {
        const std::size_t end = std::min(v.size(), (b + 1) * block);
        for (std::size_t i = b * block; i < end; ++i) partial[b].add(std::exp(-2 * s * v[i]));
    };
    if (blocks > 4) parallel_for(blocks, run);
    else
        for (std::size_t b = 0; b < blocks; ++b) run(b);
    CompensatedSum total;
    for (const auto& p : partial) total.add(p);
    return total.value();
}

double NormTable::min_log_norm(int m) const {
    const auto& v = log_norms_.at(m - 1);
    return *std::min_element(v.begin(), v.end());
}

namespace {

// Z_{l+m} >= Z_l Z_m needs a submultiplicative norm. The max-entry norm is not one,
// but 2 |.|_max is for 2x2 matrices, which costs a factor 2^(-2s) per partial sum.
double submultiplicative_factor(NormKind norm, double s) {
    return norm == NormKind::MaxEntry ? std::pow(2.0, -2 * s) : 1.0;
}

}  // namespace

PressureEval pressure_bracket(const NormTable& table, double s, std::optional<double> c_const) {
    if (c_const && !(*c_const > 0 && *c_const <= 1))
        throw std::invalid_argument("almost-multiplicativity constant must lie in (0, 1]");
    PressureEval out;
    out.s = s;
    out.upper = c_const ? std::numeric_limits<double>::max() : kInfinity;
    for (int m = 1; m <= table.depth(); ++m) {
        const double z = table.zeta(m, s);
        const double root = std::pow(z, 1.0 / m);
        out.zn_roots.push_back(root);
        out.lower = std::max(out.lower, std::pow(submultiplicative_factor(table.norm(), s) * z, 1.0 / m));
        if (c_const) out.upper = std::min(out.upper, std::pow(std::pow(*c_const, -2 * s) * z, 1.0 / m));
    }
    return out;
}

PressureEval pressure_bracket(const SystemConfig& cfg, double s, int depth,
                              std::optional<double> c_const) {
    return pressure_bracket(NormTable(cfg, depth), s, c_const);
}

Bracket critical_exponent_bracket(const NormTable& table, std::optional<double> c_const,
                                  BisectionOptions opts) {
    if (c_const && !(*c_const > 0 && *c_const <= 1))
        throw std::invalid_argument("almost-multiplicativity constant must lie in (0, 1]");
    Bracket br;
    br.depth_used = table.depth();
    auto lower = [&](double s) {
        double best = 0;
        const double factor = submultiplicative_factor(table.norm(), s);
        for (int m = 1; m <= table.depth(); ++m) best = std::max(best, std::pow(factor * table.zeta(m, s), 1.0 / m));
        return best;
    };
    auto upper = [&](double s) {
        double best = kInfinity;
        for (int m = 1; m <= table.depth(); ++m)
            best = std::min(best, std::pow(std::pow(*c_const, -2 * s) * table.zeta(m, s), 1.0 / m));
        return best;
    };
    const double at_zero = lower(0);
    if (!(at_zero >= 1)) throw NotBracketed("pressure lower bound is below 1 at s = 0");

    if (at_zero > 1) {
        if (lower(opts.s_max) > 1) {
            br.lo = opts.s_max;
            br.hi = kInfinity;
            br.notes.push_back("lower pressure exceeds 1 at the probing cap; the system is likely not discrete");
            return br;
        }
        double a = 0, b = opts.s_max;
        while (b - a > opts.tol) {
            const double mid = 0.5 * (a + b);
            (lower(mid) > 1 ? a : b) = mid;
        }
        br.lo = a;
    }

    if (!c_const) {
        br.notes.push_back("no almost-multiplicativity constant: upper end not certified");
        return br;
    }
    if (upper(opts.s_max) >= 1) {
        br.notes.push_back("certified upper pressure stays above 1 up to the probing cap");
        return br;
    }
    double a = br.lo, b = opts.s_max;
    while (b - a > opts.tol) {
        const double mid = 0.5 * (a + b);
        (upper(mid) < 1 ? b : a) = mid;
    }
    br.hi = b;
    br.certified = true;
    return br;
}

Bracket critical_exponent_bracket(const SystemConfig& cfg, int depth, std::optional<double> c_const,
                                  BisectionOptions opts) {
    return critical_exponent_bracket(NormTable(cfg, depth), c_const, opts);
}

std::vector<LowerBoundReason> quick_lower_bounds(const SystemConfig& cfg, int depth) {
    cfg.validate();
    std::vector<LowerBoundReason> out;

    bool parabolic = false;
    walk_words(cfg.alphabet, {}, 1, depth, [&](std::span<const Letter>, const Matrix2& m) {
        parabolic = parabolic || classify(m) == ClassTag::Parabolic;
    });
    if (parabolic) out.push_back({"parabolic-present", 0.5});

    int disc_depth = 1;
    while (disc_depth < 12 && word_count(cfg.size(), 1, disc_depth + 1) <= 8192) ++disc_depth;
    const auto prof = discreteness_profile(cfg, disc_depth);
    if (!prof.empty()) {
        const auto& last = prof.back();
        if (last.identity_distance <= 1e-9) out.push_back({"identity-approach", kInfinity});
        else if (last.accumulation_distance < kAccumulationTol)
            out.push_back({"non-discrete", kInfinity});
    }

    if (common_fixed_point(cfg)) {
        try {
            const ReducibleVerdict v = reducible_dimension(cfg);
            if (v.kind == ReducibleCase::ParabolicAtRepeller || v.kind == ReducibleCase::AttractorMeetsRepeller)
                out.push_back({std::string("reducible-") + to_string(v.kind), 1.0});
        } catch (const std::exception&) {
        }
    }
    return out;
}

}  // namespace projifs
