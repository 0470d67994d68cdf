#include "projifs/pipeline.hpp"

#include <algorithm>
#include <cmath>

namespace projifs {

int depth_for_budget(std::size_t letters, double max_words, int cap) {
    int d = 1;
    while (d < cap && word_count(letters, 1, d + 1) <= max_words) ++d;
    return d;
}

DimensionReport dimension_report(const SystemConfig& cfg, DimensionOptions opts) {
    cfg.validate();
    DimensionReport rep;
    const SemidiscreteReport sd = certify_semidiscrete(cfg);
    rep.semidiscrete = sd.verdict;

    const int cloud_depth = std::min(opts.cloud_depth, depth_for_budget(cfg.size(), 1 << 22));
    const PointCloud cloud = attractor_points_fixedpoint(cfg, cloud_depth);
    rep.cloud_points = cloud.size();
    try {
        rep.box = box_dimension(cloud);
    } catch (const TooFewScales& e) {
        rep.notes.push_back(std::string("box counting: ") + e.what());
    }

    if (sd.verdict == SemidiscreteVerdict::RefutedViaIdentityApproach) {
        rep.verdict = "not-applicable";
        rep.notes.push_back("not semidiscrete: the dimension formula does not apply");
        return rep;
    }

    rep.quick = quick_lower_bounds(cfg);
    if (common_fixed_point(cfg)) rep.reducible = reducible_dimension(cfg);

    std::optional<double> c;
    if (sd.cone) {
        rep.certificate = certify_uniform_hyperbolicity(cfg, sd.cone->cone);
        const double best = rep.certificate->c_best();
        if (best > 0 && best <= 1) c = best;
    }
    const int zeta_depth = opts.zeta_depth > 0 ? opts.zeta_depth : depth_for_budget(cfg.size(), 1 << 22, 24);
    try {
        rep.delta = critical_exponent_bracket(NormTable(cfg, zeta_depth), c);
    } catch (const NotBracketed& e) {
        rep.notes.push_back(e.what());
    }

    if (rep.reducible && rep.reducible->dimension) {
        rep.predicted_lo = rep.predicted_hi = *rep.reducible->dimension;
    } else {
        double lo = rep.delta ? rep.delta->lo : 0;
        for (const auto& q : rep.quick) lo = std::max(lo, q.bound);
        rep.predicted_lo = std::min(1.0, lo);
        rep.predicted_hi = std::min(1.0, rep.delta ? rep.delta->hi : kInfinity);
    }
    if (!rep.box) {
        rep.verdict = "inconclusive";
    } else {
        const double v = rep.box->value;
        const bool ok = v >= rep.predicted_lo - opts.tolerance && v <= rep.predicted_hi + opts.tolerance;
        rep.verdict = ok ? "consistent" : "inconsistent";
    }
    return rep;
}

std::vector<double> uniform_grid(double t0, double t1, int points) {
    if (points < 2) throw std::invalid_argument("grid needs at least two points");
    std::vector<double> out;
    for (int i = 0; i < points; ++i) out.push_back(t0 + (t1 - t0) * i / (points - 1));
    return out;
}

std::vector<ScanRow> scan_continuity(const FamilyConfig& family, std::span<const double> grid, ScanOptions opts) {
    std::vector<ScanRow> rows;
    std::optional<double> previous;
    for (double t : grid) {
        ScanRow row;
        row.t = t;
        try {
            const SystemConfig cfg = family.at(t);
            const SemidiscreteVerdict sd = certify_semidiscrete(cfg, 6).verdict;
            row.semidiscrete = to_string(sd);
            if (sd == SemidiscreteVerdict::RefutedViaIdentityApproach) {
                const PointCloud cloud = attractor_points_fixedpoint(cfg, std::min(opts.depth, depth_for_budget(cfg.size(), 1 << 18)));
                row.method = "box";
                if (cloud.size() <= 1) {
                    row.dimension = 0;
                } else {
                    row.dimension = box_dimension(cloud).value;
                }
            } else {
                const Bracket br = critical_exponent_bracket(NormTable(cfg, opts.depth), std::nullopt);
                row.method = "delta-lower";
                row.delta_lo = br.lo;
                row.delta_hi = br.hi;
                row.dimension = std::min(1.0, br.lo);
            }
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        if (row.dimension && previous) {
            row.jump = std::abs(*row.dimension - *previous);
            row.flagged = row.jump > opts.jump_flag;
        }
        if (row.dimension) previous = row.dimension;
        rows.push_back(std::move(row));
    }
    return rows;
}

double max_jump(const std::vector<ScanRow>& rows) {
    double worst = 0;
    for (const auto& r : rows) worst = std::max(worst, r.jump);
    return worst;
}

}  // namespace projifs
