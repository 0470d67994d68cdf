#include "projifs/furstenberg.hpp"

#include <algorithm>
#include <cmath>

namespace projifs {

NonConvergence::NonConvergence(std::size_t dropped, std::size_t requested)
    : std::runtime_error(std::to_string(dropped) + " of " + std::to_string(requested) +
                         " samples did not converge; the system may not be semidiscrete"),
      dropped(dropped),
      requested(requested) {}

MeasureSample sample_stationary(const SystemConfig& cfg, std::size_t n_samples, double tol, std::uint64_t seed,
                                long max_letters) {
    cfg.validate();
    if (!cfg.probs) throw std::invalid_argument("sampling needs a probability vector");
    for (double p : *cfg.probs)
        if (!(p > 0)) throw std::invalid_argument("every probability must be positive");
    OrbitOptions opts;
    opts.max_letters = max_letters;
    opts.include_letter_limits = false;
    OrbitSample raw = orbit_limits(cfg, n_samples, tol, seed, opts);
    if (static_cast<double>(raw.dropped) > kMaxDropRate * static_cast<double>(n_samples))
        throw NonConvergence(raw.dropped, n_samples);
    MeasureSample out;
    out.points = std::move(raw.points);
    out.seed = seed;
    out.tol = tol;
    out.dropped = raw.dropped;
    return out;
}

namespace {

std::size_t bin_of(ProjPoint p) {
    const auto b = static_cast<long>(std::ceil(p.theta() / (kPi / kStationarityBins))) - 1;
    return static_cast<std::size_t>(std::clamp<long>(b, 0, kStationarityBins - 1));
}

}  // namespace

double stationarity_residual(const MeasureSample& sample, const SystemConfig& cfg) {
    cfg.validate();
    if (sample.points.empty()) throw std::invalid_argument("empty sample");
    const std::size_t n = cfg.size();
    std::vector<double> probs = cfg.probs ? *cfg.probs : std::vector<double>(n, 1.0 / static_cast<double>(n));
    const double w = 1.0 / static_cast<double>(sample.points.size());

    std::vector<double> direct(kStationarityBins, 0.0), pushed(kStationarityBins, 0.0);
    for (auto p : sample.points) {
        direct[bin_of(p)] += w;
        // x lies in phi_i^-1(E) exactly when phi_i(x) lies in E
        for (std::size_t i = 0; i < n; ++i) pushed[bin_of(proj_act(cfg.alphabet[i], p))] += probs[i] * w;
    }
    double worst = 0;
    for (int j = 0; j < kStationarityBins; ++j) worst = std::max(worst, std::abs(direct[j] - pushed[j]));
    return worst;
}

SupportReport support_dimension_report(const SystemConfig& cfg, const MeasureSample& sample,
                                       const PointCloud& attractor, std::optional<Bracket> delta) {
    SupportReport rep;
    const PointCloud closure = PointCloud::from_points(sample.points, CloudMethod::Orbit,
                                                       static_cast<long>(sample.points.size()));
    rep.hausdorff = hausdorff_distance(closure, attractor);
    auto estimate = [&](const PointCloud& c, const char* what) -> std::optional<DimensionEstimate> {
        try {
            return box_dimension(c);
        } catch (const TooFewScales& e) {
            rep.notes.push_back(std::string(what) + ": " + e.what());
            return std::nullopt;
        }
    };
    rep.sample_dimension = estimate(closure, "sample");
    rep.attractor_dimension = estimate(attractor, "attractor");
    rep.delta = std::move(delta);
    if (cfg.size() > 1 && common_fixed_point(cfg))
        rep.notes.push_back("hypotheses of the support formula unmet (irreducibility)");
    return rep;
}

}  // namespace projifs
