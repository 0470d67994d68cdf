#pragma once

#include "projifs/attractor.hpp"
#include "projifs/spectral.hpp"

#include <optional>
#include <string>
#include <vector>

namespace projifs {

class NonConvergence : public std::runtime_error {
public:
    NonConvergence(std::size_t dropped, std::size_t requested);
    std::size_t dropped, requested;
};

// Empirical stationary measure: uniform weights on the sample points.
struct MeasureSample {
    std::vector<ProjPoint> points;  // in draw order
    std::uint64_t seed = 0;
    double tol = 0;
    std::size_t dropped = 0;
};

inline constexpr double kMaxDropRate = 0.01;

// Needs cfg.probs with every entry positive. Throws NonConvergence when more
// than 1% of the samples fail to converge.
MeasureSample sample_stationary(const SystemConfig& cfg, std::size_t n_samples, double tol, std::uint64_t seed,
                                long max_letters = OrbitOptions{}.max_letters);

inline constexpr int kStationarityBins = 64;

// max over 64 equal arcs E of |nu(E) - sum_i p_i nu(phi_i^-1 E)| for the empirical nu.
double stationarity_residual(const MeasureSample& sample, const SystemConfig& cfg);

struct SupportReport {
    double hausdorff = 0;  // sample closure vs attractor cloud
    std::optional<DimensionEstimate> sample_dimension;
    std::optional<DimensionEstimate> attractor_dimension;
    std::optional<Bracket> delta;
    std::vector<std::string> notes;
};

SupportReport support_dimension_report(const SystemConfig& cfg, const MeasureSample& sample,
                                       const PointCloud& attractor, std::optional<Bracket> delta = std::nullopt);

}  // namespace projifs
