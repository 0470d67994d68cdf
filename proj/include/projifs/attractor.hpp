#pragma once

#include "projifs/semigroup.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace projifs {

enum class CloudMethod { FixedPoints, Orbit, Synthetic };
const char* to_string(CloudMethod m);

struct PointCloud {
    std::vector<ProjPoint> points;  // sorted ascending, near-duplicates merged
    CloudMethod method = CloudMethod::Synthetic;
    long depth_or_samples = 0;
    std::vector<std::string> notes;

    static PointCloud from_points(std::vector<ProjPoint> pts, CloudMethod method = CloudMethod::Synthetic,
                                  long depth_or_samples = 0);
    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

inline constexpr double kCloudMergeTol = 1e-12;

// Sorts and merges points closer than tol.
std::vector<ProjPoint> normalize_cloud(std::vector<ProjPoint> pts, double tol = kCloudMergeTol);

PointCloud attractor_points_fixedpoint(const SystemConfig& cfg, int depth, double budget = kDefaultWordBudget);
PointCloud repeller_points(const SystemConfig& cfg, int depth, double budget = kDefaultWordBudget);

// Seed for one batch of samples, derived from the master seed.
std::uint64_t batch_seed(std::uint64_t master, std::uint64_t batch);

struct OrbitOptions {
    long max_letters = 100000;        // per-sample iteration cap
    bool include_letter_limits = true;  // add the limits of eventually constant sequences
    bool use_probs = true;            // draw letters with cfg.probs when present
};

struct OrbitSample {
    std::vector<ProjPoint> points;  // in sample order
    std::size_t dropped = 0;        // samples that did not converge within the cap
};

// Limit of f_{A_{i1} ... A_{in}}(z) for random letter sequences, stopping when the
// chordal diameter of the images of i, 1+i, -1+i drops below tol.
OrbitSample orbit_limits(const SystemConfig& cfg, std::size_t n_samples, double tol, std::uint64_t seed,
                         OrbitOptions opts = {});
PointCloud attractor_points_orbit(const SystemConfig& cfg, std::size_t n_samples, double tol,
                                  std::uint64_t seed, OrbitOptions opts = {});

struct DimensionEstimate {
    double value = 0;
    double stderr_ = 0;
    std::vector<std::pair<double, std::size_t>> scales;  // (eps, occupied bins)
    double fit_eps_min = 0, fit_eps_max = 0;
    std::size_t fit_points = 0;
    std::string method = "box-counting";
};

class TooFewScales : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Scales where the cloud has fewer points than this per occupied box are left out of the fit.
inline constexpr double kMinPointsPerBox = 8;

std::vector<double> default_scales(int finest_power = 18);
std::size_t occupied_bins(const PointCloud& cloud, double eps);
DimensionEstimate box_dimension(const PointCloud& cloud, std::span<const double> scales);
DimensionEstimate box_dimension(const PointCloud& cloud);

struct Separation {
    bool disjoint = true;
    double gap = 0;
    ProjPoint k_witness, r_witness;  // closest pair
};

Separation separation_report(const PointCloud& k, const PointCloud& r, double eps);

// Distance from p to the nearest point of a sorted cloud, on the circle.
double distance_to_cloud(ProjPoint p, const std::vector<ProjPoint>& sorted);
double directed_hausdorff(const std::vector<ProjPoint>& from, const std::vector<ProjPoint>& to_sorted);
double hausdorff_distance(const PointCloud& a, const PointCloud& b);

double invariance_residual(const SystemConfig& cfg, const PointCloud& k);

// Synthetic clouds for calibration.
PointCloud cantor_cloud(int level, double lo, double hi);
PointCloud interval_cloud(std::size_t n, double lo, double hi);

}  // namespace projifs
