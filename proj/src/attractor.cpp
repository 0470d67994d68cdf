#include "projifs/attractor.hpp"

#include "projifs/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace projifs {

const char* to_string(CloudMethod m) {
    switch (m) {
        case CloudMethod::FixedPoints: return "fixed-points";
        case CloudMethod::Orbit: return "orbit";
        case CloudMethod::Synthetic: return "synthetic";
    }
    return "?";
}

std::vector<ProjPoint> normalize_cloud(std::vector<ProjPoint> pts, double tol) {
    std::sort(pts.begin(), pts.end(), [](ProjPoint l, ProjPoint r) { return l.theta() < r.theta(); });
    std::vector<ProjPoint> out;
    out.reserve(pts.size());
    for (auto p : pts)
        if (out.empty() || p.theta() - out.back().theta() > tol) out.push_back(p);
    // 0+ and pi are neighbours
    while (out.size() > 1 && out.front().theta() + kPi - out.back().theta() <= tol) out.erase(out.begin());
    return out;
}

PointCloud PointCloud::from_points(std::vector<ProjPoint> pts, CloudMethod method, long depth_or_samples) {
    PointCloud c;
    c.points = normalize_cloud(std::move(pts));
    c.method = method;
    c.depth_or_samples = depth_or_samples;
    return c;
}

PointCloud attractor_points_fixedpoint(const SystemConfig& cfg, int depth, double budget) {
    cfg.validate();
    if (depth < 1) throw std::invalid_argument("depth must be at least 1");
    struct Acc {
        std::vector<ProjPoint> points;
        std::vector<ProjPoint> parabolic;
        std::size_t elliptic = 0;
    };
    auto parts = partitioned_walk<Acc>(
        cfg.alphabet, 1, depth,
        [](Acc& acc, std::span<const Letter>, const Matrix2& m) {
            const FixedPointData fp = fixed_points(m);
            if (fp.attracting) {
                acc.points.push_back(*fp.attracting);
            } else if (fp.parabolic_point) {
                acc.points.push_back(*fp.parabolic_point);
                acc.parabolic.push_back(*fp.parabolic_point);
            } else {
                ++acc.elliptic;
            }
        },
        budget);
    std::vector<ProjPoint> all, parabolic;
    std::size_t elliptic = 0;
    for (auto& p : parts) {
        all.insert(all.end(), p.points.begin(), p.points.end());
        parabolic.insert(parabolic.end(), p.parabolic.begin(), p.parabolic.end());
        elliptic += p.elliptic;
    }
    // phi_W(p) for a parabolic point p of P is the limit of the attracting points of W P^k
    parabolic = normalize_cloud(std::move(parabolic), 1e-9);
    if (!parabolic.empty() && depth > 1) {
        auto images = partitioned_walk<std::vector<ProjPoint>>(
            cfg.alphabet, 1, depth - 1,
            [&](std::vector<ProjPoint>& acc, std::span<const Letter>, const Matrix2& m) {
                for (auto p : parabolic) acc.push_back(proj_act(m, p));
            },
            budget);
        for (auto& part : images) all.insert(all.end(), part.begin(), part.end());
    }
    PointCloud cloud = PointCloud::from_points(std::move(all), CloudMethod::FixedPoints, depth);
    if (elliptic > 0)
        cloud.notes.push_back(std::to_string(elliptic) +
                              " elliptic or identity words contributed no point; the system is not semidiscrete");
    return cloud;
}

PointCloud repeller_points(const SystemConfig& cfg, int depth, double budget) {
    return attractor_points_fixedpoint(with_alphabet(cfg, inverted(cfg.alphabet)), depth, budget);
}

std::uint64_t batch_seed(std::uint64_t master, std::uint64_t batch) {
    // splitmix64 finalizer over (master, batch)
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (batch + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

constexpr std::size_t kBatch = 256;

// Letter sampler on top of mt19937_64 with a fixed, library-independent mapping.
class LetterDraw {
public:
    LetterDraw(std::size_t letters, const std::optional<std::vector<double>>& probs) {
        cumulative_.resize(letters);
        double acc = 0;
        for (std::size_t i = 0; i < letters; ++i) {
            acc += probs ? (*probs)[i] : 1.0 / static_cast<double>(letters);
            cumulative_[i] = acc;
        }
        cumulative_.back() = 1.0;
    }
    Letter operator()(std::mt19937_64& rng) const {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        return static_cast<Letter>(std::min<std::size_t>(it - cumulative_.begin(), cumulative_.size() - 1));
    }

private:
    std::vector<double> cumulative_;
};

// Most expanded output direction of p: the boundary point the shrinking image disk converges to.
ProjPoint top_output(const Matrix2& p) {
    const double x = p.a * p.a + p.b * p.b, z = p.c * p.c + p.d * p.d, y = p.a * p.c + p.b * p.d;
    const double mu = 0.5 * (x + z) + std::hypot(0.5 * (x - z), y);
    return x >= z ? direction(mu - z, y) : direction(y, mu - x);
}

std::optional<ProjPoint> orbit_limit(std::span<const Matrix2> alphabet, const LetterDraw& draw,
                                     std::mt19937_64& rng, double tol, long cap) {
    static const ExtComplex refs[3] = {{{0, 1}}, {{1, 1}}, {{-1, 1}}};
    Matrix2 p;
    for (long step = 0; step < cap; ++step) {
        p = p * alphabet[draw(rng)];
        const ExtComplex z0 = mobius_act(p, refs[0]);
        const ExtComplex z1 = mobius_act(p, refs[1]);
        const ExtComplex z2 = mobius_act(p, refs[2]);
        const double diam = std::max({chordal_dist(z0, z1), chordal_dist(z0, z2), chordal_dist(z1, z2)});
        if (diam < tol) return top_output(p);
    }
    return std::nullopt;
}

}  // namespace

OrbitSample orbit_limits(const SystemConfig& cfg, std::size_t n_samples, double tol, std::uint64_t seed,
                         OrbitOptions opts) {
    cfg.validate();
    if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
    const LetterDraw draw(cfg.size(), opts.use_probs ? cfg.probs : std::nullopt);
    const std::size_t batches = (n_samples + kBatch - 1) / kBatch;
    struct BatchOut {
        std::vector<ProjPoint> points;
        std::size_t dropped = 0;
    };
    std::vector<BatchOut> out(batches);
    parallel_for(batches, [&](std::size_t b) {
        std::mt19937_64 rng(batch_seed(seed, b));
        const std::size_t count = std::min(kBatch, n_samples - b * kBatch);
        for (std::size_t i = 0; i < count; ++i) {
            if (auto p = orbit_limit(cfg.alphabet, draw, rng, tol, opts.max_letters)) out[b].points.push_back(*p);
            else ++out[b].dropped;
        }
    });
    OrbitSample sample;
    sample.points.reserve(n_samples);
    for (auto& b : out) {
        sample.points.insert(sample.points.end(), b.points.begin(), b.points.end());
        sample.dropped += b.dropped;
    }
    return sample;
}

PointCloud attractor_points_orbit(const SystemConfig& cfg, std::size_t n_samples, double tol, std::uint64_t seed,
                                  OrbitOptions opts) {
    OrbitSample sample = orbit_limits(cfg, n_samples, tol, seed, opts);
    std::vector<ProjPoint> pts = std::move(sample.points);
    if (opts.include_letter_limits) {
        // exact limits of the eventually constant sequences W a a a ..., with as many
        // prefixes W as there are random samples
        std::vector<ProjPoint> tails;
        for (const auto& m : cfg.alphabet) {
            const FixedPointData fp = fixed_points(m);
            if (fp.attracting) tails.push_back(*fp.attracting);
            else if (fp.parabolic_point) tails.push_back(*fp.parabolic_point);
        }
        pts.insert(pts.end(), tails.begin(), tails.end());
        int len = 0;
        while (word_count(cfg.size(), 1, len + 1) <= static_cast<double>(n_samples)) ++len;
        if (len > 0)
            walk_words(cfg.alphabet, {}, 1, len, [&](std::span<const Letter>, const Matrix2& m) {
                for (auto q : tails) pts.push_back(proj_act(m, q));
            });
    }
    PointCloud cloud = PointCloud::from_points(std::move(pts), CloudMethod::Orbit, static_cast<long>(n_samples));
    if (sample.dropped > 0)
        cloud.notes.push_back(std::to_string(sample.dropped) + " samples did not converge and were dropped");
    return cloud;
}

std::vector<double> default_scales(int finest_power) {
    std::vector<double> out;
    for (int k = 2; k <= finest_power; ++k) out.push_back(kPi / std::ldexp(1.0, k));
    return out;
}

std::size_t occupied_bins(const PointCloud& cloud, double eps) {
    // bin j holds ((j) eps, (j + 1) eps]; ties go to the lower bin
    std::size_t count = 0;
    long long last = -1;
    for (auto p : cloud.points) {
        const auto bin = static_cast<long long>(std::ceil(p.theta() / eps)) - 1;
        if (bin != last) {
            ++count;
            last = bin;
        }
    }
    return count;
}

DimensionEstimate box_dimension(const PointCloud& cloud, std::span<const double> scales) {
    DimensionEstimate est;
    if (scales.size() < 4) throw TooFewScales("box counting needs at least 4 scales");
    if (cloud.size() <= 1) return est;

    std::vector<double> xs, ys;
    for (double eps : scales) {
        if (!(eps > 0 && eps <= kPi)) throw std::invalid_argument("scales must lie in (0, pi]");
        const std::size_t n = occupied_bins(cloud, eps);
        est.scales.emplace_back(eps, n);
        const double bins = std::ceil(kPi / eps);
        const double saturation = std::min(static_cast<double>(cloud.size()), bins);
        const bool undersampled = static_cast<double>(cloud.size()) < kMinPointsPerBox * static_cast<double>(n);
        if (n < 10 || static_cast<double>(n) >= 0.95 * saturation || undersampled) continue;
        xs.push_back(std::log(1 / eps));
        ys.push_back(std::log(static_cast<double>(n)));
        est.fit_eps_min = est.fit_points == 0 ? eps : std::min(est.fit_eps_min, eps);
        est.fit_eps_max = std::max(est.fit_eps_max, eps);
        ++est.fit_points;
    }
    if (est.fit_points < 4)
        throw TooFewScales("only " + std::to_string(est.fit_points) +
                           " scales fall between the sparse and saturated regimes");
    const LineFit fit = fit_line(xs, ys);
    est.value = std::clamp(fit.slope, 0.0, 1.0);
    est.stderr_ = fit.slope_stderr;
    return est;
}

DimensionEstimate box_dimension(const PointCloud& cloud) {
    const auto scales = default_scales();
    return box_dimension(cloud, scales);
}

namespace {

// Index of a nearest point of a sorted non-empty cloud.
std::size_t nearest_index(ProjPoint p, const std::vector<ProjPoint>& sorted) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), p.theta(),
                                     [](ProjPoint q, double t) { return q.theta() < t; });
    const std::size_t hi = static_cast<std::size_t>(it - sorted.begin()) % sorted.size();
    const std::size_t lo = (hi + sorted.size() - 1) % sorted.size();
    return proj_dist(p, sorted[lo]) <= proj_dist(p, sorted[hi]) ? lo : hi;
}

}  // namespace

double distance_to_cloud(ProjPoint p, const std::vector<ProjPoint>& sorted) {
    if (sorted.empty()) throw std::invalid_argument("empty cloud");
    return proj_dist(p, sorted[nearest_index(p, sorted)]);
}

double directed_hausdorff(const std::vector<ProjPoint>& from, const std::vector<ProjPoint>& to_sorted) {
    double worst = 0;
    for (auto p : from) worst = std::max(worst, distance_to_cloud(p, to_sorted));
    return worst;
}

double hausdorff_distance(const PointCloud& a, const PointCloud& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("empty cloud");
    return std::max(directed_hausdorff(a.points, b.points), directed_hausdorff(b.points, a.points));
}

Separation separation_report(const PointCloud& k, const PointCloud& r, double eps) {
    if (k.empty() || r.empty()) throw std::invalid_argument("empty cloud");
    Separation sep;
    sep.gap = kPi;
    for (auto p : k.points) {
        const ProjPoint q = r.points[nearest_index(p, r.points)];
        const double d = proj_dist(p, q);
        if (d < sep.gap) {
            sep.gap = d;
            sep.k_witness = p;
            sep.r_witness = q;
        }
    }
    sep.disjoint = sep.gap > eps;
    return sep;
}

double invariance_residual(const SystemConfig& cfg, const PointCloud& k) {
    cfg.validate();
    if (k.empty()) throw std::invalid_argument("empty cloud");
    std::vector<ProjPoint> img;
    img.reserve(k.size() * cfg.size());
    for (const auto& m : cfg.alphabet)
        for (auto p : k.points) img.push_back(proj_act(m, p));
    const PointCloud image = PointCloud::from_points(std::move(img));
    return hausdorff_distance(k, image);
}

PointCloud cantor_cloud(int level, double lo, double hi) {
    std::vector<double> left{0.0};
    double width = 1;
    for (int l = 0; l < level; ++l) {
        width /= 3;
        std::vector<double> next;
        next.reserve(2 * left.size());
        for (double x : left) {
            next.push_back(x);
            next.push_back(x + 2 * width);
        }
        left = std::move(next);
    }
    std::vector<ProjPoint> pts;
    pts.reserve(left.size());
    for (double x : left) pts.emplace_back(lo + (hi - lo) * x);
    return PointCloud::from_points(std::move(pts));
}

PointCloud interval_cloud(std::size_t n, double lo, double hi) {
    std::vector<ProjPoint> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        pts.emplace_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    return PointCloud::from_points(std::move(pts));
}

}  // namespace projifs
