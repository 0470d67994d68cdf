#pragma once

#include "projifs/semigroup.hpp"

#include <optional>
#include <string>
#include <vector>

namespace projifs {

// Arc of RP^1 starting at `start` and running counterclockwise for `length` (< pi).
// Treated as open or closed by the caller.
struct Arc {
    double start = kPi;
    double length = 0;

    double end() const { return start + length; }  // may exceed pi
    bool contains_open(ProjPoint p, double tol = 0) const;
    bool contains_closed(ProjPoint p, double tol = 0) const;
    ProjPoint midpoint() const { return ProjPoint(start + length / 2); }
};

Arc arc_between(ProjPoint from, ProjPoint to);  // counterclockwise from -> to
Arc arc_around(ProjPoint center, double radius);
// Image of an arc under an orientation-preserving projective map, by endpoint transport.
Arc image(const Matrix2& m, const Arc& arc);
// Distance between closed arcs; 0 when they meet.
double arc_dist(const Arc& a, const Arc& b);

inline constexpr double kMergeTol = 1e-9;

// Sorted union of arcs; arcs closer than tol are merged. A union covering the whole
// circle comes back as a single arc of length pi.
std::vector<Arc> merge_arcs(std::vector<Arc> arcs, double tol = kMergeTol);
double arcs_dist(const std::vector<Arc>& a, const std::vector<Arc>& b);

// Finite union of open arcs with disjoint closures and total length < pi.
class Multicone {
public:
    Multicone() = default;
    explicit Multicone(std::vector<Arc> arcs);  // merges, then validates

    const std::vector<Arc>& arcs() const { return arcs_; }
    bool contains(ProjPoint p) const;
    double total_length() const;
    double largest_component() const;
    // Open complement of the closure.
    Multicone complement() const;
    // Closed arcs phi_A(closure of each component) for every letter.
    std::vector<Arc> images(std::span<const Matrix2> alphabet) const;

private:
    std::vector<Arc> arcs_;
};

// Minimal clearance of the image arcs inside the multicone; negative if some image
// closure is not inside a single component.
double containment_clearance(const Multicone& cone, std::span<const Matrix2> alphabet);

enum class Containment { Compact, StrictOnly };
const char* to_string(Containment c);

struct ConeSearch {
    Multicone cone;
    Containment containment = Containment::Compact;
    double clearance = 0;
};

struct ConeSearchOptions {
    int depth = 8;
    double eps = 0.02;
    int closure_rounds = 64;
};

std::optional<ConeSearch> find_invariant_multicone(const SystemConfig& cfg, ConeSearchOptions opts = {});

class NotCompactlyContained : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct HyperbolicityCertificate {
    Multicone cone;
    double margin = 0;
    double lambda = 1;
    double c_uh = 0;
    double c_mult = 0;         // angle constant sin(h)^2 with h the certified u- clearance
    double c_directional = 0;  // sin of the gap between expanding outputs and contracted inputs
    double norm_threshold = 0;  // words longer than `depth` are taken to have norm at least this
    int depth = 0;
    // Best certified constant for |AB| >= c |A| |B| over the whole semigroup.
    double c_best() const { return std::max(c_mult, c_directional); }
};

HyperbolicityCertificate certify_uniform_hyperbolicity(const SystemConfig& cfg, const Multicone& cone,
                                                       int depth = 8);

enum class SemidiscreteVerdict { CertifiedViaInvariantSet, EvidenceOnly, RefutedViaIdentityApproach };
const char* to_string(SemidiscreteVerdict v);

struct SemidiscreteReport {
    SemidiscreteVerdict verdict = SemidiscreteVerdict::EvidenceOnly;
    std::optional<ConeSearch> cone;
    std::vector<DiscretenessRecord> profile;
    std::vector<std::string> notes;
};

SemidiscreteReport certify_semidiscrete(const SystemConfig& cfg, int depth = 8);

// c = sin(g)^2 with g the gap from closure(K') to the complement of K.
double almost_mult_constant(const Multicone& k, const Multicone& k_prime);

}  // namespace projifs
