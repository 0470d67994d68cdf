#pragma once

#include "projifs/attractor.hpp"
#include "projifs/config.hpp"
#include "projifs/multicone.hpp"
#include "projifs/spectral.hpp"
#include "projifs/subsystems.hpp"

#include <optional>
#include <string>
#include <vector>

namespace projifs {

// Largest depth whose words up to that length fit in max_words.
int depth_for_budget(std::size_t letters, double max_words, int cap = 64);

struct DimensionOptions {
    int cloud_depth = 14;
    int zeta_depth = 0;  // 0: as deep as 2^22 words allow
    double tolerance = 0.05;
};

struct DimensionReport {
    std::optional<DimensionEstimate> box;
    std::size_t cloud_points = 0;
    SemidiscreteVerdict semidiscrete = SemidiscreteVerdict::EvidenceOnly;
    std::optional<HyperbolicityCertificate> certificate;
    std::optional<Bracket> delta;
    std::vector<LowerBoundReason> quick;
    std::optional<ReducibleVerdict> reducible;
    double predicted_lo = 0, predicted_hi = 1;  // range for min(1, delta)
    std::string verdict;  // consistent / inconsistent / not-applicable / inconclusive
    std::vector<std::string> notes;
};

DimensionReport dimension_report(const SystemConfig& cfg, DimensionOptions opts = {});

struct ScanOptions {
    int depth = 12;
    double jump_flag = 0.2;
};

struct ScanRow {
    double t = 0;
    std::optional<double> dimension;
    double delta_lo = 0, delta_hi = kInfinity;
    std::string method;  // delta-lower or box
    std::string semidiscrete;
    double jump = 0;  // |dimension - previous dimension|
    bool flagged = false;
    std::string error;
};

std::vector<double> uniform_grid(double t0, double t1, int points);
std::vector<ScanRow> scan_continuity(const FamilyConfig& family, std::span<const double> grid, ScanOptions opts = {});
double max_jump(const std::vector<ScanRow>& rows);

}  // namespace projifs
