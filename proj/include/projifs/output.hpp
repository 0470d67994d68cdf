#pragma once

#include "projifs/geometry.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace projifs {

// Fixed-format real for CSV cells: %.12g, "inf" for infinity.
std::string csv_real(double v);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);
    void add(std::vector<std::string> row);  // throws on a column-count mismatch
    void write(std::ostream& out) const;
    std::size_t rows() const { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Points of RP^1 drawn as radial ticks on the unit circle at angle 2 theta.
std::string svg_circle_ticks(const std::vector<ProjPoint>& points, const std::string& title);
std::string svg_line_plot(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& x_label,
                          const std::string& y_label);

struct RunManifest {
    std::string config_path;
    std::string command;
    std::vector<std::string> argv;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::string version;
    std::uint64_t seed = 0;
    double wall_seconds = 0;
    std::vector<std::string> outputs;
};

void write_manifest(const RunManifest& m, const std::filesystem::path& path);

}  // namespace projifs
