#pragma once

#include "projifs/semigroup.hpp"

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace projifs {

class ParseError : public std::runtime_error {
public:
    ParseError(std::string source, int line, int column, const std::string& message);
    std::string source;
    int line, column;
};

// Decimal or exact fraction "p/q".
double parse_number(std::string_view token);

// c0 + c1 t
struct Affine {
    double constant = 0;
    double slope = 0;
    double at(double t) const { return constant + slope * t; }
    friend bool operator==(const Affine&, const Affine&) = default;
};

// Number, or an affine expression in t without spaces: "t", "-t/2", "2+t", "1-0.5*t".
Affine parse_affine(std::string_view token);

struct FamilyConfig {
    std::vector<std::array<Affine, 4>> rows;
    std::optional<std::vector<double>> probs;
    NormKind norm = NormKind::Operator2;
    int depth_cap = 12;
    std::uint64_t seed = 1;

    bool constant() const;
    // Entries evaluated at t; every row renormalized to determinant 1.
    SystemConfig at(double t) const;
};

struct ParsedConfig {
    SystemConfig config;
    std::vector<std::string> warnings;
};

// Text format, one key per line, '#' comments:
//   matrices:        followed by rows "a b c d" (row-major) on the next lines
//   probs: p1 p2 ...
//   norm: op2 | max
//   depth_cap: 12
//   seed: 1
ParsedConfig parse_config_text(std::string_view text, const std::string& source = "<text>");
ParsedConfig parse_config(const std::filesystem::path& path);
FamilyConfig parse_family_text(std::string_view text, const std::string& source = "<text>");
FamilyConfig parse_family(const std::filesystem::path& path);

// Exact round trip through parse_config_text.
std::string emit_config(const SystemConfig& cfg);

inline constexpr double kDetTol = 1e-9;

}  // namespace projifs
