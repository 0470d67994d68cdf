#pragma once

// Hand-rolled generators for the property tests. Each test seeds its own Gen,
// so failures reproduce from the seed printed in the check message.

#include "projifs/geometry.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace testgen {

using projifs::Matrix2;

struct Gen {
    explicit Gen(std::uint64_t seed) : rng(seed) {}
    std::mt19937_64 rng;

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

    // Angle in (0, pi].
    projifs::ProjPoint point() { return projifs::ProjPoint(uniform(1e-6, projifs::kPi)); }

    // rotation * diag(l, 1/l) * rotation with l in [1, max_stretch].
    Matrix2 matrix(double max_stretch = 8) {
        const double l = uniform(1, max_stretch);
        return projifs::rotation(uniform(0, projifs::kPi)) * projifs::diagonal(l) *
               projifs::rotation(uniform(0, projifs::kPi));
    }

    Matrix2 hyperbolic(double min_trace = 2.2, double max_trace = 8) {
        for (;;) {
            const Matrix2 m = matrix(max_trace);
            const double t = std::abs(m.trace());
            if (t > min_trace && t < max_trace) return m;
        }
    }

    // Entrywise positive with unit determinant.
    Matrix2 positive() {
        for (;;) {
            const double a = uniform(0.2, 3), b = uniform(0.2, 3), c = uniform(0.2, 3);
            const double d = (1 + b * c) / a;
            if (d > 0.05 && d < 20) return {a, b, c, d};
        }
    }
};

}  // namespace testgen
