#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace projifs {

// Neumaier's compensated sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) comp_ += (sum_ - t) + x;
        else comp_ += (x - t) + sum_;
        sum_ = t;
    }
    void add(const CompensatedSum& other) {
        add(other.sum_);
        add(other.comp_);
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0;
    double comp_ = 0;
};

struct LineFit {
    double slope = 0;
    double intercept = 0;
    double slope_stderr = 0;
};

// Ordinary least squares y = intercept + slope * x. Needs at least two distinct x.
LineFit fit_line(std::span<const double> xs, std::span<const double> ys);

}  // namespace projifs
