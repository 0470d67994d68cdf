#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace projifs {

inline constexpr double kPi = 3.14159265358979323846;

// Unit-determinant 2x2 real matrix [[a, b], [c, d]].
struct Matrix2 {
    double a = 1, b = 0, c = 0, d = 1;

    static Matrix2 identity() { return {}; }
    // Builds a matrix and divides by sqrt(det). Throws on det <= 0 or non-finite entries.
    static Matrix2 normalized(double a, double b, double c, double d);

    double det() const { return a * d - b * c; }
    double trace() const { return a + d; }
    Matrix2 inverse() const { return {d, -b, -c, a}; }
    Matrix2 transpose() const { return {a, c, b, d}; }
    Matrix2 negated() const { return {-a, -b, -c, -d}; }
    double frobenius() const;

    friend bool operator==(const Matrix2&, const Matrix2&) = default;
};

// Product with determinant drift removed.
Matrix2 operator*(const Matrix2& lhs, const Matrix2& rhs);

Matrix2 rotation(double angle);
Matrix2 diagonal(double lambda);  // diag(lambda, 1/lambda)

// Same projective action: M or -M equal within tol entrywise.
bool projectively_equal(const Matrix2& m, const Matrix2& n, double tol);

enum class ClassTag { Identity, Elliptic, Parabolic, Hyperbolic };
const char* to_string(ClassTag tag);

inline constexpr double kParabolicTol = 1e-9;
ClassTag classify(const Matrix2& m, double tol = kParabolicTol);

enum class NormKind { Operator2, MaxEntry };
const char* to_string(NormKind kind);
NormKind parse_norm(const std::string& name);

double op_norm(const Matrix2& m, NormKind which = NormKind::Operator2);

// A point of RP^1 as an angle in (0, pi]; pi is the horizontal direction.
class ProjPoint {
public:
    ProjPoint() = default;
    explicit ProjPoint(double angle);  // reduces any finite angle into (0, pi]
    double theta() const { return theta_; }
    double x() const;  // cos(theta)
    double y() const;  // sin(theta)
    friend bool operator==(const ProjPoint&, const ProjPoint&) = default;

private:
    double theta_ = kPi;
};

// Angle of the direction (x, y), reduced into (0, pi].
ProjPoint direction(double x, double y);

// Distance on the circle of length pi.
double proj_dist(ProjPoint p, ProjPoint q);
// Signed offset q - p reduced into (-pi/2, pi/2].
double proj_offset(ProjPoint p, ProjPoint q);

ProjPoint proj_act(const Matrix2& m, ProjPoint x);
double proj_deriv(const Matrix2& m, ProjPoint x);

// Point of R u {infinity}.
struct ExtReal {
    double value = 0;
    bool infinite = false;
    static ExtReal inf() { return {0, true}; }
};

// Point of the closed upper half-plane u {infinity}.
struct ExtComplex {
    std::complex<double> value{};
    bool infinite = false;
    static ExtComplex inf() { return {{}, true}; }
};

ExtReal psi(ProjPoint x);
ProjPoint psi_inv(ExtReal y);
ExtReal mobius_act(const Matrix2& m, ExtReal x);
ExtComplex mobius_act(const Matrix2& m, ExtComplex z);

// Chordal distance on the Riemann sphere; finite for infinite points.
double chordal_dist(ExtReal x, ExtReal y);
double chordal_dist(ExtComplex z, ExtComplex w);

struct FixedPointData {
    ClassTag tag = ClassTag::Identity;
    std::optional<ProjPoint> attracting;
    std::optional<ProjPoint> repelling;
    std::optional<ProjPoint> parabolic_point;
    // (derivative at attracting, derivative at repelling) or (1, 1) for parabolic.
    std::optional<std::pair<double, double>> multipliers;
};

FixedPointData fixed_points(const Matrix2& m, double tol = kParabolicTol);

struct SingularDirections {
    ProjPoint u_minus;  // most contracted direction: |M u| = 1/||M||
    ProjPoint u_plus;   // most expanded direction
};

class DegenerateDirections : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

SingularDirections singular_directions(const Matrix2& m, double tol = 1e-9);

}  // namespace projifs
