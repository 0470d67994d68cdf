#include "projifs/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace projifs {

Matrix2 Matrix2::normalized(double a, double b, double c, double d) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d))
        throw std::invalid_argument("matrix entries must be finite");
    const double det = a * d - b * c;
    if (!(det > 0)) throw std::invalid_argument("matrix determinant must be positive");
    const double s = std::sqrt(det);
    return {a / s, b / s, c / s, d / s};
}

double Matrix2::frobenius() const { return std::sqrt(a * a + b * b + c * c + d * d); }

Matrix2 operator*(const Matrix2& l, const Matrix2& r) {
    Matrix2 p{l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
              l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
    const double det = p.det();
    // a d - b c loses about eps (|a d| + |b c|) to cancellation; below that level the
    // drift cannot be measured and rescaling would only inject noise
    const double noise = 64 * std::numeric_limits<double>::epsilon() * (std::abs(p.a * p.d) + std::abs(p.b * p.c));
    if (std::abs(det - 1.0) > std::max(1e-12, noise) && det > 0) {
        const double s = std::sqrt(det);
        p = {p.a / s, p.b / s, p.c / s, p.d / s};
    }
    return p;
}

Matrix2 rotation(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c, -s, s, c};
}

Matrix2 diagonal(double lambda) { return {lambda, 0, 0, 1.0 / lambda}; }

bool projectively_equal(const Matrix2& m, const Matrix2& n, double tol) {
    auto close = [tol](const Matrix2& p, const Matrix2& q) {
        return std::abs(p.a - q.a) <= tol && std::abs(p.b - q.b) <= tol &&
               std::abs(p.c - q.c) <= tol && std::abs(p.d - q.d) <= tol;
    };
    return close(m, n) || close(m, n.negated());
}

const char* to_string(ClassTag tag) {
    switch (tag) {
        case ClassTag::Identity: return "identity";
        case ClassTag::Elliptic: return "elliptic";
        case ClassTag::Parabolic: return "parabolic";
        case ClassTag::Hyperbolic: return "hyperbolic";
    }
    return "?";
}

ClassTag classify(const Matrix2& m, double tol) {
    if (projectively_equal(m, Matrix2::identity(), tol)) return ClassTag::Identity;
    const double t = std::abs(m.trace());
    if (std::abs(t - 2.0) <= tol) return ClassTag::Parabolic;
    return t < 2.0 ? ClassTag::Elliptic : ClassTag::Hyperbolic;
}

const char* to_string(NormKind kind) { return kind == NormKind::Operator2 ? "op2" : "max"; }

NormKind parse_norm(const std::string& name) {
    if (name == "op2" || name == "Operator2") return NormKind::Operator2;
    if (name == "max" || name == "MaxEntry") return NormKind::MaxEntry;
    throw std::invalid_argument("unknown norm '" + name + "' (expected op2 or max)");
}

double op_norm(const Matrix2& m, NormKind which) {
    if (which == NormKind::MaxEntry)
        return std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)});
    // sigma1^2 + sigma2^2 = |M|_F^2 and sigma1 * sigma2 = |det|.
    const double f2 = m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d;
    const double det = std::abs(m.det());
    const double disc = std::sqrt(std::max(0.0, (f2 - 2 * det) * (f2 + 2 * det)));
    return std::sqrt((f2 + disc) / 2);
}

ProjPoint::ProjPoint(double angle) {
    double t = std::fmod(angle, kPi);
    if (t <= 0) t += kPi;
    if (t > kPi) t = kPi;
    theta_ = t;
}

// exact on the axes: sin(pi) = 1.2e-16 would otherwise be amplified by long products
double ProjPoint::x() const { return theta_ == kPi ? -1.0 : theta_ == kPi / 2 ? 0.0 : std::cos(theta_); }
double ProjPoint::y() const { return theta_ == kPi ? 0.0 : theta_ == kPi / 2 ? 1.0 : std::sin(theta_); }

ProjPoint direction(double x, double y) {
    if (x == 0 && y == 0) throw std::invalid_argument("zero vector has no direction");
    return ProjPoint(std::atan2(y, x));
}

double proj_dist(ProjPoint p, ProjPoint q) {
    const double d = std::abs(p.theta() - q.theta());
    return std::min(d, kPi - d);
}

double proj_offset(ProjPoint p, ProjPoint q) {
    double d = q.theta() - p.theta();
    if (d > kPi / 2) d -= kPi;
    else if (d <= -kPi / 2) d += kPi;
    return d;
}

ProjPoint proj_act(const Matrix2& m, ProjPoint p) {
    const double x = p.x(), y = p.y();
    return direction(m.a * x + m.b * y, m.c * x + m.d * y);
}

double proj_deriv(const Matrix2& m, ProjPoint p) {
    const double x = p.x(), y = p.y();
    const double u = m.a * x + m.b * y, v = m.c * x + m.d * y;
    return std::abs(m.det()) / (u * u + v * v);
}

ExtReal psi(ProjPoint p) {
    if (p.theta() == kPi) return ExtReal::inf();
    return {std::cos(p.theta()) / std::sin(p.theta()), false};
}

ProjPoint psi_inv(ExtReal y) {
    if (y.infinite) return ProjPoint(kPi);
    // cot(theta) = y  <=>  direction (y, 1)
    return direction(y.value, 1.0);
}

ExtReal mobius_act(const Matrix2& m, ExtReal x) {
    if (x.infinite) {
        if (m.c == 0) return ExtReal::inf();
        return {m.a / m.c, false};
    }
    const double den = m.c * x.value + m.d;
    if (den == 0) return ExtReal::inf();
    return {(m.a * x.value + m.b) / den, false};
}

ExtComplex mobius_act(const Matrix2& m, ExtComplex z) {
    if (z.infinite) {
        if (m.c == 0) return ExtComplex::inf();
        return {m.a / m.c, false};
    }
    const std::complex<double> den = m.c * z.value + m.d;
    if (den == 0.0) return ExtComplex::inf();
    return {(m.a * z.value + m.b) / den, false};
}

double chordal_dist(ExtComplex z, ExtComplex w) {
    if (z.infinite && w.infinite) return 0;
    if (z.infinite) std::swap(z, w);
    if (w.infinite) return 2.0 / std::sqrt(1 + std::norm(z.value));
    return 2.0 * std::abs(z.value - w.value) /
           std::sqrt((1 + std::norm(z.value)) * (1 + std::norm(w.value)));
}

double chordal_dist(ExtReal x, ExtReal y) {
    return chordal_dist(ExtComplex{x.value, x.infinite}, ExtComplex{y.value, y.infinite});
}

FixedPointData fixed_points(const Matrix2& m, double tol) {
    FixedPointData out;
    out.tag = classify(m, tol);
    if (out.tag == ClassTag::Identity || out.tag == ClassTag::Elliptic) return out;

    // Normalize sign so the trace is positive; the projective action is unchanged.
    const Matrix2 n = m.trace() < 0 ? m.negated() : m;
    if (out.tag == ClassTag::Parabolic) {
        // Kernel of N - I: rows (a-1, b) and (c, d-1); use the larger row.
        const double r1 = std::hypot(n.a - 1, n.b), r2 = std::hypot(n.c, n.d - 1);
        const ProjPoint p = r1 >= r2 ? direction(-n.b, n.a - 1) : direction(1 - n.d, n.c);
        out.parabolic_point = p;
        out.multipliers = {1.0, 1.0};
        return out;
    }
    const double tr = n.trace();
    const double disc = std::sqrt(tr * tr - 4);
    double big = (tr + disc) / 2;
    double small = 1.0 / big;
    auto eigvec = [&n](double lambda) {
        const double r1 = std::hypot(n.a - lambda, n.b), r2 = std::hypot(n.c, n.d - lambda);
        return r1 >= r2 ? direction(-n.b, n.a - lambda) : direction(lambda - n.d, n.c);
    };
    const ProjPoint pa = eigvec(big), pr = eigvec(small);
    out.attracting = pa;
    out.repelling = pr;
    out.multipliers = {proj_deriv(m, pa), proj_deriv(m, pr)};
    return out;
}

SingularDirections singular_directions(const Matrix2& m, double tol) {
    const double sigma = op_norm(m);
    if (sigma - 1.0 <= tol) throw DegenerateDirections("singular directions degenerate: ||M|| = 1");
    // Symmetric P = M^T M = [[p, q], [q, r]].
    const double p = m.a * m.a + m.c * m.c;
    const double q = m.a * m.b + m.c * m.d;
    const double r = m.b * m.b + m.d * m.d;
    const double lo = 1.0 / (sigma * sigma) * std::abs(m.det());
    auto eigvec = [&](double lambda) {
        const double r1 = std::hypot(p - lambda, q), r2 = std::hypot(q, r - lambda);
        return r1 >= r2 ? direction(-q, p - lambda) : direction(lambda - r, q);
    };
    const ProjPoint minus = eigvec(lo);
    return {minus, ProjPoint(minus.theta() + kPi / 2)};
}

}  // namespace projifs
