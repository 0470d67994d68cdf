#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "generators.hpp"
#include "projifs/multicone.hpp"
#include "projifs/spectral.hpp"

#include <algorithm>
#include <cmath>

using namespace projifs;

namespace {

SystemConfig system_of(std::vector<Matrix2> letters, NormKind norm = NormKind::Operator2) {
    SystemConfig cfg;
    cfg.alphabet = std::move(letters);
    cfg.norm = norm;
    return cfg;
}

const Matrix2 kShear{1, 1, 0, 1};
const Matrix2 kLowerShear{1, 0, 1, 1};
const SystemConfig kDiagPair = system_of({diagonal(2), diagonal(3)});
const SystemConfig kPositivePair = system_of({Matrix2{2, 1, 1, 1}, Matrix2{1, 1, 1, 2}});

// Root of 4^-s + 9^-s = 1 by plain bisection on the closed form.
double diag_pair_root() {
    double lo = 0, hi = 1;
    while (hi - lo > 1e-12) {
        const double mid = (lo + hi) / 2;
        if (std::pow(4.0, -mid) + std::pow(9.0, -mid) > 1) lo = mid;
        else hi = mid;
    }
    return (lo + hi) / 2;
}

bool has_reason(const std::vector<LowerBoundReason>& rs, const std::string& reason, double bound) {
    return std::any_of(rs.begin(), rs.end(), [&](const auto& r) { return r.reason == reason && r.bound == bound; });
}

}  // namespace

TEST_CASE("closed-form oracle root") {
    // frozen value of the bisection above
    CHECK(std::abs(diag_pair_root() - 0.3939424555129348) < 1e-8);
}

TEST_CASE("partial zeta examples") {
    const ZetaSums z = partial_zeta(system_of({diagonal(2)}), 1, 3);
    CHECK(z.z_n == doctest::Approx(0.015625).epsilon(1e-14));
    CHECK(z.cumulative == doctest::Approx(0.328125).epsilon(1e-14));

    for (double s : {0.25, 0.5, 1.0}) {
        for (int n = 1; n <= 10; ++n) {
            double binomial = 0;  // sum_k C(n,k) 4^{-sk} 9^{-s(n-k)}
            double coef = 1;
            for (int k = 0; k <= n; ++k) {
                binomial += coef * std::pow(4.0, -s * k) * std::pow(9.0, -s * (n - k));
                coef = coef * (n - k) / (k + 1);
            }
            CHECK(partial_zeta(kDiagPair, s, n).z_n == doctest::Approx(binomial).epsilon(1e-12));
        }
    }

    // a single parabolic letter: |P^n|^-1 ~ 1/n, so the cumulative sum grows like log n
    const SystemConfig shear = system_of({kShear});
    for (int n : {50, 200, 1000}) CHECK(partial_zeta(shear, 0.5, n).z_n * n == doctest::Approx(1).epsilon(0.03));
    const double c100 = partial_zeta(shear, 0.5, 100).cumulative, c1000 = partial_zeta(shear, 0.5, 1000).cumulative;
    CHECK(c1000 - c100 == doctest::Approx(std::log(10.0)).epsilon(0.02));

    CHECK_THROWS_AS(partial_zeta(shear, -1, 2), std::invalid_argument);
}

TEST_CASE("norm table matches direct sums") {
    const NormTable table(kPositivePair, 10);
    for (double s : {0.2, 0.6, 1.3})
        for (int n = 1; n <= 10; ++n)
            CHECK(table.zeta(n, s) == doctest::Approx(partial_zeta(kPositivePair, s, n).z_n).epsilon(1e-13));
}

TEST_CASE("pressure examples") {
    const PressureEval one = pressure_bracket(system_of({diagonal(2)}), 1, 8, 1.0);
    CHECK(one.lower == doctest::Approx(0.25));
    CHECK(one.upper == doctest::Approx(0.25));

    const PressureEval half = pressure_bracket(kDiagPair, 0.5, 10, std::nullopt);
    CHECK(half.lower == doctest::Approx(5.0 / 6).epsilon(1e-12));
    CHECK(half.upper == kInfinity);

    const PressureEval zero = pressure_bracket(kPositivePair, 0, 6, std::nullopt);
    CHECK(zero.lower == doctest::Approx(2));
    CHECK(zero.upper == kInfinity);
    REQUIRE(zero.zn_roots.size() == 6);
    CHECK(zero.lower == *std::max_element(zero.zn_roots.begin(), zero.zn_roots.end()));

    CHECK_THROWS_AS(pressure_bracket(kPositivePair, 1, 4, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(pressure_bracket(kPositivePair, 1, 4, 1.5), std::invalid_argument);
}

TEST_CASE("critical exponent examples") {
    const Bracket single = critical_exponent_bracket(system_of({diagonal(2)}), 10, 1.0);
    CHECK(single.lo == 0);
    CHECK(single.hi <= 2e-4);

    const double root = diag_pair_root();
    const Bracket pair = critical_exponent_bracket(kDiagPair, 12, 1.0);
    CHECK(pair.lo <= root);
    CHECK(pair.hi >= root);
    CHECK(pair.hi - pair.lo <= 5e-3);
    CHECK(pair.certified);

    // reducible parabolic/hyperbolic system: the lower end passes 0.95 at depth 14
    const SystemConfig parabolic = system_of({diagonal(0.5), kShear});
    CHECK(critical_exponent_bracket(parabolic, 14, std::nullopt).lo >= 0.95);
    CHECK_FALSE(critical_exponent_bracket(parabolic, 14, std::nullopt).certified);
}

TEST_CASE("quick lower bounds") {
    const auto sb = quick_lower_bounds(system_of({kShear, kLowerShear}));
    CHECK(has_reason(sb, "parabolic-present", 0.5));
    const auto mixed = quick_lower_bounds(system_of({kShear, Matrix2{2, 1, 1, 1}}));
    CHECK(has_reason(mixed, "parabolic-present", 0.5));

    const auto nd = quick_lower_bounds(system_of({diagonal(2), Matrix2{0.25, 3.75, 0, 4}}), 10);
    CHECK(has_reason(nd, "non-discrete", kInfinity));

    CHECK(quick_lower_bounds(system_of({diagonal(2)})).empty());
}

TEST_CASE("supermultiplicativity of the partial sums") {
    testgen::Gen gen(31);
    std::vector<SystemConfig> systems{kPositivePair, system_of({kShear, kLowerShear})};
    for (int i = 0; i < 3; ++i) systems.push_back(system_of({gen.hyperbolic(), gen.hyperbolic()}));
    for (const auto& cfg : systems) {
        const NormTable table(cfg, 12);
        for (double s : {0.25, 0.5, 1.0})
            for (int l = 1; l <= 6; ++l)
                for (int m = 1; m <= 6; ++m)
                    CHECK(table.zeta(l + m, s) >= table.zeta(l, s) * table.zeta(m, s) * (1 - 1e-8));
    }
}

TEST_CASE("monotone in s") {
    const NormTable table(kPositivePair, 10);
    for (int n = 1; n <= 10; ++n)
        for (double s = 0.1; s < 2; s += 0.1) CHECK(table.zeta(n, s + 0.1) < table.zeta(n, s));
    double previous = kInfinity;
    for (double s = 0; s < 2; s += 0.05) {
        const double lower = pressure_bracket(table, s, std::nullopt).lower;
        CHECK(lower <= previous);
        previous = lower;
    }
}

TEST_CASE("critical exponent brackets agree across norms") {
    for (const SystemConfig& base : {kPositivePair, kDiagPair}) {
        SystemConfig op = base, mx = base;
        mx.norm = NormKind::MaxEntry;
        const auto cone = find_invariant_multicone(op);
        REQUIRE(cone);
        const double c = certify_uniform_hyperbolicity(op, cone->cone).c_best();
        // |A|_max >= |A|_2 / 2 for 2x2 matrices, so c / 2 works for the max norm
        const Bracket b2 = critical_exponent_bracket(op, 12, c);
        const Bracket bm = critical_exponent_bracket(mx, 12, c / 2);
        CHECK(std::max(b2.lo, bm.lo) <= std::min(b2.hi, bm.hi));
    }
}

TEST_CASE("Fekete submultiplicativity with a certified constant") {
    const auto cone = find_invariant_multicone(kPositivePair);
    REQUIRE(cone);
    const double c = certify_uniform_hyperbolicity(kPositivePair, cone->cone).c_best();
    const NormTable table(kPositivePair, 12);
    for (double s : {0.25, 0.5, 1.0}) {
        const double k = std::pow(c, -2 * s);
        for (int l = 1; l <= 6; ++l)
            for (int m = 1; m <= 6; ++m)
                CHECK(k * table.zeta(l + m, s) <= k * table.zeta(l, s) * k * table.zeta(m, s) * (1 + 1e-8));
    }
}
