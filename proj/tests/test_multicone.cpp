#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "generators.hpp"
#include "projifs/multicone.hpp"

#include <cmath>

using namespace projifs;

namespace {

SystemConfig system_of(std::vector<Matrix2> letters) {
    SystemConfig cfg;
    cfg.alphabet = std::move(letters);
    return cfg;
}

const SystemConfig kPositivePair = system_of({Matrix2{2, 1, 1, 1}, Matrix2{1, 1, 1, 2}});
const SystemConfig kParabolicPair = system_of({diagonal(0.5), Matrix2{1, 1, 0, 1}});

std::vector<std::pair<Matrix2, double>> words_with_norms(const SystemConfig& cfg, int depth) {
    std::vector<std::pair<Matrix2, double>> out;
    for (int n = 1; n <= depth; ++n)
        enumerate_words(cfg, n, [&](const Word&, const Matrix2& m) { out.push_back({m, op_norm(m)}); });
    return out;
}

}  // namespace

TEST_CASE("arcs") {
    const Arc a{0.5, 1.0};
    CHECK(a.contains_open(ProjPoint(1.0)));
    CHECK_FALSE(a.contains_open(ProjPoint(0.5)));
    CHECK(a.contains_closed(ProjPoint(0.5)));
    const Arc wrap{3.0, 0.5};  // runs past pi back to 0.358
    CHECK(wrap.contains_open(ProjPoint(0.2)));
    CHECK(wrap.contains_open(ProjPoint(3.1)));
    CHECK_FALSE(wrap.contains_open(ProjPoint(1.0)));

    CHECK(arc_dist(Arc{0.1, 0.2}, Arc{0.5, 0.2}) == doctest::Approx(0.2));
    CHECK(arc_dist(Arc{0.1, 0.5}, Arc{0.5, 0.2}) == 0);
    CHECK(arc_dist(Arc{3.0, 0.1}, Arc{0.1, 0.1}) == doctest::Approx(0.1 + (kPi - 3.1)));

    const Arc img = image(diagonal(2), Arc{kPi / 4, kPi / 4});
    CHECK(img.start == doctest::Approx(std::atan(0.25)));
    CHECK(img.end() == doctest::Approx(kPi / 2));
}

TEST_CASE("merging and multicone invariants") {
    const auto merged = merge_arcs({{0.1, 0.2}, {0.25, 0.2}, {1.0, 0.1}});
    REQUIRE(merged.size() == 2);
    CHECK(merged[0].start == doctest::Approx(0.1));
    CHECK(merged[0].length == doctest::Approx(0.35));

    const Multicone cone({{0.2, 0.3}, {1.5, 0.4}});
    CHECK(cone.total_length() == doctest::Approx(0.7));
    CHECK(cone.largest_component() == doctest::Approx(0.4));
    CHECK(cone.contains(ProjPoint(0.3)));
    CHECK_FALSE(cone.contains(ProjPoint(1.0)));
    const Multicone comp = cone.complement();
    CHECK(comp.total_length() == doctest::Approx(kPi - 0.7));
    CHECK(comp.contains(ProjPoint(1.0)));
    CHECK_FALSE(comp.contains(ProjPoint(0.3)));
    CHECK_THROWS_AS(Multicone({{0.1, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(Multicone({{0.1, 2.0}, {2.0, 1.5}}), std::invalid_argument);

    testgen::Gen gen(3);
    for (int i = 0; i < 200; ++i) {
        std::vector<Arc> arcs;
        for (int k = 0; k < 4; ++k) arcs.push_back({gen.uniform(0.01, kPi), gen.uniform(0.01, 0.3)});
        const auto m = merge_arcs(arcs);
        for (std::size_t k = 1; k < m.size(); ++k) CHECK(m[k].start > m[k - 1].end());
        for (const auto& a : arcs) CHECK(std::any_of(m.begin(), m.end(), [&](const Arc& b) {
                  return b.contains_closed(a.midpoint(), 1e-12);
              }));
    }
}

TEST_CASE("image of an arc by endpoint transport matches sampled images") {
    testgen::Gen gen(5);
    for (int i = 0; i < 300; ++i) {
        const Matrix2 m = gen.matrix(5);
        const Arc a{gen.uniform(0.01, kPi), gen.uniform(0.01, 2.5)};
        const Arc img = image(m, a);
        for (int k = 1; k < 20; ++k) {
            const ProjPoint p(a.start + a.length * k / 20);
            CHECK(img.contains_closed(proj_act(m, p), 1e-9));
        }
    }
}

TEST_CASE("positive pair has a compact invariant multicone in the positive quadrant") {
    const auto found = find_invariant_multicone(kPositivePair);
    REQUIRE(found);
    CHECK(found->containment == Containment::Compact);
    CHECK(found->clearance > 0);
    for (const auto& a : found->cone.arcs()) {
        CHECK(a.start > 0);
        CHECK(a.end() < kPi / 2);
    }
    CHECK(containment_clearance(found->cone, kPositivePair.alphabet) == doctest::Approx(found->clearance));
    // sampled check of the containment
    for (const auto& m : kPositivePair.alphabet)
        for (const auto& a : found->cone.arcs())
            for (int k = 0; k <= 50; ++k) CHECK(found->cone.contains(proj_act(m, ProjPoint(a.start + a.length * k / 50))));
}

TEST_CASE("no cone when the semigroup contains the identity") {
    const Matrix2 a{2, 1, 1, 1};
    const SystemConfig cfg = system_of({a, a.inverse()});
    CHECK_FALSE(find_invariant_multicone(cfg));
    CHECK(certify_semidiscrete(cfg).verdict == SemidiscreteVerdict::RefutedViaIdentityApproach);
}

TEST_CASE("parabolic fixed point shared with the repeller blocks certification") {
    const auto found = find_invariant_multicone(kParabolicPair);
    if (found) CHECK(found->containment == Containment::StrictOnly);
    for (const Multicone& m : {Multicone({{kPi / 2 - 0.2, 0.5}}), Multicone({{0.3, 2.5}}), Multicone({{3.0, 1.0}})})
        CHECK_THROWS_AS(certify_uniform_hyperbolicity(kParabolicPair, m), NotCompactlyContained);
}

TEST_CASE("certificate constants") {
    const SystemConfig single = system_of({diagonal(2)});
    const HyperbolicityCertificate one = certify_uniform_hyperbolicity(single, Multicone({arc_around(ProjPoint(kPi), 0.1)}));
    CHECK(one.lambda == doctest::Approx(2).epsilon(1e-9));
    CHECK(one.c_uh == doctest::Approx(1).epsilon(1e-9));
    CHECK(one.margin > 0);

    const auto found = find_invariant_multicone(kPositivePair);
    REQUIRE(found);
    const HyperbolicityCertificate cert = certify_uniform_hyperbolicity(kPositivePair, found->cone);
    CHECK(cert.lambda > 1);

    // independent fit: slope of log min-norm against depth up to 14
    std::vector<double> min_log(14, 1e300);
    for (int n = 1; n <= 14; ++n)
        enumerate_words(kPositivePair, n, [&](const Word&, const Matrix2& m) {
            min_log[n - 1] = std::min(min_log[n - 1], std::log(op_norm(m)));
        });
    const double slope = (min_log[13] - min_log[6]) / 7;
    CHECK(slope > 0.5);
    CHECK(std::exp(slope) == doctest::Approx(2.4142135623730949).epsilon(0.05));  // 1 + sqrt 2
}

TEST_CASE("certificate soundness: norms dominate c lambda^n") {
    testgen::Gen gen(19);
    std::vector<SystemConfig> systems{kPositivePair, system_of({diagonal(2), diagonal(3)})};
    for (int i = 0; i < 6; ++i) systems.push_back(system_of({gen.positive(), gen.positive()}));
    for (const auto& cfg : systems) {
        const auto found = find_invariant_multicone(cfg);
        REQUIRE(found);
        if (found->containment != Containment::Compact) continue;
        const HyperbolicityCertificate cert = certify_uniform_hyperbolicity(cfg, found->cone);
        for (int n = 1; n <= cert.depth; ++n)
            enumerate_words(cfg, n, [&](const Word&, const Matrix2& m) {
                CHECK(op_norm(m) >= cert.c_uh * std::pow(cert.lambda, n) * (1 - 1e-6));
            });
        // u_minus exclusion above the norm threshold
        for (const auto& [m, norm] : words_with_norms(cfg, 8)) {
            if (norm * norm > 2 / cert.margin) CHECK_FALSE(found->cone.contains(singular_directions(m).u_minus));
        }
    }
}

TEST_CASE("almost multiplicativity: exhaustive depth 6 on the positive pair") {
    const auto found = find_invariant_multicone(kPositivePair);
    REQUIRE(found);
    const double c = certify_uniform_hyperbolicity(kPositivePair, found->cone).c_best();
    REQUIRE(c > 0);
    const auto words = words_with_norms(kPositivePair, 6);
    int violations = 0;
    for (const auto& [a, na] : words)
        for (const auto& [b, nb] : words)
            if (op_norm(a * b) < c * na * nb) ++violations;
    CHECK(violations == 0);
}

TEST_CASE("almost multiplicativity constant from nested cones") {
    CHECK(almost_mult_constant(Multicone({{0, kPi / 2}}), Multicone({{kPi / 8, kPi / 4}})) ==
          doctest::Approx(0.14644660940672624).epsilon(1e-12));  // sin(pi/8)^2
    CHECK_THROWS_AS(almost_mult_constant(Multicone({{0.1, 1.0}}), Multicone({{0.1, 0.5}})), std::invalid_argument);

    // pairs whose images land in K' satisfy the bound
    const Multicone k({{0.05, kPi / 2 - 0.1}});
    const Multicone kp({{0.3, 0.8}});
    const double c = almost_mult_constant(k, kp);
    const auto words = words_with_norms(kPositivePair, 5);
    auto maps_into_kp = [&](const Matrix2& m) {
        const Arc img = image(m, k.arcs()[0]);
        const Arc& target = kp.arcs()[0];
        return img.length <= target.length && target.contains_closed(ProjPoint(img.start)) &&
               target.contains_closed(ProjPoint(img.end()));
    };
    int checked = 0;
    for (const auto& [a, na] : words)
        for (const auto& [b, nb] : words)
            if (maps_into_kp(a) && maps_into_kp(b)) {
                ++checked;
                CHECK(op_norm(a * b) >= c * na * nb);
            }
    CHECK(checked > 100);
}

TEST_CASE("semidiscreteness verdicts") {
    CHECK(certify_semidiscrete(kPositivePair).verdict == SemidiscreteVerdict::CertifiedViaInvariantSet);
    const SemidiscreteReport sb = certify_semidiscrete(system_of({Matrix2{1, 1, 0, 1}, Matrix2{1, 0, 1, 1}}));
    CHECK(sb.verdict == SemidiscreteVerdict::EvidenceOnly);
    CHECK_FALSE(sb.profile.empty());
    CHECK(certify_semidiscrete(system_of({rotation(kPi / 3)})).verdict ==
          SemidiscreteVerdict::RefutedViaIdentityApproach);
}
