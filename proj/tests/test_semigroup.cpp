#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "generators.hpp"
#include "projifs/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

using namespace projifs;

namespace {

SystemConfig system_of(std::vector<Matrix2> letters) {
    SystemConfig cfg;
    cfg.alphabet = std::move(letters);
    return cfg;
}

const Matrix2 kShear{1, 1, 0, 1};
const Matrix2 kLowerShear{1, 0, 1, 1};

// Plain recursion with unnormalized products.
void naive_words(const std::vector<Matrix2>& alphabet, int n, Matrix2 acc, std::vector<double>& norms) {
    if (n == 0) {
        norms.push_back(op_norm(acc));
        return;
    }
    for (const auto& m : alphabet) {
        const Matrix2 next{acc.a * m.a + acc.b * m.c, acc.a * m.b + acc.b * m.d, acc.c * m.a + acc.d * m.c,
                           acc.c * m.b + acc.d * m.d};
        naive_words(alphabet, n - 1, next, norms);
    }
}

// |log M|_F for a unit-determinant M with trace > -2, from the closed forms
// log M = t / sinh t (M - cosh t I) or t / sin t (M - cos t I).
double log_frobenius(const Matrix2& m) {
    const double half = m.trace() / 2;
    double coef;
    if (std::abs(half - 1) < 1e-12) coef = 1;
    else if (half > 1) coef = std::acosh(half) / std::sinh(std::acosh(half));
    else coef = std::acos(half) / std::sin(std::acos(half));
    const double a = m.a - half, d = m.d - half;
    return coef * std::sqrt(a * a + m.b * m.b + m.c * m.c + d * d);
}

double oracle_dist(const Matrix2& a, const Matrix2& b) {
    const Matrix2 q = a.inverse() * b;
    if (q.trace() > 0) return log_frobenius(q);
    return std::hypot(std::hypot(q.a - 1, q.b), std::hypot(q.c, q.d - 1));
}

}  // namespace

TEST_CASE("enumeration order and products") {
    const SystemConfig two = system_of({kShear, kLowerShear});
    std::vector<std::string> words;
    enumerate_words(two, 3, [&](const Word& w, const Matrix2&) { words.push_back(w.str()); });
    CHECK(words == std::vector<std::string>{"111", "112", "121", "122", "211", "212", "221", "222"});

    int count = 0;
    enumerate_words(system_of({diagonal(2)}), 5, [&](const Word&, const Matrix2& m) {
        ++count;
        CHECK(m.a == doctest::Approx(32));
        CHECK(m.d == doctest::Approx(1.0 / 32));
    });
    CHECK(count == 1);

    enumerate_words(two, 2, [&](const Word& w, const Matrix2& m) {
        if (w.str() == "12") CHECK(m == Matrix2{2, 1, 1, 1});
    });
}

TEST_CASE("word strings") {
    CHECK(Word{{0, 1, 1}}.str() == "122");
    CHECK(Word{{9, 0}}.str() == "10.1");
}

TEST_CASE("enumeration completeness against naive recursion") {
    testgen::Gen gen(4);
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<Matrix2> alphabet;
        for (int i = 0; i < 2 + trial % 2; ++i) alphabet.push_back(gen.matrix(3));
        const SystemConfig cfg = system_of(alphabet);
        for (int n = 1; n <= (alphabet.size() == 2 ? 8 : 6); ++n) {
            std::vector<double> fast, slow;
            enumerate_words(cfg, n, [&](const Word&, const Matrix2& m) { fast.push_back(op_norm(m)); });
            naive_words(alphabet, n, Matrix2::identity(), slow);
            REQUIRE(fast.size() == slow.size());
            // both lists are in lexicographic order
            for (std::size_t i = 0; i < fast.size(); ++i) CHECK(fast[i] == doctest::Approx(slow[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("left-to-right and balanced products agree") {
    testgen::Gen gen(6);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Matrix2> alphabet{gen.positive(), gen.positive()};
        std::vector<Letter> letters;
        for (int i = 0; i < 25; ++i) letters.push_back(static_cast<Letter>(gen.integer(0, 1)));
        const Matrix2 linear = word_product(alphabet, letters);
        std::vector<Matrix2> level;
        for (Letter l : letters) level.push_back(alphabet[l]);
        while (level.size() > 1) {
            std::vector<Matrix2> next;
            for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(level[i] * level[i + 1]);
            if (level.size() % 2) next.push_back(level.back());
            level = std::move(next);
        }
        const double scale = op_norm(linear);
        CHECK(std::abs(linear.a - level[0].a) <= 1e-8 * scale);
        CHECK(std::abs(linear.b - level[0].b) <= 1e-8 * scale);
        CHECK(std::abs(linear.c - level[0].c) <= 1e-8 * scale);
        CHECK(std::abs(linear.d - level[0].d) <= 1e-8 * scale);
    }
}

TEST_CASE("budget") {
    CHECK(word_count(2, 1, 3) == 14);
    CHECK(word_count(3, 2, 2) == 9);
    CHECK_THROWS_AS(check_budget(2, 1, 30, 1e6), BudgetExceeded);
    try {
        enumerate_words(system_of({kShear, kLowerShear}), 24, [](const Word&, const Matrix2&) {}, 1000);
        FAIL("expected BudgetExceeded");
    } catch (const BudgetExceeded& e) {
        CHECK(e.requested == doctest::Approx(std::pow(2.0, 24)));
        CHECK(e.budget == 1000);
    }
}

TEST_CASE("partition covers every word once for any worker count") {
    for (std::size_t letters : {1u, 2u, 3u, 5u}) {
        const WordPartition part = partition_words(letters, 1, 7);
        std::size_t covered = 0;
        for (const auto& prefix : part.prefixes) {
            CHECK(static_cast<int>(prefix.size()) == part.split_len);
            covered += 1;
        }
        CHECK(covered == static_cast<std::size_t>(std::pow(letters, part.split_len)));
    }
    // sums are identical under different PROJIFS_THREADS values
    const SystemConfig cfg = system_of({Matrix2{2, 1, 1, 1}, Matrix2{1, 1, 1, 2}, Matrix2{3, 1, 2, 1}});
    auto sum = [&] {
        auto parts = partitioned_walk<double>(cfg.alphabet, 1, 9, [](double& acc, std::span<const Letter>, const Matrix2& m) {
            acc += 1 / op_norm(m);
        });
        double s = 0;
        for (double p : parts) s += p;
        return s;
    };
    setenv("PROJIFS_THREADS", "1", 1);
    const double one = sum();
    setenv("PROJIFS_THREADS", "4", 1);
    const double four = sum();
    unsetenv("PROJIFS_THREADS");
    CHECK(one == four);
}

TEST_CASE("left-invariant distance") {
    testgen::Gen gen(9);
    const Matrix2 a = gen.matrix();
    CHECK(left_invariant_dist(a, a).value == doctest::Approx(0).epsilon(1e-12));
    const Distance d = left_invariant_dist(Matrix2::identity(), diagonal(std::exp(1.0)));
    CHECK(d.branch == DistanceBranch::Logarithm);
    CHECK(d.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    for (int i = 0; i < 300; ++i) {
        const Matrix2 x = gen.matrix(4), y = gen.matrix(4), c = gen.matrix(4);
        const Distance xy = left_invariant_dist(x, y);
        CHECK(left_invariant_dist(c * x, c * y).value == doctest::Approx(xy.value).epsilon(1e-6));
        CHECK(xy.value == doctest::Approx(oracle_dist(x, y)).epsilon(1e-8));
        if (xy.branch == DistanceBranch::Logarithm) {
            CHECK(left_invariant_dist(y, x).value == doctest::Approx(xy.value).epsilon(1e-8));
        }
    }
}

TEST_CASE("diophantine profiles") {
    // integer matrices generating a free monoid
    const DiophantineProfile sb = diophantine_profile(system_of({kShear, kLowerShear}), 8);
    CHECK(sb.collisions.empty());
    REQUIRE(sb.per_depth.size() == 8);
    for (const auto& d : sb.per_depth) CHECK(d.min_distance > 0.5);

    const DiophantineProfile dup = diophantine_profile(system_of({kShear, kShear}), 1);
    REQUIRE(dup.collisions.size() == 1);
    CHECK(dup.collisions[0].distance == 0);
    CHECK(dup.per_depth[0].min_distance == 0);

    // commuting diagonals: at length 1 the distance is sqrt 2 log(3/2); from length 2 on,
    // permuted words give equal matrices
    const DiophantineProfile diag = diophantine_profile(system_of({diagonal(2), diagonal(3)}), 6);
    CHECK(diag.per_depth[0].min_distance == doctest::Approx(std::sqrt(2.0) * std::log(1.5)).epsilon(1e-12));
    CHECK_FALSE(diag.collisions.empty());
    CHECK(diag.collisions[0].first.str() == "12");
    CHECK(diag.collisions[0].second.str() == "21");
    for (const auto& d : diag.per_depth) CHECK(d.min_distance >= 0);
}

TEST_CASE("diophantine minima shrink under alphabet extension") {
    testgen::Gen gen(17);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<Matrix2> letters{gen.hyperbolic(), gen.hyperbolic()};
        const DiophantineProfile small = diophantine_profile(system_of(letters), 5);
        letters.push_back(gen.hyperbolic());
        const DiophantineProfile big = diophantine_profile(system_of(letters), 5);
        for (std::size_t n = 0; n < small.per_depth.size(); ++n)
            CHECK(big.per_depth[n].min_distance <= small.per_depth[n].min_distance + 1e-12);
    }
}

TEST_CASE("closest pair exact vs brute force") {
    testgen::Gen gen(23);
    std::vector<Matrix2> mats;
    for (int i = 0; i < 200; ++i) mats.push_back(gen.matrix(3));
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < mats.size(); ++i)
        for (std::size_t j = i + 1; j < mats.size(); ++j) best = std::min(best, symmetric_dist(mats[i], mats[j]));
    const PairSearch found = closest_pair(mats);
    REQUIRE(found.closest);
    CHECK(found.exact);
    CHECK(found.closest->distance == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("discreteness profiles") {
    const auto single = discreteness_profile(system_of({diagonal(2)}), 8);
    for (std::size_t i = 1; i < single.size(); ++i) {
        CHECK(single[i].identity_distance == doctest::Approx(single[0].identity_distance));
        CHECK(single[i].identity_distance > 0.9);
    }

    const auto sb = discreteness_profile(system_of({kShear, kLowerShear}), 10);
    for (const auto& r : sb) CHECK(r.identity_distance >= 1 - 1e-12);  // integer matrices stay 1 away from Id
    for (std::size_t i = 1; i < sb.size(); ++i) CHECK(sb[i].identity_distance <= sb[i - 1].identity_distance);

    // hyperbolic pair sharing exactly one fixed point: fixed pairs {0, inf} and {inf, 1}
    const SystemConfig nd = system_of({diagonal(2), Matrix2{0.25, 3.75, 0, 4}});
    const auto prof = discreteness_profile(nd, 8);
    std::vector<Matrix2> words;
    for (int n = 1; n <= 8; ++n) enumerate_words(nd, n, [&](const Word&, const Matrix2& m) { words.push_back(m); });
    double oracle = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t j = i + 1; j < words.size(); ++j) {
            const double d = std::min(oracle_dist(words[i], words[j]), oracle_dist(words[j], words[i]));
            if (d > kCollisionTol) oracle = std::min(oracle, d);
        }
    CHECK(prof.back().accumulation_distance == doctest::Approx(oracle).epsilon(1e-6));
    // frozen from the oracle above; distances keep shrinking with depth
    CHECK(prof.back().accumulation_distance < 2e-3);
    CHECK(prof.back().accumulation_distance < prof[3].accumulation_distance);
}

TEST_CASE("common fixed points") {
    const auto p = common_fixed_point(system_of({diagonal(2), kShear}));
    REQUIRE(p);
    CHECK(p->theta() == doctest::Approx(kPi));
    CHECK_FALSE(common_fixed_point(system_of({kShear, kLowerShear})));
    CHECK_FALSE(common_fixed_point(system_of({rotation(kPi / 3)})));
}

TEST_CASE("config validation") {
    SystemConfig cfg = system_of({diagonal(2)});
    CHECK_NOTHROW(cfg.validate());
    cfg.probs = std::vector<double>{0.5};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.probs = std::vector<double>{1.0};
    CHECK_NOTHROW(cfg.validate());
    CHECK_THROWS_AS(system_of({}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(system_of({Matrix2{2, 0, 0, 1}}).validate(), std::invalid_argument);
}
