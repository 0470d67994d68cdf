#include "projifs/subsystems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace projifs {

const char* to_string(ReducibleCase c) {
    switch (c) {
        case ReducibleCase::UniformlyHyperbolicReducible: return "uniformly-hyperbolic-reducible";
        case ReducibleCase::ParabolicAtRepeller: return "parabolic-at-repeller";
        case ReducibleCase::AttractorMeetsRepeller: return "attractor-meets-repeller";
        case ReducibleCase::SingletonAttractor: return "singleton-attractor";
    }
    return "?";
}

namespace {

int depth_within(std::size_t letters, int depth, double max_words) {
    int d = 1;
    while (d < depth && word_count(letters, 1, d + 1) <= max_words) ++d;
    return d;
}

Word to_word(std::span<const Letter> w) { return Word{{w.begin(), w.end()}}; }

}  // namespace

ReducibleVerdict reducible_dimension(const SystemConfig& cfg, int depth) {
    cfg.validate();
    const auto common = common_fixed_point(cfg);
    if (!common) throw NotApplicable("the letters share no fixed point; the system is not reducible");
    const ProjPoint p = *common;

    std::optional<Word> attracting, repelling, parabolic;
    std::optional<ProjPoint> other_attracting, other_repelling;
    bool distinct_others = false;
    std::optional<ProjPoint> first_other;
    walk_words(cfg.alphabet, {}, 1, depth_within(cfg.size(), depth, 1 << 14),
               [&](std::span<const Letter> w, const Matrix2& m) {
                   const FixedPointData fp = fixed_points(m);
                   if (fp.tag == ClassTag::Parabolic) {
                       if (!parabolic) parabolic = to_word(w);
                       return;
                   }
                   if (fp.tag != ClassTag::Hyperbolic) return;
                   const bool attracts_at_p = proj_dist(*fp.attracting, p) < proj_dist(*fp.repelling, p);
                   const ProjPoint other = attracts_at_p ? *fp.repelling : *fp.attracting;
                   if (!first_other) first_other = other;
                   else if (proj_dist(*first_other, other) > 1e-9) distinct_others = true;
                   if (attracts_at_p && !attracting) {
                       attracting = to_word(w);
                       other_attracting = other;
                   }
                   if (!attracts_at_p && !repelling) {
                       repelling = to_word(w);
                       other_repelling = other;
                   }
               });

    ReducibleVerdict v;
    v.common_point = p;
    if (repelling && parabolic) {
        v.kind = ReducibleCase::ParabolicAtRepeller;
        v.dimension = 1;
        v.dimension_tag = "1";
        v.first_witness = repelling;
        v.second_witness = parabolic;
    } else if (repelling && attracting && (distinct_others || parabolic)) {
        v.kind = ReducibleCase::AttractorMeetsRepeller;
        v.dimension = 1;
        v.dimension_tag = "1";
        v.first_witness = attracting;
        v.second_witness = repelling;
    } else if (repelling && !attracting) {
        v.kind = ReducibleCase::UniformlyHyperbolicReducible;
        v.dimension_tag = "deferred-to-uh";
        v.first_witness = repelling;
    } else {
        v.kind = ReducibleCase::SingletonAttractor;
        v.dimension = 0;
        v.dimension_tag = "0";
        v.first_witness = attracting ? attracting : parabolic;
        if (repelling) {
            v.second_witness = repelling;
            v.notes.push_back("all words share both fixed points; the attractor is finite");
        }
    }
    return v;
}

namespace {

Arc complement_arc(const Arc& a) { return {ProjPoint(a.end()).theta(), kPi - a.length}; }

// Offset of the closed arc j inside the open arc i, or -1.
double inside_clearance(const Arc& i, const Arc& j) {
    double off = std::fmod(j.start - i.start, kPi);
    if (off < 0) off += kPi;
    if (off > 0 && off + j.length < i.length) return std::min(off, i.length - off - j.length);
    return -1;
}

// Gaps between circularly consecutive points of `fence` that contain points of `probe`.
std::vector<Arc> gaps_containing(const std::vector<ProjPoint>& fence, const std::vector<ProjPoint>& probe) {
    std::vector<Arc> out;
    if (fence.empty() || probe.empty()) return out;
    for (std::size_t i = 0; i < fence.size(); ++i) {
        const double a = fence[i].theta();
        const double b = i + 1 < fence.size() ? fence[i + 1].theta() : fence[0].theta() + kPi;
        const Arc gap{a, b - a};
        if (!(gap.length > 0)) continue;
        // probe is sorted: look at the first point past a, wrapping once
        auto it = std::upper_bound(probe.begin(), probe.end(), a, [](double t, ProjPoint q) { return t < q.theta(); });
        const ProjPoint next = it == probe.end() ? probe.front() : *it;
        if (gap.contains_open(next)) out.push_back(gap);
    }
    std::stable_sort(out.begin(), out.end(), [](const Arc& l, const Arc& r) { return l.length > r.length; });
    if (out.size() > 8) out.resize(8);
    return out;
}

struct Shrunk {
    Arc arc;
    double clearance;  // distance from the arc to the fence
};

// Subarcs of a fence gap: trimmed symmetrically by f of its length, and the hull of
// the probe points inside it padded by f of the room left on each side.
std::vector<Shrunk> shrink_gap(const Arc& gap, const std::vector<ProjPoint>& probe, double f) {
    std::vector<Shrunk> out{{{ProjPoint(gap.start + f * gap.length).theta(), (1 - 2 * f) * gap.length}, f * gap.length}};
    double lo = gap.length, hi = 0;
    for (const auto& q : probe) {
        double off = std::fmod(q.theta() - gap.start, kPi);
        if (off < 0) off += kPi;
        if (off > 0 && off < gap.length) lo = std::min(lo, off), hi = std::max(hi, off);
    }
    if (lo > hi) return out;
    const double left = (1 - f) * lo, right = hi + f * (gap.length - hi);
    out.push_back({{ProjPoint(gap.start + left).theta(), right - left}, std::min(left, gap.length - right)});
    return out;
}

}  // namespace

bool verify_pivot(const Pivot& p) {
    if (!(p.u.length > 0 && p.v.length > 0 && p.u_prime.length > 0)) return false;
    if (inside_clearance(p.u, p.u_prime) <= 0) return false;
    if (arc_dist(p.u, p.v) <= 0) return false;
    const Arc img = image(p.a0, complement_arc(p.v));
    return inside_clearance(p.u_prime, img) > 0;
}

Pivot make_pivot(Word a0_word, int power, const Matrix2& a0, Arc u, Arc v) {
    const Arc img = image(a0, complement_arc(v));
    const double clear = inside_clearance(u, img);
    if (clear <= 0) throw NotApplicable("phi_A0 does not map the complement of V inside U");
    Pivot p;
    p.a0_word = std::move(a0_word);
    p.power = power;
    p.a0 = a0;
    p.u = u;
    p.v = v;
    p.u_prime = Arc{ProjPoint(img.start - clear / 2).theta(), img.length + clear};
    if (!verify_pivot(p)) throw NotApplicable("pivot containments failed re-verification");
    return p;
}

Pivot find_pivot(const SystemConfig& cfg, int depth, PivotSearchOptions opts) {
    cfg.validate();
    for (const auto& m : cfg.alphabet)
        if (classify(m) == ClassTag::Elliptic || classify(m) == ClassTag::Identity)
            throw NotApplicable("elliptic letter present");
    if (common_fixed_point(cfg)) throw NotApplicable("reducible system: the letters share a fixed point");

    const int cloud_depth = depth_within(cfg.size(), 64, opts.cloud_depth_words);
    const PointCloud k = attractor_points_fixedpoint(cfg, cloud_depth);
    const PointCloud r = repeller_points(cfg, cloud_depth);

    struct Candidate {
        Arc u, v;
        double margin;
    };
    std::vector<Candidate> candidates;
    const double fractions[] = {0.25, 0.125, 0.0625, 0.03125};
    for (const Arc& gu : gaps_containing(r.points, k.points))
        for (const Arc& gv : gaps_containing(k.points, r.points))
            for (double f : fractions)
                for (const Shrunk& u : shrink_gap(gu, k.points, f))
                    for (const Shrunk& v : shrink_gap(gv, r.points, f)) {
                        if (arc_dist(u.arc, v.arc) <= 0) continue;
                        candidates.push_back({u.arc, v.arc, std::min(u.clearance, v.clearance)});
                    }
    std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& l, const Candidate& r) {
        if (l.margin != r.margin) return l.margin > r.margin;
        if (l.u.start != r.u.start) return l.u.start < r.u.start;
        return l.v.start < r.v.start;
    });

    struct Hyperbolic {
        Word word;
        Matrix2 m;
        double norm;
        ProjPoint attracting, repelling;
    };
    std::vector<Hyperbolic> words;
    walk_words(cfg.alphabet, {}, 1, depth_within(cfg.size(), depth, 1 << 14),
               [&](std::span<const Letter> w, const Matrix2& m) {
                   const FixedPointData fp = fixed_points(m);
                   if (fp.tag == ClassTag::Hyperbolic)
                       words.push_back({to_word(w), m, op_norm(m), *fp.attracting, *fp.repelling});
               });
    std::stable_sort(words.begin(), words.end(),
                     [](const Hyperbolic& l, const Hyperbolic& r) { return l.norm > r.norm; });

    for (const Candidate& c : candidates) {
        for (const Hyperbolic& h : words) {
            if (!c.u.contains_open(h.attracting) || !c.v.contains_open(h.repelling)) continue;
            Matrix2 power = h.m;
            for (int k = 1; k <= opts.max_power; ++k, power = power * h.m) {
                if (inside_clearance(c.u, image(power, complement_arc(c.v))) <= 0) continue;
                try {
                    Pivot p = make_pivot(h.word, k, power, c.u, c.v);
                    p.margin = c.margin;
                    return p;
                } catch (const NotApplicable&) {
                }
            }
        }
    }
    throw std::runtime_error("no pivot found at depth " + std::to_string(depth) + " (inconclusive)");
}

namespace {

GammaBound gamma_single(const SystemConfig& cfg, const Pivot& pivot, int n, double budget) {
    check_budget(cfg.size(), n, n, budget);
    std::vector<Matrix2> gamma;
    std::optional<Word> failure;
    walk_words(cfg.alphabet, {}, n, n, [&](std::span<const Letter> w, const Matrix2& m) {
        const Matrix2 g = pivot.a0 * m;
        if (!failure && inside_clearance(pivot.u_prime, image(g, pivot.u)) <= 0) failure = to_word(w);
        gamma.push_back(g);
    });
    if (failure) throw CertificationFailed("A0 " + failure->str() + " does not map closure(U) into U'");

    GammaBound out;
    out.n = n;
    out.letters = gamma.size();
    out.depth = gamma.size() == 1 ? 20 : depth_within(gamma.size(), 20, budget);
    out.c = almost_mult_constant(Multicone({pivot.u}), Multicone({pivot.u_prime}));
    const NormTable table(with_alphabet(cfg, std::move(gamma)), out.depth, budget);
    out.bracket = critical_exponent_bracket(table, out.c);
    out.raw = std::min(1.0, out.bracket.lo);
    out.bound = out.raw;
    return out;
}

}  // namespace

std::vector<GammaBound> gamma_lower_bounds(const SystemConfig& cfg, const Pivot& pivot, int n_max, double budget) {
    cfg.validate();
    if (n_max < 1) throw std::invalid_argument("n must be at least 1");
    if (!verify_pivot(pivot)) throw CertificationFailed("pivot containments do not hold");
    std::vector<GammaBound> out;
    for (int n = 1; n <= n_max; ++n) {
        out.push_back(gamma_single(cfg, pivot, n, budget));
        if (n > 1) out.back().bound = std::max(out.back().bound, out[n - 2].bound);
    }
    return out;
}

GammaBound gamma_lower_bound(const SystemConfig& cfg, const Pivot& pivot, int n, double budget) {
    return gamma_lower_bounds(cfg, pivot, n, budget).back();
}

std::vector<WordMatrix> a_infty_truncation(const SystemConfig& cfg, Letter a0_letter, int n_max) {
    cfg.validate();
    if (a0_letter >= cfg.size()) throw std::invalid_argument("a0 letter outside the alphabet");
    if (n_max < 1) throw std::invalid_argument("N must be at least 1");
    std::vector<Letter> others;
    std::vector<Matrix2> other_mats;
    for (Letter l = 0; l < cfg.size(); ++l)
        if (l != a0_letter) {
            others.push_back(l);
            other_mats.push_back(cfg.alphabet[l]);
        }
    const Matrix2& a0 = cfg.alphabet[a0_letter];
    std::vector<WordMatrix> out{{Word{{a0_letter}}, a0}};
    if (n_max >= 2 && !others.empty())
        walk_words(other_mats, {}, 1, n_max - 1, [&](std::span<const Letter> w, const Matrix2& m) {
            Word word{{a0_letter}};
            for (Letter l : w) word.letters.push_back(others[l]);
            out.push_back({std::move(word), a0 * m});
        });
    return out;
}

std::optional<int> projective_order(const Matrix2& m) {
    const ClassTag tag = classify(m);
    if (tag == ClassTag::Identity) return 1;
    if (tag != ClassTag::Elliptic) return std::nullopt;
    const double angle = std::acos(std::clamp(m.trace() / 2, -1.0, 1.0));
    for (int p = 1; p <= kMaxEllipticOrder; ++p) {
        const double q = std::round(p * angle / kPi);
        if (std::abs(angle - kPi * q / p) <= kRationalAngleTol) return p;
    }
    return std::nullopt;
}

EllipticReduction elliptic_reduction(std::span<const Matrix2> hyperbolic_part, std::span<const Matrix2> elliptic_part) {
    if (hyperbolic_part.empty()) throw std::invalid_argument("empty hyperbolic part");
    EllipticReduction out;
    for (const auto& e : elliptic_part) {
        const auto order = projective_order(e);
        if (!order) throw NotApplicable("elliptic element of infinite order (irrational rotation angle)");
        out.period = std::lcm(out.period, *order);
    }
    SystemConfig s;
    s.alphabet.assign(hyperbolic_part.begin(), hyperbolic_part.end());
    if (!find_invariant_multicone(s)) throw NotApplicable("hyperbolic part has no invariant multicone");

    bool found = out.period == 1;
    if (!found)
        walk_words(elliptic_part, {}, 1, depth_within(elliptic_part.size(), 4, 1 << 12),
                   [&](std::span<const Letter>, const Matrix2& m) {
                       if (!found && projective_order(m) == out.period) {
                           out.generator = m;
                           found = true;
                       }
                   });
    if (!found) throw NotApplicable("no element of order " + std::to_string(out.period) + " among short products");

    for (const auto& a : hyperbolic_part) {
        Matrix2 power;
        for (int k = 0; k < out.period; ++k, power = power * out.generator) out.alphabet.push_back(a * power);
    }
    return out;
}

}  // namespace projifs
