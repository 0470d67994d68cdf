#include "projifs/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace projifs {

std::string Word::str() const {
    std::string out;
    const bool dotted = std::any_of(letters.begin(), letters.end(), [](Letter l) { return l >= 9; });
    for (std::size_t i = 0; i < letters.size(); ++i) {
        if (dotted && i > 0) out += '.';
        out += std::to_string(letters[i] + 1);
    }
    return out;
}

void SystemConfig::validate() const {
    if (alphabet.empty()) throw std::invalid_argument("alphabet is empty");
    for (const auto& m : alphabet) {
        if (!std::isfinite(m.a) || !std::isfinite(m.b) || !std::isfinite(m.c) || !std::isfinite(m.d))
            throw std::invalid_argument("matrix entries must be finite");
        if (std::abs(m.det() - 1.0) > 1e-9) throw std::invalid_argument("matrix determinant is not 1");
    }
    if (probs) {
        if (probs->size() != alphabet.size())
            throw std::invalid_argument("probs length does not match the alphabet");
        double total = 0;
        for (double p : *probs) {
            if (!(p > 0)) throw std::invalid_argument("probs must be positive");
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("probs must sum to 1");
    }
    if (depth_cap < 1) throw std::invalid_argument("depth_cap must be positive");
}

SystemConfig with_alphabet(const SystemConfig& cfg, std::vector<Matrix2> alphabet) {
    SystemConfig out = cfg;
    out.alphabet = std::move(alphabet);
    if (out.probs && out.probs->size() != out.alphabet.size()) out.probs.reset();
    return out;
}

std::vector<Matrix2> inverted(std::span<const Matrix2> alphabet) {
    std::vector<Matrix2> out;
    out.reserve(alphabet.size());
    for (const auto& m : alphabet) out.push_back(m.inverse());
    return out;
}

Matrix2 word_product(std::span<const Matrix2> alphabet, std::span<const Letter> letters) {
    Matrix2 p = Matrix2::identity();
    for (Letter l : letters) p = p * alphabet[l];
    return p;
}

BudgetExceeded::BudgetExceeded(double req, double bud)
    : std::runtime_error("word budget exceeded: " + std::to_string(static_cast<long long>(req)) +
                         " words requested, budget " + std::to_string(static_cast<long long>(bud))),
      requested(req), budget(bud) {}

double word_count(std::size_t letters, int min_len, int max_len) {
    double total = 0;
    for (int l = std::max(min_len, 1); l <= max_len; ++l) total += std::pow(double(letters), l);
    return total;
}

void check_budget(std::size_t letters, int min_len, int max_len, double budget) {
    const double n = word_count(letters, min_len, max_len);
    if (n > budget) throw BudgetExceeded(n, budget);
}

unsigned thread_count() {
    if (const char* env = std::getenv("PROJIFS_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    if (failed) return;
                    try {
                        task(i);
                    } catch (...) {
                        if (!failed.exchange(true)) failure = std::current_exception();
                        return;
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

WordPartition partition_words(std::size_t letters, int min_len, int max_len) {
    WordPartition part;
    // aim for at least 64 prefixes so uneven subtrees still balance
    int split = 0;
    double count = 1;
    while (count < 64 && split < max_len) {
        ++split;
        count *= double(letters);
    }
    split = std::max(split, 1);
    part.split_len = split;
    if (max_len < split) {
        part.split_len = max_len + 1;
        return part;
    }
    std::vector<Letter> prefix(split, 0);
    while (true) {
        part.prefixes.push_back(prefix);
        int pos = split - 1;
        while (pos >= 0 && prefix[pos] + 1 == letters) prefix[pos--] = 0;
        if (pos < 0) break;
        ++prefix[pos];
    }
    (void)min_len;
    return part;
}

void enumerate_words(const SystemConfig& cfg, int n,
                     const std::function<void(const Word&, const Matrix2&)>& sink, double budget) {
    if (n < 1) throw std::invalid_argument("depth must be at least 1");
    check_budget(cfg.size(), n, n, budget);
    Word w;
    walk_words(cfg.alphabet, {}, n, n, [&](std::span<const Letter> letters, const Matrix2& m) {
        w.letters.assign(letters.begin(), letters.end());
        sink(w, m);
    });
}

const char* to_string(DistanceBranch b) {
    return b == DistanceBranch::Logarithm ? "log-frobenius" : "identity-offset";
}

namespace {

// |log X|_F for unit-determinant X with trace > -2, via log X = f(t) (X - t/2 I).
double log_frobenius(const Matrix2& x) {
    const double half = x.trace() / 2;
    Matrix2 traceless{x.a - half, x.b, x.c, x.d - half};
    double scale;
    const double gap = half - 1;
    if (std::abs(gap) < 1e-6) {
        // u / sinh(u) with cosh(u) = half, expanded around half = 1
        scale = 1 - gap / 3 + 2 * gap * gap / 15;
    } else if (half > 1) {
        const double u = std::acosh(half);
        scale = u / std::sinh(u);
    } else {
        const double u = std::acos(std::clamp(half, -1.0, 1.0));
        scale = u / std::sin(u);
    }
    return scale * traceless.frobenius();
}

}  // namespace

Distance left_invariant_dist(const Matrix2& a, const Matrix2& b) {
    const Matrix2 x = a.inverse() * b;
    if (x.trace() > 0) return {log_frobenius(x), DistanceBranch::Logarithm};
    const Matrix2 off{x.a - 1, x.b, x.c, x.d - 1};
    return {off.frobenius(), DistanceBranch::IdentityOffset};
}

double symmetric_dist(const Matrix2& a, const Matrix2& b) {
    const Distance ab = left_invariant_dist(a, b);
    if (ab.branch == DistanceBranch::Logarithm) return ab.value;
    return std::min(ab.value, left_invariant_dist(b, a).value);
}

PairSearch closest_pair(std::span<const Matrix2> mats, double exclude_below, std::size_t max_below,
                        std::size_t window) {
    PairSearch out;
    const std::size_t n = mats.size();
    if (n < 2) return out;
    struct Entry {
        double key;
        double norm;
        std::size_t index;
    };
    std::vector<Entry> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double nm = op_norm(mats[i]);
        order[i] = {std::log(nm), nm, i};
    }
    std::sort(order.begin(), order.end(), [](const Entry& l, const Entry& r) {
        return l.key < r.key || (l.key == r.key && l.index < r.index);
    });
    out.exact = n < kExactPairLimit;
    double best = std::numeric_limits<double>::infinity();
    auto consider = [&](const Entry& p, const Entry& q) {
        const Matrix2& a = mats[p.index];
        const Matrix2& b = mats[q.index];
        // cheap bound: dist >= log(1 + |B - A|_F / max(|A|, |B|))
        const Matrix2 diff{b.a - a.a, b.b - a.b, b.c - a.c, b.d - a.d};
        const double bound = std::log1p(diff.frobenius() / std::max(p.norm, q.norm));
        if (bound >= best && bound > exclude_below) return;
        const double d = symmetric_dist(a, b);
        std::size_t i = std::min(p.index, q.index), j = std::max(p.index, q.index);
        if (d <= exclude_below) {
            if (out.below.size() < max_below) out.below.push_back({i, j, d});
            return;
        }
        if (d < best || (d == best && out.closest &&
                         std::pair(i, j) < std::pair(out.closest->first, out.closest->second))) {
            best = d;
            out.closest = ClosePair{i, j, d};
        }
    };
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t stop = out.exact ? n : std::min(n, i + 1 + window);
        for (std::size_t j = i + 1; j < stop; ++j) {
            // dist >= |log|A| - log|B||, so later entries in key order cannot do better
            if (order[j].key - order[i].key > best && order[j].key - order[i].key > exclude_below)
                break;
            consider(order[i], order[j]);
        }
    }
    std::sort(out.below.begin(), out.below.end(), [](const ClosePair& l, const ClosePair& r) {
        return std::pair(l.first, l.second) < std::pair(r.first, r.second);
    });
    return out;
}

namespace {

struct WordsAndMatrices {
    std::vector<Word> words;
    std::vector<Matrix2> mats;
};

WordsAndMatrices collect(const SystemConfig& cfg, int min_len, int max_len) {
    WordsAndMatrices out;
    check_budget(cfg.size(), min_len, max_len, kDefaultWordBudget);
    walk_words(cfg.alphabet, {}, min_len, max_len, [&](std::span<const Letter> w, const Matrix2& m) {
        out.words.push_back(Word{{w.begin(), w.end()}});
        out.mats.push_back(m);
    });
    return out;
}

}  // namespace

DiophantineProfile diophantine_profile(const SystemConfig& cfg, int n_max, double collision_tol) {
    cfg.validate();
    DiophantineProfile prof;
    std::vector<double> xs, ys;
    for (int n = 1; n <= n_max; ++n) {
        const auto level = collect(cfg, n, n);
        const PairSearch ps = closest_pair(level.mats, collision_tol);
        prof.exact = prof.exact && ps.exact;
        for (const auto& c : ps.below)
            prof.collisions.push_back({level.words[c.first], level.words[c.second], c.distance});
        DepthMinimum rec;
        rec.depth = n;
        if (!ps.below.empty()) {
            rec.min_distance = ps.below.front().distance;
            for (const auto& c : ps.below) rec.min_distance = std::min(rec.min_distance, c.distance);
            const auto& c = ps.below.front();
            rec.first = level.words[c.first];
            rec.second = level.words[c.second];
        } else if (ps.closest) {
            rec.min_distance = ps.closest->distance;
            rec.first = level.words[ps.closest->first];
            rec.second = level.words[ps.closest->second];
        } else {
            continue;  // a single word at this depth
        }
        prof.per_depth.push_back(rec);
        if (n >= 3 && rec.min_distance > collision_tol) {
            xs.push_back(n);
            ys.push_back(std::log(rec.min_distance));
        }
    }
    if (xs.size() >= 2) {
        const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
        const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxy += (xs[i] - mx) * (ys[i] - my);
            sxx += (xs[i] - mx) * (xs[i] - mx);
        }
        prof.fitted_c = std::min(1.0, std::exp(sxy / sxx));
    }
    return prof;
}

std::vector<DiscretenessRecord> discreteness_profile(const SystemConfig& cfg, int n_max,
                                                     double collision_tol) {
    cfg.validate();
    std::vector<DiscretenessRecord> out;
    const auto all = collect(cfg, 1, n_max);
    double id_min = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= n_max; ++n) {
        std::vector<Matrix2> upto;
        for (std::size_t i = 0; i < all.words.size(); ++i) {
            if (static_cast<int>(all.words[i].letters.size()) > n) continue;
            const Matrix2& m = all.mats[i];
            upto.push_back(m);
            if (static_cast<int>(all.words[i].letters.size()) == n) {
                id_min = std::min(id_min, symmetric_dist(Matrix2::identity(), m));
                id_min = std::min(id_min, symmetric_dist(Matrix2::identity(), m.negated()));
            }
        }
        const PairSearch ps = closest_pair(upto, collision_tol, 0);
        DiscretenessRecord rec;
        rec.depth = n;
        rec.identity_distance = id_min;
        rec.accumulation_distance =
            ps.closest ? ps.closest->distance : std::numeric_limits<double>::infinity();
        if (!out.empty())
            rec.accumulation_distance = std::min(rec.accumulation_distance, out.back().accumulation_distance);
        out.push_back(rec);
    }
    return out;
}

std::optional<ProjPoint> common_fixed_point(const SystemConfig& cfg, double tol) {
    std::vector<ProjPoint> candidates;
    for (const auto& m : cfg.alphabet) {
        const FixedPointData fp = fixed_points(m);
        if (fp.tag == ClassTag::Identity) continue;
        if (fp.tag == ClassTag::Elliptic) return std::nullopt;
        if (fp.parabolic_point) candidates.push_back(*fp.parabolic_point);
        if (fp.attracting) candidates.push_back(*fp.attracting);
        if (fp.repelling) candidates.push_back(*fp.repelling);
        break;
    }
    if (candidates.empty()) return cfg.alphabet.empty() ? std::nullopt : std::optional(ProjPoint(kPi));
    for (const ProjPoint p : candidates) {
        const bool fixed = std::all_of(cfg.alphabet.begin(), cfg.alphabet.end(), [&](const Matrix2& m) {
            return proj_dist(proj_act(m, p), p) <= tol;
        });
        if (fixed) return p;
    }
    return std::nullopt;
}

}  // namespace projifs
