#include "projifs/multicone.hpp"

#include "projifs/numeric.hpp"
#include "projifs/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace projifs {

namespace {

// Counterclockwise offset from a to b in [0, pi).
double ccw(double a, double b) {
    double d = std::fmod(b - a, kPi);
    if (d < 0) d += kPi;
    if (d >= kPi) d -= kPi;
    return d;
}

std::vector<Arc> inflate(std::vector<Arc> arcs, double pad) {
    for (auto& a : arcs) {
        a.start = ProjPoint(a.start - pad).theta();
        a.length = std::min(kPi, a.length + 2 * pad);
    }
    return arcs;
}

int words_depth_within(std::size_t letters, int depth, double max_words) {
    int d = 1;
    while (d < depth && word_count(letters, 1, d + 1) <= max_words) ++d;
    return d;
}

}  // namespace

bool Arc::contains_open(ProjPoint p, double tol) const {
    const double off = ccw(start, p.theta());
    return off > tol && off < length - tol;
}

bool Arc::contains_closed(ProjPoint p, double tol) const {
    const double off = ccw(start, p.theta());
    return off <= length + tol || off >= kPi - tol;
}

Arc arc_between(ProjPoint from, ProjPoint to) { return {from.theta(), ccw(from.theta(), to.theta())}; }

Arc arc_around(ProjPoint center, double radius) {
    return {ProjPoint(center.theta() - radius).theta(), 2 * radius};
}

Arc image(const Matrix2& m, const Arc& arc) {
    const ProjPoint s = proj_act(m, ProjPoint(arc.start));
    if (arc.length == 0) return {s.theta(), 0};
    const ProjPoint e = proj_act(m, ProjPoint(arc.end()));
    Arc out{s.theta(), ccw(s.theta(), e.theta())};
    if (!out.contains_closed(proj_act(m, arc.midpoint()), 1e-12))
        throw std::logic_error("arc image failed the midpoint check");
    return out;
}

double arc_dist(const Arc& a, const Arc& b) {
    if (a.contains_closed(ProjPoint(b.start)) || b.contains_closed(ProjPoint(a.start))) return 0;
    const ProjPoint pa[2] = {ProjPoint(a.start), ProjPoint(a.end())};
    const ProjPoint pb[2] = {ProjPoint(b.start), ProjPoint(b.end())};
    double best = kPi;
    for (auto p : pa)
        for (auto q : pb) best = std::min(best, proj_dist(p, q));
    return best;
}

std::vector<Arc> merge_arcs(std::vector<Arc> arcs, double tol) {
    if (arcs.empty()) return arcs;
    for (auto& a : arcs) {
        if (a.length >= kPi - tol) return {Arc{kPi, kPi}};
        a.start = ProjPoint(a.start).theta();
    }
    std::sort(arcs.begin(), arcs.end(), [](const Arc& l, const Arc& r) { return l.start < r.start; });
    std::vector<Arc> out;
    for (const auto& a : arcs) {
        if (!out.empty() && a.start <= out.back().end() + tol) {
            out.back().length = std::max(out.back().end(), a.end()) - out.back().start;
        } else {
            out.push_back(a);
        }
    }
    // arcs running past pi may overlap the first arcs
    while (out.size() > 1 && out.back().end() - kPi >= out.front().start - tol) {
        Arc& last = out.back();
        last.length = std::max(last.end(), out.front().end() + kPi) - last.start;
        out.erase(out.begin());
    }
    for (const auto& a : out)
        if (a.length >= kPi - tol) return {Arc{kPi, kPi}};
    std::sort(out.begin(), out.end(), [](const Arc& l, const Arc& r) { return l.start < r.start; });
    return out;
}

double arcs_dist(const std::vector<Arc>& a, const std::vector<Arc>& b) {
    double best = kPi;
    for (const auto& x : a)
        for (const auto& y : b) best = std::min(best, arc_dist(x, y));
    return best;
}

Multicone::Multicone(std::vector<Arc> arcs) : arcs_(merge_arcs(std::move(arcs))) {
    for (const auto& a : arcs_)
        if (!(a.length > 0)) throw std::invalid_argument("multicone components need positive length");
    if (!(total_length() < kPi)) throw std::invalid_argument("multicone covers the whole projective line");
}

bool Multicone::contains(ProjPoint p) const {
    return std::any_of(arcs_.begin(), arcs_.end(), [p](const Arc& a) { return a.contains_open(p); });
}

double Multicone::total_length() const {
    double t = 0;
    for (const auto& a : arcs_) t += a.length;
    return t;
}

double Multicone::largest_component() const {
    double t = 0;
    for (const auto& a : arcs_) t = std::max(t, a.length);
    return t;
}

Multicone Multicone::complement() const {
    std::vector<Arc> gaps;
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
        const Arc& cur = arcs_[i];
        const Arc& next = arcs_[(i + 1) % arcs_.size()];
        gaps.push_back({ProjPoint(cur.end()).theta(), ccw(cur.end(), next.start)});
    }
    if (arcs_.size() == 1) gaps[0].length = kPi - arcs_[0].length;
    return Multicone(std::move(gaps));
}

std::vector<Arc> Multicone::images(std::span<const Matrix2> alphabet) const {
    std::vector<Arc> out;
    for (const auto& m : alphabet)
        for (const auto& a : arcs_) out.push_back(image(m, a));
    return out;
}

namespace {

// Clearance of a closed arc inside the open multicone, or -1 when not inside a component.
double clearance_in(const std::vector<Arc>& cone, const Arc& j) {
    for (const auto& i : cone) {
        const double off = ccw(i.start, j.start);
        if (off > 0 && off + j.length < i.length) return std::min(off, i.length - off - j.length);
    }
    return -1;
}

}  // namespace

double containment_clearance(const Multicone& cone, std::span<const Matrix2> alphabet) {
    double best = kPi;
    for (const auto& j : cone.images(alphabet)) best = std::min(best, clearance_in(cone.arcs(), j));
    return best;
}

const char* to_string(Containment c) { return c == Containment::Compact ? "compact" : "strict-only"; }

std::optional<ConeSearch> find_invariant_multicone(const SystemConfig& cfg, ConeSearchOptions opts) {
    cfg.validate();
    for (const auto& m : cfg.alphabet)
        if (classify(m) == ClassTag::Elliptic || classify(m) == ClassTag::Identity) return std::nullopt;

    std::vector<ProjPoint> seeds;
    const int depth = words_depth_within(cfg.size(), opts.depth, 1 << 14);
    walk_words(cfg.alphabet, {}, 1, depth, [&](std::span<const Letter>, const Matrix2& m) {
        const FixedPointData fp = fixed_points(m);
        if (fp.attracting) seeds.push_back(*fp.attracting);
        if (fp.parabolic_point) seeds.push_back(*fp.parabolic_point);
    });
    if (seeds.empty()) return std::nullopt;

    const double scales[] = {1, 2, 0.5, 4, 0.25};
    for (double scale : scales) {
        const double eps = opts.eps * scale;
        std::vector<Arc> arcs;
        for (auto p : seeds) arcs.push_back(arc_around(p, eps));
        arcs = merge_arcs(std::move(arcs));
        for (int round = 0; round < opts.closure_rounds; ++round) {
            if (arcs.size() == 1 && arcs[0].length >= kPi) break;
            std::vector<Arc> imgs;
            for (const auto& m : cfg.alphabet)
                for (const auto& a : arcs) imgs.push_back(image(m, a));
            double clear = kPi;
            for (const auto& j : imgs) clear = std::min(clear, clearance_in(arcs, j));
            if (clear > 0) {
                ConeSearch found{Multicone(arcs), clear > kMergeTol ? Containment::Compact : Containment::StrictOnly,
                                 clear};
                return found;
            }
            std::vector<Arc> grown = arcs;
            for (const auto& j : imgs)
                if (clearance_in(arcs, j) <= 0) grown.push_back(inflate({j}, eps / 2)[0]);
            arcs = merge_arcs(std::move(grown));
        }
    }
    return std::nullopt;
}

double almost_mult_constant(const Multicone& k, const Multicone& k_prime) {
    double gap = kPi;
    for (const auto& j : k_prime.arcs()) gap = std::min(gap, clearance_in(k.arcs(), j));
    if (!(gap > 0)) throw std::invalid_argument("closure of K' is not inside K (non-positive gap)");
    const double s = std::sin(gap);
    return s * s;
}

HyperbolicityCertificate certify_uniform_hyperbolicity(const SystemConfig& cfg, const Multicone& cone,
                                                       int depth) {
    cfg.validate();
    const double margin = containment_clearance(cone, cfg.alphabet);
    if (!(margin > 0)) throw NotCompactlyContained("the alphabet does not map the multicone compactly inside itself");

    HyperbolicityCertificate cert;
    cert.cone = cone;
    cert.margin = margin;
    cert.depth = words_depth_within(cfg.size(), depth, 1 << 16);

    // growth constants: least-squares slope, intercept lowered to a lower envelope
    SystemConfig op = cfg;
    op.norm = NormKind::Operator2;
    const NormTable table(op, cert.depth);
    std::vector<double> xs, ys;
    for (int n = 1; n <= table.depth(); ++n) {
        xs.push_back(n);
        ys.push_back(table.min_log_norm(n));
    }
    double slope = ys.front(), intercept = 0;
    if (xs.size() >= 2) {
        const LineFit fit = fit_line(xs, ys);
        slope = fit.slope;
    }
    if (!(slope > 0)) throw NotCompactlyContained("minimal word norms do not grow");
    intercept = ys[0] - slope * xs[0];
    for (std::size_t i = 0; i < xs.size(); ++i) intercept = std::min(intercept, ys[i] - slope * xs[i]);
    cert.lambda = std::exp(slope);
    cert.c_uh = std::exp(intercept);

    // Angle constant: |Aw| >= |A| sin(dist(w, u_A^-)) for w in the closed image set.
    const std::vector<Arc> k_prime = merge_arcs(cone.images(cfg.alphabet), 0);
    double widest = 0;
    for (const auto& a : k_prime) widest = std::max(widest, a.length);
    const double collar_base = std::tan(std::min(widest, kPi - 1e-9) / 2);
    // words with norm >= threshold keep u^- within a collar of width margin/4 around the complement
    const double threshold = std::sqrt(collar_base / std::tan(margin / 4));
    cert.norm_threshold = threshold;
    int check_depth = cert.depth;
    while (check_depth < 40 && cert.c_uh * std::pow(cert.lambda, check_depth + 1) < threshold &&
           word_count(cfg.size(), 1, check_depth + 1) <= (1 << 20))
        ++check_depth;
    double h = margin - std::atan(collar_base / (threshold * threshold));
    walk_words(cfg.alphabet, {}, 1, check_depth, [&](std::span<const Letter>, const Matrix2& m) {
        if (op_norm(m) >= threshold) return;
        try {
            const ProjPoint u = singular_directions(m).u_minus;
            h = std::min(h, arcs_dist(k_prime, {Arc{u.theta(), 0}}));
        } catch (const DegenerateDirections&) {
        }
    });
    h = std::max(0.0, h);
    cert.c_mult = std::sin(h) * std::sin(h);

    // Directional constant: |AB| >= |A||B| sin(dist(top output of B, u_A^-)).
    const int dd = cert.depth;
    const double tail_norm = cert.c_uh * std::pow(cert.lambda, dd + 1);
    const Multicone back = cone.complement();
    const double r_out = std::atan(1.0 / std::tan(cone.largest_component() / 2) / (tail_norm * tail_norm));
    const double r_in = std::atan(1.0 / std::tan(back.largest_component() / 2) / (tail_norm * tail_norm));
    std::vector<Arc> outs, ins;
    walk_words(cfg.alphabet, {}, 1, dd, [&](std::span<const Letter> w, const Matrix2& m) {
        try {
            const SingularDirections sd = singular_directions(m);
            outs.push_back({proj_act(m, sd.u_plus).theta(), 0});
            ins.push_back({sd.u_minus.theta(), 0});
        } catch (const DegenerateDirections&) {
        }
        if (static_cast<int>(w.size()) != dd) return;
        for (const auto& a : cone.arcs()) outs.push_back(inflate({image(m, a)}, r_out)[0]);
        // w as the suffix of a longer word: its inverse acts last on the complement cone
        const Matrix2 suffix_inv = m.inverse();
        for (const auto& a : back.arcs()) ins.push_back(inflate({image(suffix_inv, a)}, r_in)[0]);
    });
    const double gap = arcs_dist(merge_arcs(outs, 0), merge_arcs(ins, 0));
    cert.c_directional = std::sin(std::min(kPi / 2, gap));
    return cert;
}

const char* to_string(SemidiscreteVerdict v) {
    switch (v) {
        case SemidiscreteVerdict::CertifiedViaInvariantSet: return "certified-via-invariant-set";
        case SemidiscreteVerdict::EvidenceOnly: return "evidence-only";
        case SemidiscreteVerdict::RefutedViaIdentityApproach: return "refuted-via-identity-approach";
    }
    return "?";
}

SemidiscreteReport certify_semidiscrete(const SystemConfig& cfg, int depth) {
    cfg.validate();
    SemidiscreteReport rep;
    const int d = words_depth_within(cfg.size(), depth, 4096);
    bool elliptic = false;
    walk_words(cfg.alphabet, {}, 1, d, [&](std::span<const Letter>, const Matrix2& m) {
        const ClassTag t = classify(m);
        elliptic = elliptic || t == ClassTag::Elliptic || t == ClassTag::Identity;
    });
    if (elliptic) {
        rep.verdict = SemidiscreteVerdict::RefutedViaIdentityApproach;
        rep.notes.push_back("elliptic or identity word present: its powers approach the identity");
        return rep;
    }
    rep.cone = find_invariant_multicone(cfg, {.depth = depth});
    if (rep.cone) {
        rep.verdict = SemidiscreteVerdict::CertifiedViaInvariantSet;
        return rep;
    }
    rep.profile = discreteness_profile(cfg, d);
    if (!rep.profile.empty() && rep.profile.back().identity_distance <= 1e-9) {
        rep.verdict = SemidiscreteVerdict::RefutedViaIdentityApproach;
        rep.notes.push_back("a product lies within 1e-9 of the identity");
    } else {
        rep.verdict = SemidiscreteVerdict::EvidenceOnly;
        rep.notes.push_back("no invariant multicone found; discreteness profile attached");
    }
    return rep;
}

}  // namespace projifs
