#include "projifs/cli.hpp"

#include "projifs/furstenberg.hpp"
#include "projifs/output.hpp"
#include "projifs/pipeline.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <optional>

namespace projifs {

namespace {

struct Options {
    std::string config;
    int depth = 0;  // 0: per-command default
    std::size_t samples = 10000;
    double tol = 1e-8;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> norm;
    std::string out_dir;
    bool svg = false;
    double s = 1.0;
    std::optional<double> c_const;
    int n = 6;
    int grid = 50;
    double t0 = 0, t1 = 1;
    std::string method = "fixed";
};

struct Result {
    int code = kExitOk;
    std::optional<CsvTable> table;
    std::string svg;
    std::vector<std::pair<std::string, std::string>> params;
};

int depth_or(const Options& o, int fallback) { return o.depth > 0 ? o.depth : fallback; }

SystemConfig load(const Options& o, std::ostream& err) {
    if (o.config.empty()) throw std::invalid_argument("--config is required");
    ParsedConfig parsed = parse_config(o.config);
    for (const auto& w : parsed.warnings) err << "warning: " << w << '\n';
    if (o.norm) parsed.config.norm = parse_norm(*o.norm);
    if (o.seed) parsed.config.seed = *o.seed;
    return parsed.config;
}

std::string point_cell(const std::optional<ProjPoint>& p) { return p ? csv_real(p->theta()) : ""; }

std::string arcs_cell(const Multicone& cone) {
    std::string s;
    for (const auto& a : cone.arcs()) s += (s.empty() ? "" : ";") + csv_real(a.start) + ":" + csv_real(a.length);
    return s;
}

std::optional<double> certified_constant(const SystemConfig& cfg) {
    const auto cone = find_invariant_multicone(cfg);
    if (!cone) return std::nullopt;
    const double c = certify_uniform_hyperbolicity(cfg, cone->cone).c_best();
    if (c > 0 && c <= 1) return c;
    return std::nullopt;
}

Result cmd_classify(const Options& o, std::ostream& err) {
    const SystemConfig cfg = load(o, err);
    Result r;
    r.table.emplace(std::vector<std::string>{"letter", "a", "b", "c", "d", "trace", "class", "attracting", "repelling",
                                             "parabolic"});
    for (std::size_t i = 0; i < cfg.size(); ++i) {
        const Matrix2& m = cfg.alphabet[i];
        const FixedPointData fp = fixed_points(m);
        r.table->add({std::to_string(i + 1), csv_real(m.a), csv_real(m.b), csv_real(m.c), csv_real(m.d),
                      csv_real(m.trace()), to_string(fp.tag), point_cell(fp.attracting), point_cell(fp.repelling),
                      point_cell(fp.parabolic_point)});
    }
    if (const auto p = common_fixed_point(cfg)) err << "reducible: common fixed point theta=" << csv_real(p->theta()) << '\n';
    return r;
}

Result cmd_enumerate(const Options& o, std::ostream& err) {
    const SystemConfig cfg = load(o, err);
    const int depth = depth_or(o, 4);
    Result r;
    r.table.emplace(std::vector<std::string>{"word", "length", "a", "b", "c", "d", "norm", "class"});
    check_budget(cfg.size(), 1, depth, 1e6);
    for (int n = 1; n <= depth; ++n)
        enumerate_words(cfg, n, [&](const Word& w, const Matrix2& m) {
            r.table->add({w.str(), std::to_string(n), csv_real(m.a), csv_real(m.b), csv_real(m.c), csv_real(m.d),
                          csv_real(op_norm(m, cfg.norm)), to_string(classify(m))});
        });
    return r;
}

Result cmd_zeta(const Options& o, std::ostream& err) {
    const SystemConfig cfg = load(o, err);
    const NormTable table(cfg, depth_or(o, 12));
    Result r;
    r.table.emplace(std::vector<std::string>{"s", "n", "norm", "z_n", "cumulative"});
    double cumulative = 0;
    for (int m = 1; m <= table.depth(); ++m) {
        const double z = table.zeta(m, o.s);
        cumulative += z;
        r.table->add({csv_real(o.s), std::to_string(m), to_string(cfg.norm), csv_real(z), csv_real(cumulative)});
    }
    return r;
}

Result cmd_pressure(const Options& o, std::ostream& err) {
    const SystemConfig cfg = load(o, err);
    const std::optional<double> c = o.c_const ? o.c_const : certified_constant(cfg);
    const int depth = depth_or(o, 12);
    const PressureEval ev = pressure_bracket(NormTable(cfg, depth), o.s, c);
    Result r;
    r.table.emplace(std::vector<std::string>{"s", "depth", "norm", "lower", "upper", "c"});
    r.table->add({csv_real(o.s), std::to_string(depth), to_string(cfg.norm), csv_real(ev.lower), csv_real(ev.upper),
                  c ? csv_real(*c) : ""});
    return r;
}

Result cmd_critexp(const Options& o, std::ostream& err) {
    const SystemConfig cfg = load(o, err);
    const std::optional<double> c = o.c_const ? o.c_const : certified_constant(cfg);
    const int depth = depth_or(o, 12);
    const Bracket br = critical_exponent_bracket(NormTable(cfg, depth), c);
    for (const auto& note : br.notes) err << "note: " << note << '\n';
    Result r;
    r.table.emplace(std::vector<std::string>{"s_lo", "s_hi", "depth", "norm", "certified"});
    r.table->add({csv_real(br.lo), csv_real(br.hi), std::to_string(depth), to_string(cfg.norm),
                  br.certified ? "true" : "false"});
    return r;
}

Result cloud_result(const PointCloud& cloud, const std::string& title, std::ostream& err) {
    for (const auto& note : cloud.notes) err << "note: " << note << '\n';
    Result r;
    r.table.emplace(std::vector<std::string>{"theta", "psi"});
    for (auto p : cloud.points) {
        const ExtReal y = psi(p);
        r.table->add({csv_real(p.theta()), y.infinite ? "inf" : csv_real(y.value)});
    }
    r.svg = svg_circle_ticks(cloud.points, title);
    return r;
}

Result cmd_attractor(const Options& o, std::ostream& err) {
    const SystemConfig cfg = load(o, err);
    if (o.method == "orbit")
        return cloud_result(attractor_points_orbit(cfg, o.samples, o.tol, cfg.seed), "attractor (orbit)", err);
    if (o.method != "fixed") throw std::invalid_argument("--method must be fixed or orbit");
    return cloud_result(attractor_points_fixedpoint(cfg, depth_or(o, 14)), "attractor", err);
}

Result cmd_repeller(const Options& o, std::ostream& err) {
    const SystemConfig cfg = load(o, err);
    return cloud_result(repeller_points(cfg, depth_or(o, 14)), "repeller", err);
}

Result cmd_dimension(const Options& o, std::ostream& err) {
    const SystemConfig cfg = load(o, err);
    DimensionOptions opts;
    opts.cloud_depth = depth_or(o, 14);
    const DimensionReport rep = dimension_report(cfg, opts);
    for (const auto& note : rep.notes) err << "note: " << note << '\n';
    Result r;
    r.table.emplace(std::vector<std::string>{"box_dim", "box_stderr", "fit_eps_min", "fit_eps_max", "cloud_points",
                                             "delta_lo", "delta_hi", "predicted_lo", "predicted_hi", "semidiscrete",
                                             "verdict"});
    r.table->add({rep.box ? csv_real(rep.box->value) : "", rep.box ? csv_real(rep.box->stderr_) : "",
                  rep.box ? csv_real(rep.box->fit_eps_min) : "", rep.box ? csv_real(rep.box->fit_eps_max) : "",
                  std::to_string(rep.cloud_points), rep.delta ? csv_real(rep.delta->lo) : "",
                  rep.delta ? csv_real(rep.delta->hi) : "", csv_real(rep.predicted_lo), csv_real(rep.predicted_hi),
                  to_string(rep.semidiscrete), rep.verdict == "consistent" ? "consistent with the dimension formula" : rep.verdict});
    if (rep.verdict == "inconclusive") r.code = kExitInconclusive;
    return r;
}

Result cmd_certify_uh(const Options& o, std::ostream& err) {
    const SystemConfig cfg = load(o, err);
    Result r;
    r.table.emplace(std::vector<std::string>{"containment", "clearance", "arcs", "margin", "lambda", "c_uh", "c_mult",
                                             "c_directional", "c_best"});
    for (const auto& m : cfg.alphabet)
        if (classify(m) == ClassTag::Elliptic || classify(m) == ClassTag::Identity) {
            err << "elliptic letter present\n";
            r.code = kExitInconclusive;
            return r;
        }
    ConeSearchOptions copts;
    if (o.depth > 0) copts.depth = o.depth;
    const auto cone = find_invariant_multicone(cfg, copts);
    if (!cone) {
        err << "no invariant multicone found\n";
        r.code = kExitInconclusive;
        return r;
    }
    const HyperbolicityCertificate cert = certify_uniform_hyperbolicity(cfg, cone->cone, copts.depth);
    r.table->add({to_string(cone->containment), csv_real(cone->clearance), arcs_cell(cone->cone), csv_real(cert.margin),
                  csv_real(cert.lambda), csv_real(cert.c_uh), csv_real(cert.c_mult), csv_real(cert.c_directional),
                  csv_real(cert.c_best())});
    if (cone->containment != Containment::Compact) r.code = kExitInconclusive;
    return r;
}

Result cmd_certify_sd(const Options& o, std::ostream& err) {
    const SystemConfig cfg = load(o, err);
    const SemidiscreteReport rep = certify_semidiscrete(cfg, depth_or(o, 8));
    for (const auto& note : rep.notes) err << "note: " << note << '\n';
    Result r;
    r.table.emplace(std::vector<std::string>{"verdict", "cone_arcs", "profile_depth", "identity_distance",
                                             "accumulation_distance"});
    const bool has_profile = !rep.profile.empty();
    r.table->add({to_string(rep.verdict), rep.cone ? arcs_cell(rep.cone->cone) : "",
                  has_profile ? std::to_string(rep.profile.back().depth) : "",
                  has_profile ? csv_real(rep.profile.back().identity_distance) : "",
                  has_profile ? csv_real(rep.profile.back().accumulation_distance) : ""});
    if (rep.verdict == SemidiscreteVerdict::EvidenceOnly) r.code = kExitInconclusive;
    return r;
}

Result cmd_diophantine(const Options& o, std::ostream& err) {
    const SystemConfig cfg = load(o, err);
    const DiophantineProfile prof = diophantine_profile(cfg, depth_or(o, 8));
    Result r;
    r.table.emplace(std::vector<std::string>{"depth", "min_distance", "first", "second", "fitted_c", "exact"});
    for (const auto& d : prof.per_depth)
        r.table->add({std::to_string(d.depth), csv_real(d.min_distance), d.first.str(), d.second.str(),
                      prof.fitted_c ? csv_real(*prof.fitted_c) : "", prof.exact ? "true" : "false"});
    for (const auto& c : prof.collisions)
        err << "collision: " << c.first.str() << " ~ " << c.second.str() << " (" << csv_real(c.distance) << ")\n";
    return r;
}

Result cmd_furstenberg(const Options& o, std::ostream& err) {
    SystemConfig cfg = load(o, err);
    if (!cfg.probs) {
        err << "warning: no probs in the config; using the uniform vector\n";
        cfg.probs = std::vector<double>(cfg.size(), 1.0 / static_cast<double>(cfg.size()));
    }
    const MeasureSample sample = sample_stationary(cfg, o.samples, o.tol, cfg.seed);
    const PointCloud cloud = attractor_points_fixedpoint(cfg, depth_or(o, 14));
    const SupportReport rep = support_dimension_report(cfg, sample, cloud);
    for (const auto& note : rep.notes) err << "note: " << note << '\n';
    Result r;
    r.table.emplace(std::vector<std::string>{"samples", "dropped", "stationarity_residual", "hausdorff",
                                             "sample_dim", "attractor_dim"});
    r.table->add({std::to_string(sample.points.size()), std::to_string(sample.dropped),
                  csv_real(stationarity_residual(sample, cfg)), csv_real(rep.hausdorff),
                  rep.sample_dimension ? csv_real(rep.sample_dimension->value) : "",
                  rep.attractor_dimension ? csv_real(rep.attractor_dimension->value) : ""});
    r.svg = svg_circle_ticks(PointCloud::from_points(sample.points).points, "stationary sample");
    return r;
}

std::vector<std::string> pivot_cells(const Pivot& p) {
    return {p.a0_word.str(), std::to_string(p.power), csv_real(p.u.start), csv_real(p.u.end()),
            csv_real(p.u_prime.start), csv_real(p.u_prime.end()), csv_real(p.v.start), csv_real(p.v.end()),
            csv_real(p.margin)};
}

Result cmd_pivot(const Options& o, std::ostream& err) {
    const SystemConfig cfg = load(o, err);
    Result r;
    r.table.emplace(std::vector<std::string>{"a0", "power", "u_lo", "u_hi", "u_prime_lo", "u_prime_hi", "v_lo", "v_hi",
                                             "margin"});
    try {
        r.table->add(pivot_cells(find_pivot(cfg, depth_or(o, 4))));
    } catch (const NotApplicable&) {
        throw;
    } catch (const std::runtime_error& e) {
        err << e.what() << '\n';
        r.code = kExitInconclusive;
    }
    return r;
}

Result cmd_lower_bound(const Options& o, std::ostream& err) {
    const SystemConfig cfg = load(o, err);
    const Pivot pivot = find_pivot(cfg, depth_or(o, 4));
    err << "pivot A0 = (" << pivot.a0_word.str() << ")^" << pivot.power << '\n';
    Result r;
    r.table.emplace(std::vector<std::string>{"n", "letters", "depth", "c", "delta_lo", "raw", "bound"});
    for (const auto& g : gamma_lower_bounds(cfg, pivot, o.n))
        r.table->add({std::to_string(g.n), std::to_string(g.letters), std::to_string(g.depth), csv_real(g.c),
                      csv_real(g.bracket.lo), csv_real(g.raw), csv_real(g.bound)});
    return r;
}

Result cmd_reduce(const Options& o, std::ostream& err) {
    const SystemConfig cfg = load(o, err);
    std::vector<Matrix2> hyperbolic, elliptic;
    for (const auto& m : cfg.alphabet) {
        const ClassTag t = classify(m);
        (t == ClassTag::Elliptic || t == ClassTag::Identity ? elliptic : hyperbolic).push_back(m);
    }
    Result r;
    if (!elliptic.empty()) {
        const EllipticReduction red = elliptic_reduction(hyperbolic, elliptic);
        r.table.emplace(std::vector<std::string>{"period", "index", "a", "b", "c", "d"});
        for (std::size_t i = 0; i < red.alphabet.size(); ++i) {
            const Matrix2& m = red.alphabet[i];
            r.table->add({std::to_string(red.period), std::to_string(i + 1), csv_real(m.a), csv_real(m.b),
                          csv_real(m.c), csv_real(m.d)});
        }
        return r;
    }
    const ReducibleVerdict v = reducible_dimension(cfg);
    for (const auto& note : v.notes) err << "note: " << note << '\n';
    r.table.emplace(std::vector<std::string>{"case", "dimension", "common_theta", "first_witness", "second_witness"});
    r.table->add({to_string(v.kind), v.dimension_tag, csv_real(v.common_point.theta()),
                  v.first_witness ? v.first_witness->str() : "", v.second_witness ? v.second_witness->str() : ""});
    if (!v.dimension) r.code = kExitInconclusive;
    return r;
}

Result cmd_scan(const Options& o, std::ostream&) {
    if (o.config.empty()) throw std::invalid_argument("--config is required");
    const FamilyConfig fam = parse_family(o.config);
    ScanOptions opts;
    opts.depth = depth_or(o, 12);
    const auto rows = scan_continuity(fam, uniform_grid(o.t0, o.t1, o.grid), opts);
    Result r;
    r.table.emplace(std::vector<std::string>{"t", "dimension", "delta_lo", "delta_hi", "method", "semidiscrete", "jump",
                                             "flagged", "error"});
    std::vector<double> xs, ys;
    for (const auto& row : rows) {
        r.table->add({csv_real(row.t), row.dimension ? csv_real(*row.dimension) : "", csv_real(row.delta_lo),
                      csv_real(row.delta_hi), row.method, row.semidiscrete, csv_real(row.jump),
                      row.flagged ? "true" : "false", row.error});
        xs.push_back(row.t);
        ys.push_back(row.dimension.value_or(std::nan("")));
    }
    r.svg = svg_line_plot(xs, ys, "t", "dimension estimate");
    return r;
}

Result cmd_report(const Options& o, std::ostream& err) {
    const SystemConfig cfg = load(o, err);
    Result r;
    r.table.emplace(std::vector<std::string>{"key", "value"});
    std::string classes;
    for (const auto& m : cfg.alphabet) classes += (classes.empty() ? "" : ";") + std::string(to_string(classify(m)));
    r.table->add({"letters", std::to_string(cfg.size())});
    r.table->add({"classes", classes});
    const auto common = common_fixed_point(cfg);
    r.table->add({"reducible", common ? "true" : "false"});
    DimensionOptions opts;
    opts.cloud_depth = depth_or(o, 14);
    const DimensionReport rep = dimension_report(cfg, opts);
    r.table->add({"semidiscrete", to_string(rep.semidiscrete)});
    if (rep.certificate) {
        r.table->add({"uh_margin", csv_real(rep.certificate->margin)});
        r.table->add({"uh_c_best", csv_real(rep.certificate->c_best())});
    }
    if (rep.reducible) r.table->add({"reducible_case", to_string(rep.reducible->kind)});
    for (const auto& q : rep.quick) r.table->add({"quick_bound_" + q.reason, csv_real(q.bound)});
    if (rep.delta) {
        r.table->add({"delta_lo", csv_real(rep.delta->lo)});
        r.table->add({"delta_hi", csv_real(rep.delta->hi)});
        r.table->add({"delta_depth", std::to_string(rep.delta->depth_used)});
    }
    if (rep.box) {
        r.table->add({"box_dim", csv_real(rep.box->value)});
        r.table->add({"box_stderr", csv_real(rep.box->stderr_)});
    }
    r.table->add({"cloud_points", std::to_string(rep.cloud_points)});
    r.table->add({"predicted_lo", csv_real(rep.predicted_lo)});
    r.table->add({"predicted_hi", csv_real(rep.predicted_hi)});
    r.table->add({"verdict", rep.verdict});
    return r;
}

using Handler = std::function<Result(const Options&, std::ostream&)>;

const std::vector<std::pair<std::string, std::pair<Handler, std::string>>>& commands() {
    static const std::vector<std::pair<std::string, std::pair<Handler, std::string>>> table = {
        {"classify", {cmd_classify, "classify each letter and its fixed points"}},
        {"enumerate", {cmd_enumerate, "list words up to --depth with products and norms"}},
        {"zeta", {cmd_zeta, "partial zeta sums at --s"}},
        {"pressure", {cmd_pressure, "pressure bounds at --s"}},
        {"critexp", {cmd_critexp, "bracket the critical exponent"}},
        {"attractor", {cmd_attractor, "attractor point cloud"}},
        {"repeller", {cmd_repeller, "repeller point cloud"}},
        {"dimension", {cmd_dimension, "box dimension against the critical exponent"}},
        {"certify-uh", {cmd_certify_uh, "uniform hyperbolicity certificate"}},
        {"certify-sd", {cmd_certify_sd, "semidiscreteness certificate"}},
        {"diophantine", {cmd_diophantine, "per-depth minimal word distances"}},
        {"furstenberg", {cmd_furstenberg, "sample the stationary measure"}},
        {"pivot", {cmd_pivot, "pivot word and intervals"}},
        {"lower-bound", {cmd_lower_bound, "dimension lower bounds from the pivot subsystems"}},
        {"reduce", {cmd_reduce, "reducible-case analysis or elliptic reduction"}},
        {"scan-continuity", {cmd_scan, "dimension along a one-parameter family"}},
        {"report", {cmd_report, "summary of the full pipeline"}},
    };
    return table;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Projective iterated function systems of SL(2,R) matrices", "projifs"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Options o;
    for (const auto& [name, entry] : commands()) {
        CLI::App* sub = app.add_subcommand(name, entry.second);
        sub->add_option("--config", o.config, "system config (family file for scan-continuity)");
        sub->add_option("--depth", o.depth, "word depth");
        sub->add_option("--samples", o.samples, "number of random samples");
        sub->add_option("--tol", o.tol, "orbit convergence tolerance");
        sub->add_option("--seed", o.seed, "RNG seed (overrides the config)");
        sub->add_option("--norm", o.norm, "matrix norm")->check(CLI::IsMember({"op2", "max"}));
        sub->add_option("--out", o.out_dir, "directory for CSV, SVG and manifest");
        sub->add_flag("--svg", o.svg, "write an SVG next to the CSV (needs --out)");
        sub->add_option("--s", o.s, "exponent for zeta and pressure");
        sub->add_option("--c", o.c_const, "almost-multiplicativity constant for pressure and critexp");
        sub->add_option("--n", o.n, "largest n for lower-bound");
        sub->add_option("--grid", o.grid, "grid points for scan-continuity");
        sub->add_option("--t0", o.t0, "first parameter value");
        sub->add_option("--t1", o.t1, "last parameter value");
        sub->add_option("--method", o.method, "attractor method: fixed or orbit");
    }

    std::vector<const char*> argv{"projifs"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    const auto it = std::find_if(commands().begin(), commands().end(), [&](const auto& c) { return c.first == name; });
    const auto start = std::chrono::steady_clock::now();
    Result result;
    try {
        result = it->second.first(o, err);
    } catch (const BudgetExceeded& e) {
        out << "# partial: " << e.what() << '\n';
        err << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    if (result.table) result.table->write(out);

    if (!o.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(o.out_dir);
        RunManifest m;
        m.config_path = o.config;
        m.command = name;
        m.argv = args;
        m.version = kVersion;
        m.seed = o.seed.value_or(1);
        if (result.table) {
            const fs::path csv = fs::path(o.out_dir) / (name + ".csv");
            std::ofstream f(csv);
            result.table->write(f);
            m.outputs.push_back(csv.string());
        }
        if (o.svg && !result.svg.empty()) {
            const fs::path svg = fs::path(o.out_dir) / (name + ".svg");
            std::ofstream(svg) << result.svg;
            m.outputs.push_back(svg.string());
        }
        m.parameters = {{"depth", std::to_string(o.depth)}, {"samples", std::to_string(o.samples)},
                        {"tol", csv_real(o.tol)},          {"s", csv_real(o.s)},
                        {"n", std::to_string(o.n)},         {"grid", std::to_string(o.grid)},
                        {"method", o.method}};
        m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_manifest(m, fs::path(o.out_dir) / "manifest.json");
    }
    return result.code;
}

}  // namespace projifs
