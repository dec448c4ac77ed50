#include "agora/cli.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "agora/branching.hpp"
#include "agora/diagnostics.hpp"
#include "agora/dimension.hpp"
#include "agora/discrete.hpp"
#include "agora/errors.hpp"
#include "agora/io.hpp"
#include "agora/sha256.hpp"
#include "agora/version.hpp"

namespace agora {
namespace {

namespace fs = std::filesystem;

std::string utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

double parse_alpha_ratio(const std::string& s) {
    const std::size_t slash = s.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 >= s.size())
        throw ValidationError("--alpha-ratio expects P/Q, e.g. 10/9");
    try {
        const double p = std::stod(s.substr(0, slash));
        const double q = std::stod(s.substr(slash + 1));
        if (!(q > 0.0) || !(p > 0.0))
            throw ValidationError("--alpha-ratio parts must be positive");
        return p / q;
    } catch (const std::invalid_argument&) {
        throw ValidationError("--alpha-ratio expects numeric P/Q");
    } catch (const std::out_of_range&) {
        throw ValidationError("--alpha-ratio out of range");
    }
}

struct GenerateArgs {
    std::string model;
    int dim = 2;
    std::optional<double> alpha;
    std::string alpha_ratio;
    std::optional<double> rho;
    double theta = 1.0;
    std::string profile = "gaussian";
    std::int64_t n = 10000;
    std::optional<double> max_time;
    std::optional<double> r_count;
    std::uint64_t seed = 1;
    std::string out;
    std::string manifest_path;
    std::string from_manifest;
};

RunManifest generate_and_write(const GenerateArgs& a) {
    RunManifest m;
    m.model = a.model;
    m.d = a.dim;
    m.seed = a.seed;
    m.n = a.n;
    m.library_version = kLibraryVersion;
    m.created_utc = utc_now();

    if (a.out.empty()) throw ValidationError("generate: --out is required");

    double alpha = 0.0;
    int alpha_sources = 0;
    if (a.alpha) {
        alpha = *a.alpha;
        ++alpha_sources;
    }
    if (!a.alpha_ratio.empty()) {
        alpha = parse_alpha_ratio(a.alpha_ratio);
        ++alpha_sources;
    }

    if (a.model == "ct") {
        if (a.rho) ++alpha_sources;
        if (alpha_sources != 1)
            throw ValidationError(
                "generate --model ct: give exactly one of --alpha, --alpha-ratio, --rho");
        const ProfileKind profile = profile_from_name(a.profile);
        const ProcessParams params =
            a.rho ? derive_params_from_rho(a.dim, *a.rho, profile, a.seed)
                  : derive_params(a.dim, alpha, profile, a.seed);
        GenOptions opt;
        opt.max_vertices = a.n;
        opt.max_time = a.max_time;
        const BranchingTree tree = generate_tree(params, opt);
        write_points_csv(tree, a.out);
        m.alpha = params.alpha;
        m.rho = params.rho;
        m.theta = params.theta;
        m.beta = params.beta;
        m.profile = profile_name(profile);
        m.max_time = a.max_time;
    } else if (a.model == "smooth" || a.model == "hard") {
        if (alpha_sources != 1)
            throw ValidationError(
                "generate --model smooth|hard: give exactly one of --alpha, --alpha-ratio");
        if (a.rho)
            throw ValidationError("generate: --rho applies to the continuous model only");
        AgoraConfig cfg;
        cfg.d = a.dim;
        cfg.alpha = alpha;
        cfg.theta = a.theta;
        cfg.n_points = a.n;
        cfg.model = a.model == "smooth" ? DiscreteModel::Smooth : DiscreteModel::HardThreshold;
        cfg.r_count_override = a.r_count;
        cfg.seed = a.seed;
        const PointTree tree = generate_discrete(cfg);
        write_points_csv(tree, a.out);
        m.alpha = alpha;
        m.rho = alpha / a.dim;
        m.theta = a.theta;
        m.r_count = a.r_count;
    } else {
        throw ValidationError("generate: --model must be ct|smooth|hard");
    }

    m.outputs.emplace_back(fs::path(a.out).filename().string(), sha256_file(a.out));
    const std::string mpath =
        a.manifest_path.empty() ? a.out + ".manifest.json" : a.manifest_path;
    write_manifest(m, mpath);
    return m;
}

int run_replay(const GenerateArgs& a) {
    const RunManifest recorded = read_manifest(a.from_manifest);
    if (recorded.outputs.empty())
        throw ValidationError(a.from_manifest + ": manifest lists no outputs");

    GenerateArgs r;
    r.model = recorded.model;
    r.dim = recorded.d;
    r.alpha = recorded.alpha;
    r.theta = recorded.theta;
    if (!recorded.profile.empty()) r.profile = recorded.profile;
    r.n = recorded.n;
    r.max_time = recorded.max_time;
    r.r_count = recorded.r_count;
    r.seed = recorded.seed;
    r.out = a.out.empty()
                ? (fs::path(a.from_manifest).parent_path() / recorded.outputs[0].first).string()
                : a.out;
    r.manifest_path = a.manifest_path.empty() ? r.out + ".manifest.json" : a.manifest_path;
    const RunManifest replayed = generate_and_write(r);

    const bool match = replayed.outputs[0].second == recorded.outputs[0].second;
    std::cout << "replayed " << r.out << " sha256=" << replayed.outputs[0].second
              << " reproduced=" << (match ? "true" : "false") << "\n";
    if (!match) {
        std::cerr << "replay mismatch: recorded sha256 " << recorded.outputs[0].second << "\n";
        return 2;
    }
    return 0;
}

int run_generate(const GenerateArgs& a) {
    if (!a.from_manifest.empty()) return run_replay(a);
    const RunManifest m = generate_and_write(a);
    std::cout << "wrote " << a.out << " (" << m.outputs[0].second.substr(0, 12) << "..., model "
              << m.model << ", n " << m.n << ")\n";
    return 0;
}

struct EstimateArgs {
    std::string input;
    std::string method;
    std::optional<double> eps_min;
    std::optional<double> eps_max;
    int eps_steps = 12;
    std::string json_out;
    std::string svg_out;
};

int run_estimate(const EstimateArgs& a) {
    const PointsFile pf = read_points_csv(a.input);
    DimMethod method;
    if (a.method == "boxcount") {
        method = DimMethod::BoxCount;
    } else if (a.method == "corrsum") {
        method = DimMethod::CorrelationSum;
    } else {
        throw ValidationError("estimate-dim: --method must be boxcount|corrsum");
    }

    std::vector<double> eps;
    if (a.eps_min || a.eps_max) {
        if (!a.eps_min || !a.eps_max)
            throw ValidationError("estimate-dim: give both --eps-min and --eps-max or neither");
        if (!(*a.eps_min > 0.0) || !(*a.eps_min < *a.eps_max))
            throw ValidationError("estimate-dim: need 0 < eps-min < eps-max");
        if (a.eps_steps < 2) throw ValidationError("estimate-dim: --eps-steps must be >= 2");
        const double ratio = std::log(*a.eps_min / *a.eps_max) / (a.eps_steps - 1);
        for (int i = 0; i < a.eps_steps; ++i) eps.push_back(*a.eps_max * std::exp(ratio * i));
    } else {
        eps = default_eps_sweep(pf.points, pf.d, a.eps_steps);
    }

    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["kind"] = "dimension_fit";
    j["input"] = a.input;
    j["method"] = a.method;
    j["n_points"] = pf.size();
    DimFit fit;
    if (method == DimMethod::BoxCount) {
        std::vector<double> stats;
        stats.reserve(eps.size());
        for (double e : eps) stats.push_back(static_cast<double>(box_count(pf.points, pf.d, e)));
        fit = fit_dimension(method, eps, stats);
        j["subsample"] = nullptr;
    } else {
        const CorrSums cs = correlation_sums(pf.points, pf.d, eps);
        fit = fit_dimension(method, eps, cs.c);
        if (cs.subsampled) {
            j["subsample"] = {{"seed", cs.subsample_seed}, {"size", cs.n_used}};
        } else {
            j["subsample"] = nullptr;
        }
    }
    j["eps"] = fit.eps;
    j["stat"] = fit.stat;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["stderr"] = fit.slope_stderr;
    j["fit_window"] = {fit.win_lo, fit.win_hi};

    if (!a.json_out.empty()) {
        std::ofstream out(a.json_out, std::ios::binary);
        if (!out) throw IoError(a.json_out, "cannot open for writing");
        out << j.dump(2) << "\n";
    } else {
        std::cout << j.dump(2) << "\n";
    }
    if (!a.svg_out.empty()) emit_loglog_svg(fit, a.svg_out);
    return 0;
}

struct DiagnoseArgs {
    std::string identity;
    std::optional<double> rho;
    std::optional<double> alpha;
    int dim = 2;
    int replicas = 0;
    int levels = 3;
    std::vector<double> lambdas;
    std::vector<double> xs;
    double horizon_z = 9.0;
    std::int64_t n = 10000;
    std::uint64_t seed = 1;
    int threads = 0;
    std::string json_out;
};

int run_diagnose(const DiagnoseArgs& a) {
    double rho;
    if (a.rho) {
        rho = *a.rho;
    } else if (a.alpha) {
        rho = *a.alpha / a.dim;
    } else {
        throw ValidationError("diagnose: give --rho, or --alpha with --dim");
    }

    std::vector<CheckResult> results;
    if (a.identity == "growth") {
        GrowthCheckConfig cfg;
        cfg.rho = rho;
        cfg.replicas = a.replicas > 0 ? a.replicas : 50;
        cfg.vertices = a.n;
        cfg.seed = a.seed;
        cfg.threads = a.threads;
        results.push_back(check_growth(cfg));
    } else {
        DiagnosticsConfig cfg;
        cfg.rho = rho;
        cfg.replicas = a.replicas > 0 ? a.replicas : 5000;
        cfg.levels = a.levels;
        cfg.lambdas = a.lambdas;
        cfg.xs = a.xs;
        cfg.horizon_z = a.horizon_z;
        cfg.seed = a.seed;
        cfg.threads = a.threads;
        if (a.identity == "moment") {
            results = check_moment_identity(cfg);
        } else if (a.identity == "martingale") {
            results = check_martingale(cfg);
        } else if (a.identity == "levelcount") {
            results = check_level_counts(cfg);
        } else {
            throw ValidationError(
                "diagnose: --identity must be moment|martingale|levelcount|growth");
        }
    }

    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["kind"] = "diagnostics_report";
    j["identity"] = a.identity;
    j["rho"] = rho;
    bool all_pass = true;
    nlohmann::json checks = nlohmann::json::array();
    for (const CheckResult& r : results) {
        checks.push_back({{"identity", r.identity},
                          {"detail", r.detail},
                          {"theoretical", r.theoretical},
                          {"empirical", r.empirical},
                          {"std_error", r.std_error},
                          {"replicas", r.replicas},
                          {"pass", r.pass}});
        all_pass = all_pass && r.pass;
    }
    j["checks"] = checks;
    j["all_pass"] = all_pass;

    if (!a.json_out.empty()) {
        std::ofstream out(a.json_out, std::ios::binary);
        if (!out) throw IoError(a.json_out, "cannot open for writing");
        out << j.dump(2) << "\n";
    } else {
        std::cout << j.dump(2) << "\n";
    }
    return 0;
}

struct PlotArgs {
    std::string input;
    std::string svg_out;
    bool edges = false;
};

int run_plot(const PlotArgs& a) {
    const PointsFile pf = read_points_csv(a.input);
    ScatterOptions opt;
    opt.edges = a.edges;
    emit_scatter_svg(pf.points, pf.d, &pf.parent, a.svg_out, opt);
    std::cout << "wrote " << a.svg_out << " (" << pf.size() << " points)\n";
    return 0;
}

int dispatch(int argc, const char* const* argv) {
    CLI::App app{"random-fractal point process simulator and verifier"};
    app.require_subcommand(1);

    GenerateArgs g;
    CLI::App* gen = app.add_subcommand("generate", "generate a point set");
    gen->add_option("--model", g.model, "ct|smooth|hard");
    gen->add_option("--dim", g.dim, "spatial dimension");
    gen->add_option("--alpha", g.alpha, "target dimension");
    gen->add_option("--alpha-ratio", g.alpha_ratio, "target dimension as P/Q (e.g. 10/9)");
    gen->add_option("--rho", g.rho, "growth exponent (ct only)");
    gen->add_option("--theta", g.theta, "innovation parameter (discrete models)");
    gen->add_option("--profile", g.profile, "exponential|gaussian|hardcutoff (ct)");
    gen->add_option("--n", g.n, "vertex budget (ct) / accepted points (discrete)");
    gen->add_option("--max-time", g.max_time, "time horizon (ct)");
    gen->add_option("--r-count", g.r_count, "hard model count-radius override");
    gen->add_option("--seed", g.seed, "RNG seed");
    gen->add_option("--out", g.out, "output CSV path");
    gen->add_option("--manifest", g.manifest_path, "manifest path (default <out>.manifest.json)");
    gen->add_option("--from-manifest", g.from_manifest, "replay a recorded run");

    EstimateArgs e;
    CLI::App* est = app.add_subcommand("estimate-dim", "fractal dimension estimate");
    est->add_option("--input", e.input, "points CSV")->required();
    est->add_option("--method", e.method, "boxcount|corrsum")->required();
    est->add_option("--eps-min", e.eps_min, "smallest scale");
    est->add_option("--eps-max", e.eps_max, "largest scale");
    est->add_option("--eps-steps", e.eps_steps, "number of scales (default 12)");
    est->add_option("--json-out", e.json_out, "write the fit report here");
    est->add_option("--svg-out", e.svg_out, "write a log-log plot here");

    DiagnoseArgs di;
    CLI::App* diag = app.add_subcommand("diagnose", "Monte Carlo identity checks");
    diag->add_option("--identity", di.identity, "moment|martingale|levelcount|growth")
        ->required();
    diag->add_option("--rho", di.rho, "growth exponent");
    diag->add_option("--alpha", di.alpha, "target dimension (with --dim)");
    diag->add_option("--dim", di.dim, "spatial dimension for --alpha");
    diag->add_option("--replicas", di.replicas, "Monte Carlo replicas");
    diag->add_option("--levels", di.levels, "deepest tree level checked");
    diag->add_option("--lambda", di.lambdas, "moment exponents (default rho, 2rho)");
    diag->add_option("--x", di.xs, "level-count thresholds (default 0.5, 1.0)");
    diag->add_option("--horizon-z", di.horizon_z, "rho * log T for replica trees");
    diag->add_option("--n", di.n, "vertices per replica (growth)");
    diag->add_option("--seed", di.seed, "RNG seed");
    diag->add_option("--threads", di.threads, "worker threads (0 = auto)");
    diag->add_option("--json-out", di.json_out, "write the report here");

    PlotArgs p;
    CLI::App* plot = app.add_subcommand("plot", "scatter SVG of a point set");
    plot->add_option("--input", p.input, "points CSV")->required();
    plot->add_option("--svg-out", p.svg_out, "output SVG")->required();
    plot->add_flag("--edges", p.edges, "draw parent edges");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& h) {
        app.exit(h);
        return 0;
    } catch (const CLI::ParseError& pe) {
        app.exit(pe);
        return 1;
    }

    if (gen->parsed()) return run_generate(g);
    if (est->parsed()) return run_estimate(e);
    if (diag->parsed()) return run_diagnose(di);
    if (plot->parsed()) return run_plot(p);
    return 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    try {
        return dispatch(argc, argv);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

int cli_main(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("agora");
    for (const std::string& a : args) argv.push_back(a.c_str());
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace agora
