#include "agora/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "agora/errors.hpp"
#include "agora/parallel.hpp"
#include "agora/stats.hpp"

namespace agora {
namespace {

void require_complete_level(const BranchingTree& tree, int level) {
    if (level < 0) throw ValidationError("level must be >= 0");
    if (tree.truncated_by != Truncation::ByTime)
        throw IncompleteLevelError(
            "level statistics need a time-truncated tree; vertex-count truncation "
            "biases level sums");
    if (tree.depth_limit && level > *tree.depth_limit)
        throw IncompleteLevelError("level " + std::to_string(level) +
                                   " lies beyond the generation depth limit " +
                                   std::to_string(*tree.depth_limit));
}

// Replica tree for the tree-level identities: times only, depth-pruned at
// the deepest level used. Profile and spatial dimension are irrelevant to
// the PWIT laws, so any consistent parameter set works.
BranchingTree diagnostics_tree(double rho, double horizon_z, int max_depth,
                               std::uint64_t seed) {
    ProcessParams params = derive_params_from_rho(1, rho, ProfileKind::HardCutoff, seed);
    GenOptions opt;
    opt.max_vertices = 1 << 22;  // safety stop; the time horizon governs
    opt.max_time = std::exp(horizon_z / rho);
    opt.max_depth = max_depth;
    opt.with_locations = false;
    return generate_tree(params, opt);
}

bool pass_3se(double theory, double mean, double se) {
    if (se == 0.0)
        return std::abs(mean - theory) <= 1e-12 * std::max(1.0, std::abs(theory));
    return std::abs(mean - theory) <= 3.0 * se;
}

CheckResult make_result(std::string identity, std::string detail, double theory,
                        const MeanStats& ms) {
    CheckResult r;
    r.identity = std::move(identity);
    r.detail = std::move(detail);
    r.theoretical = theory;
    r.empirical = ms.mean;
    r.std_error = ms.std_error;
    r.replicas = ms.n;
    r.pass = pass_3se(theory, ms.mean, ms.std_error);
    return r;
}

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

}  // namespace

double level_weight_sum(const BranchingTree& tree, int level, double lambda) {
    require_complete_level(tree, level);
    if (!(lambda > 0.0)) throw ValidationError("level_weight_sum: lambda must be > 0");
    // compensated sum: replica aggregation must not depend on chunking
    double sum = 0.0, comp = 0.0;
    for (int v = 0; v < tree.size(); ++v) {
        if (tree.depth[v] != level) continue;
        const double term = std::pow(tree.tau[v], -lambda) - comp;
        const double next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    return sum;
}

std::vector<double> martingale_trace(const BranchingTree& tree, int n_max) {
    if (n_max < 1) throw ValidationError("martingale_trace: n_max must be >= 1");
    require_complete_level(tree, n_max);
    std::vector<double> w(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        w[static_cast<std::size_t>(n) - 1] = level_weight_sum(tree, n, tree.params.rho);
    }
    return w;
}

long long level_count_below(const BranchingTree& tree, int level, double x) {
    require_complete_level(tree, level);
    if (x < 0.0) throw ValidationError("level_count_below: x must be >= 0");
    const double rho = tree.params.rho;
    if (x > rho * std::log(tree.horizon) * (1.0 + 1e-12))
        throw HorizonError("level_count_below: x exceeds rho*log(horizon); "
                           "the simulated horizon is too small");
    long long count = 0;
    for (int v = 0; v < tree.size(); ++v) {
        if (tree.depth[v] == level && rho * std::log(tree.tau[v]) <= x) ++count;
    }
    return count;
}

std::vector<std::pair<int, double>> limit_uniform_weights(const BranchingTree& tree,
                                                          int level, int lookahead) {
    if (lookahead < 1) throw ValidationError("limit_uniform_weights: lookahead must be >= 1");
    const int target = level + lookahead;
    require_complete_level(tree, target);

    std::vector<std::pair<int, double>> out;
    std::vector<int> slot(static_cast<std::size_t>(tree.size()), -1);
    for (int v = 0; v < tree.size(); ++v) {
        if (tree.depth[v] == level) {
            slot[static_cast<std::size_t>(v)] = static_cast<int>(out.size());
            out.emplace_back(v, 0.0);
        }
    }
    const double rho = tree.params.rho;
    for (int v = 0; v < tree.size(); ++v) {
        if (tree.depth[v] != target) continue;
        int a = v;
        for (int step = 0; step < lookahead; ++step) a = tree.parent[a];
        out[static_cast<std::size_t>(slot[static_cast<std::size_t>(a)])].second +=
            std::pow(tree.tau[v], -rho);
    }
    return out;
}

std::vector<CheckResult> check_moment_identity(const DiagnosticsConfig& cfg) {
    if (cfg.replicas < 2) throw ValidationError("diagnostics: need >= 2 replicas");
    std::vector<double> lambdas = cfg.lambdas;
    if (lambdas.empty()) lambdas = {cfg.rho, 2.0 * cfg.rho};
    const int levels = cfg.levels;
    const std::size_t cells = lambdas.size() * static_cast<std::size_t>(levels);

    std::vector<std::vector<double>> samples(cells);
    for (auto& s : samples) s.resize(static_cast<std::size_t>(cfg.replicas));
    parallel_for(
        cfg.replicas,
        [&](int r) {
            const BranchingTree tree = diagnostics_tree(
                cfg.rho, cfg.horizon_z, levels, derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
            for (std::size_t li = 0; li < lambdas.size(); ++li) {
                for (int n = 1; n <= levels; ++n) {
                    samples[li * levels + (n - 1)][static_cast<std::size_t>(r)] =
                        level_weight_sum(tree, n, lambdas[li]);
                }
            }
        },
        cfg.threads);

    std::vector<CheckResult> results;
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
        for (int n = 1; n <= levels; ++n) {
            const double theory = std::pow(cfg.rho / lambdas[li], n);
            const MeanStats ms = mean_and_se(samples[li * levels + (n - 1)]);
            results.push_back(make_result(
                "moment",
                "rho=" + std::to_string(cfg.rho) + " lambda=" + std::to_string(lambdas[li]) +
                    " n=" + std::to_string(n),
                theory, ms));
        }
    }
    return results;
}

std::vector<CheckResult> check_martingale(const DiagnosticsConfig& cfg) {
    if (cfg.replicas < 2) throw ValidationError("diagnostics: need >= 2 replicas");
    const int levels = cfg.levels;
    std::vector<std::vector<double>> w(static_cast<std::size_t>(levels));
    std::vector<std::vector<double>> w2(static_cast<std::size_t>(levels));
    for (auto& v : w) v.resize(static_cast<std::size_t>(cfg.replicas));
    for (auto& v : w2) v.resize(static_cast<std::size_t>(cfg.replicas));
    std::vector<double> telescoping_dev(static_cast<std::size_t>(cfg.replicas), 0.0);

    parallel_for(
        cfg.replicas,
        [&](int r) {
            const BranchingTree tree = diagnostics_tree(
                cfg.rho, cfg.horizon_z, levels, derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
            const std::vector<double> trace = martingale_trace(tree, levels);
            for (int n = 1; n <= levels; ++n) {
                const double wn = trace[static_cast<std::size_t>(n) - 1];
                w[static_cast<std::size_t>(n) - 1][static_cast<std::size_t>(r)] = wn;
                w2[static_cast<std::size_t>(n) - 1][static_cast<std::size_t>(r)] = wn * wn;
            }
            // per-tree telescoping: sum_{|v|=n} Z(v) W_{N-n}(v) == W_N
            const double w_deep = trace[static_cast<std::size_t>(levels) - 1];
            double max_dev = 0.0;
            for (int n = 1; n < levels; ++n) {
                double total = 0.0;
                for (const auto& [v, weight] : limit_uniform_weights(tree, n, levels - n)) {
                    total += weight;
                }
                max_dev = std::max(max_dev, std::abs(total - w_deep) /
                                                std::max(1.0, std::abs(w_deep)));
            }
            telescoping_dev[static_cast<std::size_t>(r)] = max_dev;
        },
        cfg.threads);

    std::vector<CheckResult> results;
    for (int n = 1; n <= levels; ++n) {
        results.push_back(make_result("martingale_mean", "n=" + std::to_string(n), 1.0,
                                      mean_and_se(w[static_cast<std::size_t>(n) - 1])));
        const double theory2 = 2.0 - std::pow(2.0, -n);
        results.push_back(make_result("martingale_second_moment", "n=" + std::to_string(n),
                                      theory2,
                                      mean_and_se(w2[static_cast<std::size_t>(n) - 1])));
    }
    CheckResult tel;
    tel.identity = "telescoping";
    tel.detail = "max relative deviation over replicas and levels";
    tel.theoretical = 0.0;
    tel.empirical = *std::max_element(telescoping_dev.begin(), telescoping_dev.end());
    tel.std_error = 0.0;
    tel.replicas = static_cast<std::size_t>(cfg.replicas);
    tel.pass = tel.empirical <= 1e-10;
    results.push_back(tel);
    return results;
}

std::vector<CheckResult> check_level_counts(const DiagnosticsConfig& cfg) {
    if (cfg.replicas < 2) throw ValidationError("diagnostics: need >= 2 replicas");
    std::vector<double> xs = cfg.xs;
    if (xs.empty()) xs = {0.5, 1.0};
    const int levels = cfg.levels;
    const double x_max = *std::max_element(xs.begin(), xs.end());
    // The count statistic is exact as soon as the horizon covers x, so the
    // horizon only needs rho*log T >= max x.
    const double z = std::max(cfg.horizon_z, x_max);

    const std::size_t cells = xs.size() * static_cast<std::size_t>(levels);
    std::vector<std::vector<double>> samples(cells);
    for (auto& s : samples) s.resize(static_cast<std::size_t>(cfg.replicas));
    parallel_for(
        cfg.replicas,
        [&](int r) {
            const BranchingTree tree = diagnostics_tree(
                cfg.rho, z, levels, derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
            for (std::size_t xi = 0; xi < xs.size(); ++xi) {
                for (int n = 1; n <= levels; ++n) {
                    samples[xi * levels + (n - 1)][static_cast<std::size_t>(r)] =
                        static_cast<double>(level_count_below(tree, n, xs[xi]));
                }
            }
        },
        cfg.threads);

    std::vector<CheckResult> results;
    for (std::size_t xi = 0; xi < xs.size(); ++xi) {
        for (int n = 1; n <= levels; ++n) {
            const double theory = std::pow(xs[xi], n) / factorial(n);
            results.push_back(make_result(
                "levelcount",
                "x=" + std::to_string(xs[xi]) + " n=" + std::to_string(n), theory,
                mean_and_se(samples[xi * levels + (n - 1)])));
        }
    }
    return results;
}

CheckResult check_growth(const GrowthCheckConfig& cfg) {
    if (cfg.replicas < 2) throw ValidationError("diagnostics: need >= 2 replicas");
    std::vector<GrowthTrace> traces(static_cast<std::size_t>(cfg.replicas));
    parallel_for(
        cfg.replicas,
        [&](int r) {
            ProcessParams params = derive_params_from_rho(
                1, cfg.rho, ProfileKind::HardCutoff,
                derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
            GenOptions opt;
            opt.max_vertices = cfg.vertices;
            opt.with_locations = false;
            traces[static_cast<std::size_t>(r)] = generate_tree(params, opt).trace;
        },
        cfg.threads);
    const GrowthFit fit = growth_exponent(traces, cfg.rho);
    CheckResult r;
    r.identity = "growth";
    r.detail = "rho=" + std::to_string(cfg.rho) + " replicas=" + std::to_string(cfg.replicas) +
               " vertices=" + std::to_string(cfg.vertices);
    r.theoretical = cfg.rho;
    r.empirical = fit.slope;
    r.std_error = fit.std_error;
    r.replicas = static_cast<std::size_t>(cfg.replicas);
    r.pass = std::abs(fit.slope - cfg.rho) <= cfg.tolerance_frac * cfg.rho;
    return r;
}

}  // namespace agora
