#include "sblfem/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

#include "sblfem/assembly.hpp"
#include "sblfem/errors.hpp"

namespace sblfem {

std::string_view to_string(ErrorMode mode) { return mode == ErrorMode::Exact ? "exact" : "reference"; }

ErrorMode error_mode_from_string(std::string_view text) {
    if (text == "exact") return ErrorMode::Exact;
    if (text == "reference") return ErrorMode::Reference;
    throw ConfigError("unknown error mode '" + std::string(text) + "' (expected exact or reference)");
}

void validate_config(const SweepConfig& config) {
    const auto names = registry_names();
    if (std::find(names.begin(), names.end(), config.problem) == names.end()) {
        throw ConfigError("unknown problem '" + config.problem + "'");
    }
    if (config.pairs.empty()) throw ConfigError("sweep needs at least one (eps1, eps2) pair");
    for (const EpsPair& pair : config.pairs) check_parameters(pair.eps1, pair.eps2);
    if (config.p_min < 1 || config.p_max < config.p_min) {
        throw ConfigError("p range must satisfy 1 <= p-min <= p-max");
    }
    if (!(config.kappa > 0.0)) throw ConfigError("kappa must be positive");
    if (config.quadrature.levels < 0 || config.quadrature.points < 0) {
        throw ConfigError("quadrature overrides must be non-negative");
    }
}

int expected_dof(MeshBranch branch, int p) {
    switch (branch) {
        case MeshBranch::Asymptotic: return p - 1;
        case MeshBranch::RightLayerOnly: return 2 * p - 1;
        case MeshBranch::TwoLayers: return 3 * p - 1;
        case MeshBranch::Uniform: break;
    }
    throw DomainError("expected_dof: uniform meshes have no fixed DOF formula");
}

ConvergenceRecord run_cell(const SweepConfig& config, const EpsPair& pair, int p) {
    ConvergenceRecord rec;
    rec.eps1 = pair.eps1;
    rec.eps2 = pair.eps2;
    rec.p = p;
    try {
        rec.regime = classify_regime(pair.eps1, pair.eps2).regime;
        const ProblemSpec problem = make_registry_problem(config.problem, pair.eps1, pair.eps2);
        // Registry problems are run even when the data assumptions fail.
        validate_assumptions(problem, kDefaultSampleCount, Enforcement::Advisory);
        const LayerParameters layer = compute_layer_parameters(problem);
        const Mesh mesh = build_sbl_mesh(layer, config.kappa, p);
        rec.branch = mesh.branch();

        const auto start = std::chrono::steady_clock::now();
        const GlobalSystem sys = assemble_global(problem, mesh, p);
        Eigen::VectorXd coefficients = solve_linear(sys);
        const auto stop = std::chrono::steady_clock::now();
        rec.dof = static_cast<int>(sys.dofs.size());
        if (config.record_timing) rec.wall_time_s = std::chrono::duration<double>(stop - start).count();

        const DiscreteSolution sol(mesh, p, std::move(coefficients));
        if (config.error_mode == ErrorMode::Exact) {
            if (!has_closed_form(problem)) {
                throw ConfigError("problem '" + config.problem + "' has no closed-form solution; use reference mode");
            }
            rec.rel_err_pct =
                energy_norm_error(as_field(constant_coefficient_exact(problem)), sol, pair.eps1, config.quadrature)
                    .relative_pct;
        } else {
            const DiscreteSolution ref = reference_solution(problem, layer, config.kappa, p);
            rec.rel_err_pct = energy_norm_error(ref, sol, pair.eps1, config.quadrature).relative_pct;
        }
    } catch (const std::exception& e) {
        rec.failed = true;
        rec.failure = e.what();
        rec.rel_err_pct = std::nan("");
    }
    return rec;
}

int worker_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SBLFEM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::vector<ConvergenceRecord> run_sweep(const SweepConfig& config) {
    validate_config(config);

    struct Cell {
        std::size_t pair;
        int p;
    };
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < config.pairs.size(); ++i) {
        for (int p = config.p_min; p <= config.p_max; ++p) cells.push_back({i, p});
    }
    std::vector<ConvergenceRecord> records(cells.size());

    const int workers = std::min<int>(worker_count(config.threads), static_cast<int>(cells.size()));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
            records[i] = run_cell(config, config.pairs[cells[i].pair], cells[i].p);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    return records;
}

RateFit fit_rate(std::span<const ConvergenceRecord> records) {
    std::vector<double> ps, ys;
    for (const auto& r : records) {
        if (r.failed || !std::isfinite(r.rel_err_pct) || !(r.rel_err_pct > 0.0)) continue;
        ps.push_back(r.p);
        ys.push_back(std::log(r.rel_err_pct));
    }
    if (ps.size() < 4) throw Error("fit_rate: need at least 4 usable rows, got " + std::to_string(ps.size()));

    const double n = static_cast<double>(ps.size());
    double mp = 0.0, my = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) mp += ps[i], my += ys[i];
    mp /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        sxx += (ps[i] - mp) * (ps[i] - mp);
        sxy += (ps[i] - mp) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) throw Error("fit_rate: all usable rows share the same p");

    RateFit fit;
    const double slope = sxy / sxx;
    fit.sigma_hat = -slope;
    if (syy > 0.0) {
        double ss_res = 0.0;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            const double r = ys[i] - (my + slope * (ps[i] - mp));
            ss_res += r * r;
        }
        fit.r_squared = 1.0 - ss_res / syy;
    }
    fit.p_first = static_cast<int>(*std::min_element(ps.begin(), ps.end()));
    fit.p_last = static_cast<int>(*std::max_element(ps.begin(), ps.end()));
    fit.used = static_cast<int>(ps.size());
    return fit;
}

std::vector<ConvergenceRecord> rows_for(std::span<const ConvergenceRecord> records, const EpsPair& pair) {
    std::vector<ConvergenceRecord> out;
    for (const auto& r : records) {
        if (r.eps1 == pair.eps1 && r.eps2 == pair.eps2) out.push_back(r);
    }
    return out;
}

std::vector<EpsPair> canonical_pairs() { return {{1e-9, 1e-4}, {1e-10, 1e-5}, {1e-12, 1e-12}}; }

std::vector<RegimeGroup> regime_groups() {
    // Below eps1 = 0.1 eps2^2 the relative energy error hardly depends on eps1
    // but scales like sqrt(eps2), so the extra pairs of the first group share eps2.
    return {
        {"eps1 << eps2^2", {{1e-9, 1e-4}, {1e-10, 1e-4}, {1e-12, 1e-4}}},
        {"eps1 ~ eps2^2", {{1e-10, 1e-5}, {1e-8, 1e-4}, {1e-12, 1e-6}}},
        {"eps1 >> eps2^2", {{1e-12, 1e-12}, {1e-8, 1e-8}, {1e-10, 1e-10}}},
    };
}

}  // namespace sblfem
