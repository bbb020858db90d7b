#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "sblfem/sblfem.hpp"

namespace sblfem::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != value.size() || value.empty()) throw ConfigError("config: '" + key + "' is not a number: " + value);
    return v;
}

int to_int(const std::string& key, const std::string& value) {
    const double v = to_double(key, value);
    if (v != static_cast<int>(v)) throw ConfigError("config: '" + key + "' must be an integer");
    return static_cast<int>(v);
}

std::string problem_name(int example) {
    if (example != 1 && example != 2) throw ConfigError("--example must be 1 or 2");
    return "example" + std::to_string(example);
}

std::string g(double v, int digits = 10) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

struct ProblemOptions {
    int example = 1;
    double eps1 = 1.0;
    double eps2 = 1.0;
};

void add_problem_options(CLI::App* cmd, ProblemOptions& opts) {
    cmd->add_option("--example", opts.example, "Built-in problem: 1 (b=c=f=1) or 2 (b=e^x, c=x, f=1)")
        ->check(CLI::IsMember({1, 2}));
    cmd->add_option("--eps1", opts.eps1, "Diffusion parameter eps1");
    cmd->add_option("--eps2", opts.eps2, "Convection parameter eps2");
}

void print_warnings(const DataConstants& constants, std::ostream& err) {
    for (const auto& v : constants.violations) err << "warning: " << v << '\n';
}

void print_fits(std::span<const ConvergenceRecord> records, std::ostream& out) {
    for (const auto& group : group_by_pair(records)) {
        out << "eps1=" << g(group.pair.eps1, 3) << " eps2=" << g(group.pair.eps2, 3) << ": ";
        try {
            const RateFit fit = fit_rate(group.rows);
            out << "sigma_hat=" << g(fit.sigma_hat, 4) << " R^2=" << g(fit.r_squared, 4) << " (p=" << fit.p_first
                << ".." << fit.p_last << ")\n";
        } catch (const Error& e) {
            out << e.what() << '\n';
        }
        for (const auto& r : group.rows) {
            if (r.failed) out << "  p=" << r.p << " failed: " << r.failure << '\n';
        }
    }
}

void write_svg(std::span<const ConvergenceRecord> records, const std::filesystem::path& path, const std::string& title,
               std::ostream& err) {
    const auto groups = group_by_pair(records);
    const SvgResult result = emit_svg_semilog(groups, path, title);
    for (const auto& w : result.warnings) err << "warning: " << path.string() << ": " << w << '\n';
}

int run_paper(const std::filesystem::path& out_dir, int threads, bool timing, std::ostream& out, std::ostream& err) {
    std::filesystem::create_directories(out_dir);

    std::vector<EpsPair> example1_pairs;
    for (const auto& group : regime_groups()) {
        for (const auto& pair : group.pairs) {
            if (std::find(example1_pairs.begin(), example1_pairs.end(), pair) == example1_pairs.end()) {
                example1_pairs.push_back(pair);
            }
        }
    }

    SweepConfig ex1;
    ex1.problem = "example1";
    ex1.pairs = example1_pairs;
    ex1.error_mode = ErrorMode::Exact;
    ex1.threads = threads;
    ex1.record_timing = timing;
    const auto rec1 = run_sweep(ex1);

    SweepConfig ex2 = ex1;
    ex2.problem = "example2";
    ex2.pairs = canonical_pairs();
    ex2.error_mode = ErrorMode::Reference;
    const auto rec2 = run_sweep(ex2);

    emit_csv(rec1, out_dir / "example1.csv");
    emit_csv(rec2, out_dir / "example2.csv");

    std::vector<ConvergenceRecord> canonical1;
    for (const auto& pair : canonical_pairs()) {
        const auto rows = rows_for(rec1, pair);
        canonical1.insert(canonical1.end(), rows.begin(), rows.end());
    }
    write_svg(canonical1, out_dir / "example1.svg", "Example 1: energy norm convergence", err);

    std::ostringstream meta;
    meta << "# Figure contents (kappa = 1, p = 1..11)\n";
    meta << "example1.svg: example 1, exact solution, canonical pairs\n";
    const auto groups = regime_groups();
    for (std::size_t i = 0; i < groups.size(); ++i) {
        std::vector<ConvergenceRecord> rows;
        meta << "example1_regime" << i + 1 << ".svg: example 1, " << groups[i].label << ", pairs";
        for (const auto& pair : groups[i].pairs) {
            const auto r = rows_for(rec1, pair);
            rows.insert(rows.end(), r.begin(), r.end());
            meta << " (" << g(pair.eps1, 3) << ", " << g(pair.eps2, 3) << ")";
        }
        meta << "; the first pair is canonical, the others are additional log-grid pairs\n";
        write_svg(rows, out_dir / ("example1_regime" + std::to_string(i + 1) + ".svg"),
                  "Example 1, " + groups[i].label, err);
    }
    write_svg(rec2, out_dir / "example2.svg", "Example 2: energy norm convergence (reference solution, 2p)", err);
    meta << "example2.svg: example 2, reference solution of degree 2p on the mesh built for 2p, canonical pairs\n";
    {
        std::ofstream m(out_dir / "metadata.txt", std::ios::binary);
        m << meta.str();
    }

    out << "example 1 (exact error)\n";
    print_fits(canonical1, out);
    out << "example 2 (reference error)\n";
    print_fits(rec2, out);
    out << "wrote " << (out_dir / "example1.csv").string() << ", " << (out_dir / "example2.csv").string()
        << " and 5 SVG figures\n";
    return 0;
}

}  // namespace

ConfigFile parse_config_text(const std::string& text) {
    ConfigFile cfg;
    std::istringstream in(text);
    std::string line;
    std::optional<double> eps1, eps2;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "example") {
            cfg.sweep.problem = problem_name(to_int(key, value));
        } else if (key == "problem") {
            cfg.sweep.problem = value;
        } else if (key == "eps1") {
            eps1 = to_double(key, value);
        } else if (key == "eps2") {
            eps2 = to_double(key, value);
        } else if (key == "pairs") {
            std::istringstream items(value);
            std::string item;
            while (std::getline(items, item, ',')) {
                item = trim(item);
                const auto colon = item.find(':');
                if (colon == std::string::npos) throw ConfigError("config: pairs entries look like eps1:eps2");
                cfg.sweep.pairs.push_back({to_double(key, trim(item.substr(0, colon))),
                                           to_double(key, trim(item.substr(colon + 1)))});
            }
            cfg.has_pairs = true;
        } else if (key == "p-min") {
            cfg.sweep.p_min = to_int(key, value);
        } else if (key == "p-max") {
            cfg.sweep.p_max = to_int(key, value);
        } else if (key == "kappa") {
            cfg.sweep.kappa = to_double(key, value);
        } else if (key == "error-mode") {
            cfg.sweep.error_mode = error_mode_from_string(value);
            cfg.has_error_mode = true;
        } else if (key == "levels") {
            cfg.sweep.quadrature.levels = to_int(key, value);
        } else if (key == "points") {
            cfg.sweep.quadrature.points = to_int(key, value);
        } else if (key == "threads") {
            cfg.sweep.threads = to_int(key, value);
        } else if (key == "timing") {
            cfg.sweep.record_timing = value == "1" || value == "true" || value == "yes";
            cfg.has_timing = true;
        } else if (key == "out") {
            cfg.out_dir = value;
        } else {
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
    if (eps1 || eps2) {
        if (!eps1 || !eps2) throw ConfigError("config: eps1 and eps2 must be given together");
        cfg.sweep.pairs.insert(cfg.sweep.pairs.begin(), EpsPair{*eps1, *eps2});
        cfg.has_pairs = true;
    }
    return cfg;
}

ConfigFile load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"hp finite elements on the spectral boundary layer mesh for -eps1 u'' + eps2 b u' + c u = f"};
    app.name("sblfem");
    app.require_subcommand(1);

    ProblemOptions mu_opts;
    auto* mu_cmd = app.add_subcommand("mu", "Print the layer parameters mu0, mu1 and the regime");
    add_problem_options(mu_cmd, mu_opts);

    ProblemOptions mesh_opts;
    int mesh_p = 1;
    double mesh_kappa = 1.0;
    auto* mesh_cmd = app.add_subcommand("mesh", "Print the spectral boundary layer mesh breakpoints");
    add_problem_options(mesh_cmd, mesh_opts);
    mesh_cmd->add_option("--p", mesh_p, "Polynomial degree")->check(CLI::PositiveNumber);
    mesh_cmd->add_option("--kappa", mesh_kappa, "Mesh constant kappa")->check(CLI::PositiveNumber);

    ProblemOptions solve_opts;
    int solve_p = 4;
    double solve_kappa = 1.0;
    std::string solve_mode;
    std::string dump_matrix;
    auto* solve_cmd = app.add_subcommand("solve", "Solve once and report the relative energy error");
    add_problem_options(solve_cmd, solve_opts);
    solve_cmd->add_option("--p", solve_p, "Polynomial degree")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--kappa", solve_kappa, "Mesh constant kappa")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--error-mode", solve_mode, "exact or reference")
        ->check(CLI::IsMember({"exact", "reference"}));
    solve_cmd->add_option("--dump-matrix", dump_matrix, "Write the assembled matrix as CSV");

    ProblemOptions sweep_opts;
    int sweep_p_min = 1, sweep_p_max = 11, sweep_threads = 0;
    double sweep_kappa = 1.0;
    std::string sweep_mode, sweep_out = ".", sweep_config;
    bool sweep_timing = false;
    auto* sweep_cmd = app.add_subcommand("sweep", "Convergence sweep over p; writes sweep.csv and sweep.svg");
    add_problem_options(sweep_cmd, sweep_opts);
    auto* o_pmin = sweep_cmd->add_option("--p-min", sweep_p_min, "Smallest degree");
    auto* o_pmax = sweep_cmd->add_option("--p-max", sweep_p_max, "Largest degree");
    auto* o_kappa = sweep_cmd->add_option("--kappa", sweep_kappa, "Mesh constant kappa");
    auto* o_mode = sweep_cmd->add_option("--error-mode", sweep_mode, "exact or reference")
                       ->check(CLI::IsMember({"exact", "reference"}));
    auto* o_out = sweep_cmd->add_option("--out", sweep_out, "Output directory");
    auto* o_threads = sweep_cmd->add_option("--threads", sweep_threads, "Worker threads (overrides SBLFEM_THREADS)");
    auto* o_timing = sweep_cmd->add_flag("--timing", sweep_timing, "Record wall time in the CSV");
    sweep_cmd->add_option("--config", sweep_config, "key=value config file; flags take precedence");

    std::string paper_out = "results";
    int paper_threads = 0;
    bool paper_timing = false;
    auto* paper_cmd = app.add_subcommand("paper", "Run the canonical experiments for both examples");
    paper_cmd->add_option("--out", paper_out, "Output directory");
    paper_cmd->add_option("--threads", paper_threads, "Worker threads (overrides SBLFEM_THREADS)");
    paper_cmd->add_flag("--timing", paper_timing, "Record wall time in the CSVs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return e.get_exit_code() != 0 ? e.get_exit_code() : 2;
    }

    try {
        if (*mu_cmd) {
            const ProblemSpec problem =
                make_registry_problem(problem_name(mu_opts.example), mu_opts.eps1, mu_opts.eps2);
            print_warnings(validate_assumptions(problem, kDefaultSampleCount, Enforcement::Advisory), err);
            const LayerParameters layer = compute_layer_parameters(problem);
            out << "problem " << problem.name() << " eps1=" << g(problem.eps1()) << " eps2=" << g(problem.eps2())
                << '\n';
            out << "mu0 = " << g(layer.mu0, 12) << "  (at x = " << g(layer.mu0_at, 6) << ")\n";
            out << "mu1 = " << g(layer.mu1, 12) << "  (at x = " << g(layer.mu1_at, 6) << ")\n";
            out << "regime = " << to_string(layer.regime.regime) << "  (eps1/eps2^2 = " << g(layer.regime.ratio, 6)
                << ")\n";
            return 0;
        }
        if (*mesh_cmd) {
            const ProblemSpec problem =
                make_registry_problem(problem_name(mesh_opts.example), mesh_opts.eps1, mesh_opts.eps2);
            print_warnings(validate_assumptions(problem, kDefaultSampleCount, Enforcement::Advisory), err);
            const Mesh mesh = build_sbl_mesh(compute_layer_parameters(problem), mesh_kappa, mesh_p);
            out << "branch " << to_string(mesh.branch()) << ", " << mesh.element_count() << " element(s)\n";
            out << format_breakpoints(mesh) << '\n';
            return 0;
        }
        if (*solve_cmd) {
            const ProblemSpec problem =
                make_registry_problem(problem_name(solve_opts.example), solve_opts.eps1, solve_opts.eps2);
            print_warnings(validate_assumptions(problem, kDefaultSampleCount, Enforcement::Advisory), err);
            const LayerParameters layer = compute_layer_parameters(problem);
            const Mesh mesh = build_sbl_mesh(layer, solve_kappa, solve_p);
            const GlobalSystem sys = assemble_global(problem, mesh, solve_p);
            if (!dump_matrix.empty()) write_matrix_csv(sys.matrix, dump_matrix);
            const DiscreteSolution sol(mesh, solve_p, solve_linear(sys));

            const ErrorMode mode = solve_mode.empty()
                                       ? (has_closed_form(problem) ? ErrorMode::Exact : ErrorMode::Reference)
                                       : error_mode_from_string(solve_mode);
            if (mode == ErrorMode::Exact && !has_closed_form(problem)) {
                throw ConfigError("no closed-form solution for " + problem.name() + "; use --error-mode reference");
            }
            const ErrorNorms e =
                mode == ErrorMode::Exact
                    ? energy_norm_error(as_field(constant_coefficient_exact(problem)), sol, problem.eps1())
                    : energy_norm_error(reference_solution(problem, layer, solve_kappa, solve_p), sol, problem.eps1());
            out << "mesh " << format_breakpoints(mesh) << '\n';
            out << "p = " << solve_p << ", DOF = " << sys.dofs.size() << '\n';
            out << "relative energy error (" << to_string(mode) << ") = " << g(e.relative_pct, 6) << " %\n";
            return 0;
        }
        if (*sweep_cmd) {
            ConfigFile cfg;
            if (!sweep_config.empty()) cfg = load_config(sweep_config);
            SweepConfig& sc = cfg.sweep;
            if (sweep_cmd->count("--example")) sc.problem = problem_name(sweep_opts.example);
            const bool eps_given = sweep_cmd->count("--eps1") || sweep_cmd->count("--eps2");
            if (eps_given) {
                sc.pairs = {EpsPair{sweep_opts.eps1, sweep_opts.eps2}};
            } else if (!cfg.has_pairs) {
                sc.pairs = canonical_pairs();
            }
            if (o_pmin->count()) sc.p_min = sweep_p_min;
            if (o_pmax->count()) sc.p_max = sweep_p_max;
            if (o_kappa->count()) sc.kappa = sweep_kappa;
            if (o_threads->count()) sc.threads = sweep_threads;
            if (o_timing->count()) sc.record_timing = true;
            else if (!cfg.has_timing) sc.record_timing = false;
            if (o_mode->count()) {
                sc.error_mode = error_mode_from_string(sweep_mode);
            } else if (!cfg.has_error_mode) {
                const ProblemSpec probe = make_registry_problem(sc.problem, 1.0, 1.0);
                sc.error_mode = has_closed_form(probe) ? ErrorMode::Exact : ErrorMode::Reference;
            }
            std::filesystem::path dir = o_out->count() ? sweep_out : (cfg.out_dir.empty() ? sweep_out : cfg.out_dir);

            validate_config(sc);
            const auto records = run_sweep(sc);
            std::filesystem::create_directories(dir);
            emit_csv(records, dir / "sweep.csv");
            write_svg(records, dir / "sweep.svg", sc.problem + ": energy norm convergence", err);
            print_fits(records, out);
            out << "wrote " << (dir / "sweep.csv").string() << " and " << (dir / "sweep.svg").string() << '\n';
            return 0;
        }
        if (*paper_cmd) return run_paper(paper_out, paper_threads, paper_timing, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace sblfem::cli
