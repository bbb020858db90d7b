#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sblfem/approximation.hpp"
#include "sblfem/mesh.hpp"
#include "sblfem/problem.hpp"

namespace sblfem {

struct EpsPair {
    double eps1;
    double eps2;

    friend bool operator==(const EpsPair&, const EpsPair&) = default;
};

enum class ErrorMode { Exact, Reference };

std::string_view to_string(ErrorMode mode);
ErrorMode error_mode_from_string(std::string_view text);

struct SweepConfig {
    std::string problem = "example1";
    std::vector<EpsPair> pairs;
    int p_min = 1;
    int p_max = 11;
    double kappa = 1.0;
    ErrorMode error_mode = ErrorMode::Exact;
    EnergyQuadrature quadrature{};
    /// 0 means: SBLFEM_THREADS if set, otherwise hardware concurrency.
    int threads = 0;
    /// When false the wall_time_s column is written as 0 so that outputs are reproducible.
    bool record_timing = true;
};

/// Throws ConfigError / AssumptionViolation on an invalid configuration.
void validate_config(const SweepConfig& config);

struct ConvergenceRecord {
    double eps1 = 0.0;
    double eps2 = 0.0;
    int p = 0;
    int dof = 0;
    double rel_err_pct = 0.0;
    double wall_time_s = 0.0;
    Regime regime = Regime::Comparable;
    MeshBranch branch = MeshBranch::TwoLayers;
    bool failed = false;
    std::string failure;

    friend bool operator==(const ConvergenceRecord&, const ConvergenceRecord&) = default;
};

/// DOF of S_0^p on a mesh of the given branch: 3p-1, 2p-1 or p-1.
int expected_dof(MeshBranch branch, int p);

/// Records ordered by (pair index, p) regardless of scheduling.
std::vector<ConvergenceRecord> run_sweep(const SweepConfig& config);

/// Solves one cell of a sweep. Failures are captured in the record.
ConvergenceRecord run_cell(const SweepConfig& config, const EpsPair& pair, int p);

struct RateFit {
    double sigma_hat = 0.0;  ///< -slope of ln(err) against p
    double r_squared = 0.0;
    int p_first = 0;
    int p_last = 0;
    int used = 0;
};

/// Least squares of ln(rel_err_pct) on p over the usable (finite, positive,
/// not failed) rows. Throws Error when fewer than four remain.
RateFit fit_rate(std::span<const ConvergenceRecord> records);

/// Rows of `records` belonging to one pair, in input order.
std::vector<ConvergenceRecord> rows_for(std::span<const ConvergenceRecord> records, const EpsPair& pair);

/// Resolved worker count: `requested` if positive, else SBLFEM_THREADS, else hardware concurrency.
int worker_count(int requested);

/// Canonical parameter pairs, one per regime.
std::vector<EpsPair> canonical_pairs();

/// Canonical pair for a regime together with two further pairs on a log grid.
struct RegimeGroup {
    std::string label;
    std::vector<EpsPair> pairs;
};
std::vector<RegimeGroup> regime_groups();

}  // namespace sblfem
