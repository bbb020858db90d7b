#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sblfem/harness.hpp"

namespace sblfem {

inline constexpr const char* kCsvHeader = "eps1,eps2,p,dof,rel_err_pct,wall_time_s,regime";

/// Text with 17 significant digits ("%.17g").
std::string format_g17(double v);

std::string to_csv(std::span<const ConvergenceRecord> records);
void emit_csv(std::span<const ConvergenceRecord> records, const std::filesystem::path& path);

/// Parses text produced by to_csv. Mesh branch and failure text are not
/// stored in the file and come back as defaults / "failed" when the error is nan.
std::vector<ConvergenceRecord> parse_csv(const std::string& text);
std::vector<ConvergenceRecord> read_csv(const std::filesystem::path& path);

struct SeriesGroup {
    EpsPair pair;
    std::vector<ConvergenceRecord> rows;
};

/// Groups rows by (eps1, eps2) in order of first appearance.
std::vector<SeriesGroup> group_by_pair(std::span<const ConvergenceRecord> records);

struct SvgResult {
    std::string svg;
    std::vector<std::string> warnings;  ///< groups skipped because no error was positive
    std::size_t polylines = 0;
};

/// Semi-log plot: x = DOF, y = log10(rel_err_pct), one polyline per group.
SvgResult render_svg_semilog(std::span<const SeriesGroup> groups, const std::string& title);
SvgResult emit_svg_semilog(std::span<const SeriesGroup> groups, const std::filesystem::path& path,
                           const std::string& title);

}  // namespace sblfem
