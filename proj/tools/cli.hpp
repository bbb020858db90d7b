#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sblfem/harness.hpp"

namespace sblfem::cli {

/// Entry point of the `sblfem` tool. Returns the process exit code.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// key=value lines, '#' starts a comment. Recognised keys: example, problem,
/// eps1, eps2, pairs (e.g. "1e-9:1e-4,1e-10:1e-5"), p-min, p-max, kappa,
/// error-mode, levels, points, threads, timing, out.
struct ConfigFile {
    SweepConfig sweep;
    std::string out_dir;
    bool has_pairs = false;
    bool has_error_mode = false;
    bool has_timing = false;
};

ConfigFile parse_config_text(const std::string& text);
ConfigFile load_config(const std::string& path);

}  // namespace sblfem::cli
