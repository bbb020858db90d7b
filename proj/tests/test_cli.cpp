#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "sblfem/errors.hpp"
#include "sblfem/report.hpp"

using namespace sblfem;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    args.insert(args.begin(), "sblfem");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::path(::testing::TempDir()) / name;
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST(Cli, MuPrintsGoldenRatioRoots) {
    const CliRun r = run({"mu", "--example", "1", "--eps1", "1", "--eps2", "1"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("mu0 = 0.61803398875"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("mu1 = 1.61803398875"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("regime = comparable"), std::string::npos) << r.out;
}

TEST(Cli, MuWarnsForExample2) {
    const CliRun r = run({"mu", "--example", "2", "--eps1", "1e-9", "--eps2", "1e-4"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("warning: c(x) >= gamma > 0"), std::string::npos) << r.err;
}

TEST(Cli, MeshLine) {
    const CliRun r = run({"mesh", "--example", "1", "--eps1", "1e-9", "--eps2", "1e-4", "--p", "3"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("0 | 3.27482e-4 | 9.99973e-1 | 1"), std::string::npos) << r.out;
}

TEST(Cli, SolveAndDumpMatrix) {
    const auto dir = fresh_dir("cli_solve");
    std::filesystem::create_directories(dir);
    const CliRun r = run({"solve", "--example", "1", "--eps1", "1e-9", "--eps2", "1e-4", "--p", "3", "--dump-matrix",
                       (dir / "a.csv").string()});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("DOF = 8"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("relative energy error (exact)"), std::string::npos) << r.out;
    const std::string matrix = slurp(dir / "a.csv");
    EXPECT_EQ(std::count(matrix.begin(), matrix.end(), '\n'), 8);

    const CliRun ex2 = run({"solve", "--example", "2", "--eps1", "1e-3", "--eps2", "1e-2", "--p", "2"});
    EXPECT_EQ(ex2.code, 0) << ex2.err;
    EXPECT_NE(ex2.out.find("(reference)"), std::string::npos);

    const CliRun bad = run({"solve", "--example", "2", "--eps1", "1e-3", "--eps2", "1e-2", "--error-mode", "exact"});
    EXPECT_NE(bad.code, 0);
}

TEST(Cli, SweepRejectsEps1AboveEps2) {
    const CliRun r = run({"sweep", "--example", "1", "--eps1", "1e-3", "--eps2", "1e-4", "--out",
                       fresh_dir("cli_bad").string()});
    EXPECT_NE(r.code, 0);
    EXPECT_NE(r.err.find("eps1 <= eps2"), std::string::npos) << r.err;
}

TEST(Cli, UnknownFlagPrintsUsage) {
    const CliRun r = run({"mu", "--bogus"});
    EXPECT_NE(r.code, 0);
    EXPECT_NE(r.err.find("Usage"), std::string::npos) << r.err;
    EXPECT_NE(run({}).code, 0);
}

TEST(Cli, SweepWritesCsvAndSvg) {
    const auto dir = fresh_dir("cli_sweep");
    const CliRun r = run({"sweep", "--example", "1", "--eps1", "1e-9", "--eps2", "1e-4", "--p-max", "5", "--out",
                       dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = read_csv(dir / "sweep.csv");
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_EQ(rows[4].dof, 14);
    EXPECT_TRUE(std::filesystem::exists(dir / "sweep.svg"));
}

TEST(Cli, ConfigFileWithFlagOverride) {
    const auto dir = fresh_dir("cli_config");
    std::filesystem::create_directories(dir);
    {
        std::ofstream cfg(dir / "run.cfg");
        cfg << "# two pairs, small range\n"
               "example = 1\n"
               "pairs = 1e-9:1e-4, 1e-12:1e-12\n"
               "p-min = 2\n"
               "p-max = 6\n"
               "out = "
            << (dir / "from_config").string() << "\n";
    }
    const CliRun r = run({"sweep", "--config", (dir / "run.cfg").string(), "--p-max", "4"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = read_csv(dir / "from_config" / "sweep.csv");
    ASSERT_EQ(rows.size(), 6u);  // 2 pairs x p = 2..4
    EXPECT_EQ(rows.front().p, 2);
    EXPECT_EQ(rows.back().p, 4);
}

TEST(ConfigFile, Parsing) {
    const cli::ConfigFile cfg =
        cli::parse_config_text("example=2\neps1=1e-6\neps2 = 1e-3\nerror-mode=reference\nkappa=0.5\nlevels=20\n");
    EXPECT_EQ(cfg.sweep.problem, "example2");
    ASSERT_EQ(cfg.sweep.pairs.size(), 1u);
    EXPECT_EQ(cfg.sweep.pairs[0].eps1, 1e-6);
    EXPECT_EQ(cfg.sweep.kappa, 0.5);
    EXPECT_EQ(cfg.sweep.quadrature.levels, 20);
    EXPECT_TRUE(cfg.has_error_mode);
    EXPECT_THROW(cli::parse_config_text("nonsense\n"), ConfigError);
    EXPECT_THROW(cli::parse_config_text("colour=blue\n"), ConfigError);
    EXPECT_THROW(cli::parse_config_text("eps1=1e-3\n"), ConfigError);
    EXPECT_THROW(cli::parse_config_text("kappa=abc\n"), ConfigError);
}

TEST(Cli, PaperWritesFigureSet) {
    const auto dir = fresh_dir("cli_paper");
    const CliRun r = run({"paper", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    std::size_t csv = 0, svg = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        csv += entry.path().extension() == ".csv";
        svg += entry.path().extension() == ".svg";
    }
    EXPECT_EQ(csv, 2u);
    EXPECT_GE(svg, 4u);
    EXPECT_TRUE(std::filesystem::exists(dir / "metadata.txt"));
}
