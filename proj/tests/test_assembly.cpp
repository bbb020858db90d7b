#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <iterator>
#include <random>

#include "sblfem/approximation.hpp"
#include "sblfem/assembly.hpp"
#include "sblfem/errors.hpp"
#include "support/oracles.hpp"

using namespace sblfem;

namespace {

ProblemSpec constant_problem(double e1, double e2, double b, double c, double f) {
    return ProblemSpec("const", e1, e2, Coefficient::constant(b), Coefficient::constant(c), Coefficient::constant(f));
}

// One term of the bilinear form on an element of width h. eps1 > 0 is
// required, so the unwanted diffusion term is scaled down to 1e-300.
Eigen::MatrixXd term_block(int term, double h, int p) {
    const ElementMap emap{0, 0.0, h, h};
    const QuadratureRule q = gauss_rule(assembly_points(p));
    switch (term) {
        case 0: return element_matrices(constant_problem(1.0, 1.0, 0.0, 0.0, 1.0), emap, p, q).matrix;
        case 1: return element_matrices(constant_problem(1e-300, 1.0, 1.0, 0.0, 1.0), emap, p, q).matrix;
        default: return element_matrices(constant_problem(1e-300, 1e-300, 0.0, 1.0, 1.0), emap, p, q).matrix;
    }
}

ProblemSpec example1(double e1, double e2) { return make_registry_problem("example1", e1, e2); }

}  // namespace

TEST(DofMap, CountsAndOrdering) {
    const DofMap three(3, 4);
    EXPECT_EQ(three.size(), 11u);  // 3p - 1
    EXPECT_FALSE(three.global(0, 0));
    EXPECT_FALSE(three.global(2, 1));
    EXPECT_EQ(*three.global(0, 1), 0u);
    EXPECT_EQ(*three.global(1, 0), 0u);
    EXPECT_EQ(*three.global(1, 1), 1u);
    EXPECT_EQ(*three.global(0, 2), 2u);
    EXPECT_EQ(*three.global(2, 4), 10u);
    EXPECT_EQ(DofMap(2, 5).size(), 9u);  // 2p - 1
    EXPECT_EQ(DofMap(1, 5).size(), 4u);  // p - 1
    EXPECT_EQ(DofMap(1, 1).size(), 0u);
}

TEST(ElementMatrices, HatStiffnessMassConvection) {
    const Eigen::Matrix2d stiffness = term_block(0, 2.0, 1);
    const Eigen::Matrix2d mass = term_block(2, 2.0, 1);
    Eigen::Matrix2d expect_k, expect_m, expect_b;
    expect_k << 0.5, -0.5, -0.5, 0.5;
    expect_m << 2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0;
    // B(N_k, N_l) for k = row: int N_k' N_l, i.e. the transpose of matrix(k, l) = B(N_l, N_k)
    expect_b << -0.5, -0.5, 0.5, 0.5;
    EXPECT_LE((stiffness - expect_k).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LE((mass - expect_m).cwiseAbs().maxCoeff(), 1e-13);
    for (double h : {2.0, 0.3, 1e-7}) {
        const Eigen::Matrix2d convection = term_block(1, h, 1);
        EXPECT_LE((convection.transpose() - expect_b).cwiseAbs().maxCoeff(), 1e-13) << h;
    }
}

TEST(ElementMatrices, LoadVector) {
    const ElementMap emap{0, 0.25, 0.75, 0.5};
    const ElementSystem s = element_matrices(example1(1.0, 1.0), emap, 3, gauss_rule(7));
    EXPECT_NEAR(s.load(0), 0.25, 1e-15);
    EXPECT_NEAR(s.load(1), 0.25, 1e-15);
    EXPECT_NEAR(s.load(2), 0.5 * 0.5 * -std::sqrt(1.5) * 2.0 / 3.0, 1e-15);  // (h/2) int psi_2
    EXPECT_NEAR(s.load(3), 0.0, 1e-15);
}

TEST(ElementMatrices, NonFiniteCoefficient) {
    const ProblemSpec bad("bad", 1e-2, 1e-1, Coefficient::constant(1.0),
                          Coefficient::function([](double) { return std::nan(""); }, [](double) { return 0.0; }),
                          Coefficient::constant(1.0));
    EXPECT_THROW(element_matrices(bad, ElementMap{}, 2, gauss_rule(6)), DataError);
}

TEST(AssembleGlobal, OneDofHandSystem) {
    const Mesh m = build_uniform_mesh(2);
    const ProblemSpec p("hand", 1.0, 1.0, Coefficient::constant(0.0), Coefficient::constant(1.0),
                        Coefficient::constant(1.0));
    const GlobalSystem sys = assemble_global(p, m, 1);
    ASSERT_EQ(sys.matrix.rows(), 1);
    EXPECT_NEAR(sys.matrix(0, 0), 4.0 + 1.0 / 3.0, 1e-14);
    EXPECT_NEAR(sys.rhs(0), 0.5, 1e-15);
    const Eigen::VectorXd x = solve_linear(sys);
    EXPECT_NEAR(x(0), 3.0 / 26.0, 1e-14);

    const DiscreteSolution sol(m, 1, x);
    EXPECT_EQ(evaluate_fem(sol, 0.0).value, 0.0);
    EXPECT_EQ(evaluate_fem(sol, 1.0).value, 0.0);
    EXPECT_NEAR(evaluate_fem(sol, 0.5).value, 3.0 / 26.0, 1e-14);
    EXPECT_NEAR(evaluate_fem(sol, 0.25).value, 3.0 / 52.0, 1e-14);
    EXPECT_NEAR(evaluate_fem(sol, 0.25).derivative, 6.0 / 26.0, 1e-13);
    EXPECT_THROW(evaluate_fem(sol, 1.01), DomainError);
}

TEST(AssembleGlobal, EmptySystemOnSingleLinearElement) {
    const GlobalSystem sys = assemble_global(example1(1.0, 1.0), build_uniform_mesh(1), 1);
    EXPECT_EQ(sys.matrix.rows(), 0);
    const DiscreteSolution sol(build_uniform_mesh(1), 1, solve_linear(sys));
    EXPECT_EQ(evaluate_fem(sol, 0.3).value, 0.0);
}

TEST(AssembleGlobal, DofCountOnSblMesh) {
    const ProblemSpec pr = example1(1e-9, 1e-4);
    const LayerParameters l = compute_layer_parameters(pr);
    for (int p = 1; p <= 11; ++p) {
        const Mesh m = build_sbl_mesh(l, 1.0, p);
        EXPECT_EQ(assemble_global(pr, m, p).dofs.size(), static_cast<std::size_t>(3 * p - 1));
    }
}

TEST(AssembleGlobal, MatchesBruteForceOnAllBranches) {
    struct Case {
        ProblemSpec problem;
        LayerParameters layer;
    };
    std::vector<Case> cases;
    const ProblemSpec ex1 = example1(1e-9, 1e-4);
    cases.push_back({ex1, compute_layer_parameters(ex1)});  // two layers
    LayerParameters gap;
    gap.mu0 = 1.0;
    gap.mu1 = 50.0;
    const ProblemSpec ex2 = make_registry_problem("example2", 1e-3, 1e-2);
    cases.push_back({ex2, gap});  // right layer only
    LayerParameters wide;
    wide.mu0 = 0.5;
    wide.mu1 = 1.0;
    cases.push_back({ex2, wide});  // asymptotic

    for (const Case& c : cases) {
        for (int p = 1; p <= 5; ++p) {
            const Mesh m = build_sbl_mesh(c.layer, 1.0, p);
            const GlobalSystem sys = assemble_global(c.problem, m, p);
            const oracle::DenseSystem ref = oracle::brute_force_assembly(c.problem, m, p, 4 * assembly_points(p));
            if (sys.matrix.size() == 0) continue;
            const double scale = std::max(1.0, ref.matrix.cwiseAbs().maxCoeff());
            EXPECT_LE((sys.matrix - ref.matrix).cwiseAbs().maxCoeff(), 1e-10 * scale) << "p=" << p;
            EXPECT_LE((sys.rhs - ref.rhs).cwiseAbs().maxCoeff(), 1e-10) << "p=" << p;
        }
    }
}

TEST(AssembleGlobal, SymmetricWithoutConvection) {
    // eps2 cannot be zero in a ProblemSpec; b = 0 removes the convection term instead.
    const ProblemSpec p("sym", 1e-3, 1e-2, Coefficient::constant(0.0), Coefficient::constant(1.0),
                        Coefficient::constant(1.0));
    const Mesh m = build_uniform_mesh(3);
    const GlobalSystem sys = assemble_global(p, m, 6);
    EXPECT_LE((sys.matrix - sys.matrix.transpose()).cwiseAbs().maxCoeff(), 1e-13);

    const ProblemSpec with("conv", 1e-3, 1e-2, Coefficient::constant(1.0), Coefficient::constant(1.0),
                           Coefficient::constant(1.0));
    const GlobalSystem conv = assemble_global(with, m, 6);
    const Eigen::MatrixXd convection = conv.matrix - sys.matrix;
    // antisymmetric part of the whole system is that of the convection block
    const Eigen::MatrixXd skew = conv.matrix - conv.matrix.transpose();
    EXPECT_LE((skew - (convection - convection.transpose())).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_GT(skew.cwiseAbs().maxCoeff(), 1e-3);
}

TEST(SolveLinear, IdentityAndSingular) {
    GlobalSystem sys{Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Unit(3, 0), DofMap(2, 2)};
    EXPECT_EQ(solve_linear(sys), Eigen::VectorXd::Unit(3, 0));
    sys.matrix(1, 1) = 0.0;
    sys.matrix(1, 0) = 0.0;
    EXPECT_THROW(solve_linear(sys), SolverError);
}

TEST(Coercivity, QuadraticFormDominatesEnergyNorm) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (const auto& [e1, e2] : std::vector<std::pair<double, double>>{{1e-9, 1e-4}, {1e-12, 1e-12}, {1e-3, 1e-2}}) {
        const ProblemSpec pr = example1(e1, e2);
        const Mesh m = build_sbl_mesh(compute_layer_parameters(pr), 1.0, 5);
        const GlobalSystem sys = assemble_global(pr, m, 5);
        for (int trial = 0; trial < 20; ++trial) {
            Eigen::VectorXd v(sys.matrix.rows());
            for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = uni(rng);
            const DiscreteSolution vh(m, 5, v);
            const double energy_sq = oracle::integrate_on_mesh(
                [&](double x) {
                    const ValueAndDerivative d = evaluate_fem(vh, x);
                    return e1 * d.derivative * d.derivative + d.value * d.value;
                },
                m, 4, 12);
            EXPECT_GE(v.dot(sys.matrix * v), energy_sq - 1e-10) << e1 << " trial " << trial;
        }
    }
}

TEST(DiscreteSolution, ContinuousAtBreakpoints) {
    const ProblemSpec pr = example1(1e-9, 1e-4);
    const LayerParameters l = compute_layer_parameters(pr);
    for (int p : {2, 5, 9}) {
        const DiscreteSolution sol = solve_fem(pr, build_sbl_mesh(l, 1.0, p), p);
        const auto bp = sol.mesh().breakpoints();
        for (std::size_t j = 1; j + 1 < bp.size(); ++j) {
            const double from_left = sol.evaluate_local(j - 1, 1.0).value;
            const double from_right = sol.evaluate_local(j, -1.0).value;
            EXPECT_NEAR(from_left, from_right, 1e-13);
        }
        EXPECT_EQ(sol.evaluate_local(0, -1.0).value, 0.0);
        EXPECT_EQ(sol.evaluate_local(sol.mesh().element_count() - 1, 1.0).value, 0.0);
    }
}

TEST(WriteMatrixCsv, SeventeenDigits) {
    Eigen::MatrixXd a(2, 2);
    a << 1.0 / 3.0, 2.0, -1e-20, 0.1;
    const std::string path = ::testing::TempDir() + "/matrix.csv";
    write_matrix_csv(a, path);
    std::ifstream in(path);
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_EQ(all, "0.33333333333333331,2\n-9.9999999999999995e-21,0.10000000000000001\n");
}
