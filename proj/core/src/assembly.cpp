#include "sblfem/assembly.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <utility>
#include <vector>

#include "sblfem/errors.hpp"

namespace sblfem {

DofMap::DofMap(std::size_t element_count, int p)
    : elements_(element_count), p_(p), size_(element_count * static_cast<std::size_t>(p) - 1) {
    if (element_count < 1 || p < 1) throw DomainError("DofMap needs at least one element and p >= 1");
}

std::optional<std::size_t> DofMap::global(std::size_t element, int local) const {
    if (local == 0) {
        if (element == 0) return std::nullopt;
        return element - 1;
    }
    if (local == 1) {
        if (element + 1 == elements_) return std::nullopt;
        return element;
    }
    return (elements_ - 1) + element * static_cast<std::size_t>(p_ - 1) + static_cast<std::size_t>(local - 2);
}

ElementSystem element_matrices(const ProblemSpec& problem, const ElementMap& emap, int p,
                               const QuadratureRule& quad) {
    const int n = p + 1;
    ElementSystem out{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n)};

    const double h = emap.width;
    const double stiffness_scale = problem.eps1() * 2.0 / h;
    const double mass_scale = 0.5 * h;
    std::vector<double> phi(n), dphi(n);

    for (std::size_t q = 0; q < quad.size(); ++q) {
        const double xi = quad.nodes[q];
        const double w = quad.weights[q];
        const double x = emap.to_physical(xi);
        const double b = problem.b().value(x);
        const double c = problem.c().value(x);
        const double f = problem.f().value(x);
        if (!std::isfinite(b) || !std::isfinite(c) || !std::isfinite(f)) {
            throw DataError("non-finite coefficient at quadrature point x = " + std::to_string(x));
        }
        shape_functions(p, xi, phi.data(), dphi.data());

        const double convection = problem.eps2() * b * w;
        for (int k = 0; k < n; ++k) {
            for (int l = 0; l < n; ++l) {
                out.matrix(k, l) += stiffness_scale * w * dphi[l] * dphi[k] + convection * dphi[l] * phi[k] +
                                    mass_scale * w * c * phi[l] * phi[k];
            }
            out.load(k) += mass_scale * w * f * phi[k];
        }
    }
    return out;
}

GlobalSystem assemble_global(const ProblemSpec& problem, const Mesh& mesh, int p, const QuadratureRule& quad) {
    DofMap dofs(mesh.element_count(), p);
    const auto n = static_cast<Eigen::Index>(dofs.size());
    GlobalSystem sys{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n), dofs};

    for (std::size_t j = 0; j < mesh.element_count(); ++j) {
        const ElementSystem local = element_matrices(problem, element_map(mesh, j), p, quad);
        for (int k = 0; k <= p; ++k) {
            const auto gk = dofs.global(j, k);
            if (!gk) continue;
            sys.rhs(static_cast<Eigen::Index>(*gk)) += local.load(k);
            for (int l = 0; l <= p; ++l) {
                const auto gl = dofs.global(j, l);
                if (!gl) continue;
                sys.matrix(static_cast<Eigen::Index>(*gk), static_cast<Eigen::Index>(*gl)) += local.matrix(k, l);
            }
        }
    }
    return sys;
}

GlobalSystem assemble_global(const ProblemSpec& problem, const Mesh& mesh, int p) {
    return assemble_global(problem, mesh, p, gauss_rule(assembly_points(p)));
}

Eigen::VectorXd solve_linear(const GlobalSystem& system) {
    const Eigen::Index n = system.matrix.rows();
    if (n == 0) return Eigen::VectorXd();

    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system.matrix);
    const Eigen::MatrixXd& factors = lu.matrixLU();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (factors(i, i) == 0.0 || !std::isfinite(factors(i, i))) {
            throw SolverError("global matrix is singular (zero pivot in row " + std::to_string(i) + ")");
        }
    }
    Eigen::VectorXd x = lu.solve(system.rhs);

    const double residual = (system.matrix * x - system.rhs).lpNorm<Eigen::Infinity>();
    const double a_norm = system.matrix.cwiseAbs().rowwise().sum().maxCoeff();
    const double scale = a_norm * x.lpNorm<Eigen::Infinity>() + system.rhs.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(residual) || residual > 1e-10 * scale) {
        throw SolverError("linear solve residual check failed: " + std::to_string(residual / scale));
    }
    return x;
}

DiscreteSolution::DiscreteSolution(Mesh mesh, int p, Eigen::VectorXd coefficients)
    : mesh_(std::move(mesh)), p_(p), dofs_(mesh_.element_count(), p), coefficients_(std::move(coefficients)) {
    if (static_cast<std::size_t>(coefficients_.size()) != dofs_.size()) {
        throw DomainError("coefficient vector size does not match the DOF count");
    }
}

ValueAndDerivative DiscreteSolution::evaluate_local(std::size_t j, double xi) const {
    const ElementMap emap = element_map(mesh_, j);
    std::vector<double> phi(p_ + 1), dphi(p_ + 1);
    shape_functions(p_, xi, phi.data(), dphi.data());
    ValueAndDerivative out;
    for (int k = 0; k <= p_; ++k) {
        const auto g = dofs_.global(j, k);
        if (!g) continue;
        const double coef = coefficients_(static_cast<Eigen::Index>(*g));
        out.value += coef * phi[k];
        out.derivative += coef * dphi[k];
    }
    out.derivative /= emap.jacobian();
    return out;
}

ValueAndDerivative evaluate_fem(const DiscreteSolution& sol, double x) {
    const std::size_t j = sol.mesh().locate(x);
    return sol.evaluate_local(j, element_map(sol.mesh(), j).to_reference(x));
}

DiscreteSolution solve_fem(const ProblemSpec& problem, const Mesh& mesh, int p) {
    const GlobalSystem sys = assemble_global(problem, mesh, p);
    return DiscreteSolution(mesh, p, solve_linear(sys));
}

void write_matrix_csv(const Eigen::MatrixXd& matrix, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    char buf[64];
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", matrix(i, j));
            if (j) out << ',';
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw ConfigError("write failed for '" + path + "'");
}

}  // namespace sblfem
