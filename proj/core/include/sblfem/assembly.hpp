#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "sblfem/basis.hpp"
#include "sblfem/mesh.hpp"
#include "sblfem/problem.hpp"

namespace sblfem {

/// Local (element, mode) -> global unknown for the space S_0^p on a mesh.
/// Interior breakpoints come first (left to right), then the internal modes
/// element by element. Modes at x = 0 and x = 1 are eliminated.
class DofMap {
public:
    DofMap(std::size_t element_count, int p);

    std::size_t size() const { return size_; }
    std::size_t element_count() const { return elements_; }
    int degree() const { return p_; }

    /// Local mode 0 is the left nodal mode, 1 the right nodal mode, 2..p internal.
    std::optional<std::size_t> global(std::size_t element, int local) const;

private:
    std::size_t elements_;
    int p_;
    std::size_t size_;
};

/// Rows are test functions, columns trial functions:
///   matrix(k, l) = B(N_l, N_k),  load(k) = F(N_k).
struct ElementSystem {
    Eigen::MatrixXd matrix;
    Eigen::VectorXd load;
};

ElementSystem element_matrices(const ProblemSpec& problem, const ElementMap& emap, int p,
                               const QuadratureRule& quad);

struct GlobalSystem {
    Eigen::MatrixXd matrix;
    Eigen::VectorXd rhs;
    DofMap dofs;
};

GlobalSystem assemble_global(const ProblemSpec& problem, const Mesh& mesh, int p, const QuadratureRule& quad);
/// Uses the (p + 4)-point Gauss rule.
GlobalSystem assemble_global(const ProblemSpec& problem, const Mesh& mesh, int p);

/// Dense LU with partial pivoting and a scaled residual check. An empty
/// system yields an empty vector.
Eigen::VectorXd solve_linear(const GlobalSystem& system);

class DiscreteSolution {
public:
    DiscreteSolution(Mesh mesh, int p, Eigen::VectorXd coefficients);

    const Mesh& mesh() const { return mesh_; }
    int degree() const { return p_; }
    const DofMap& dofs() const { return dofs_; }
    const Eigen::VectorXd& coefficients() const { return coefficients_; }

    /// Value and x-derivative at reference point xi of element j.
    ValueAndDerivative evaluate_local(std::size_t j, double xi) const;

private:
    Mesh mesh_;
    int p_;
    DofMap dofs_;
    Eigen::VectorXd coefficients_;
};

/// Value and derivative at x in [0, 1]; throws DomainError outside.
ValueAndDerivative evaluate_fem(const DiscreteSolution& sol, double x);

/// Assemble and solve on `mesh` with degree p.
DiscreteSolution solve_fem(const ProblemSpec& problem, const Mesh& mesh, int p);

/// Row-major CSV with 17 significant digits.
void write_matrix_csv(const Eigen::MatrixXd& matrix, const std::string& path);

}  // namespace sblfem
