#pragma once

#include <concepts>
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "sblfem/assembly.hpp"
#include "sblfem/basis.hpp"
#include "sblfem/mesh.hpp"
#include "sblfem/problem.hpp"

namespace sblfem {

/// A function on [0, 1] returning its value and first derivative.
using Field = std::function<ValueAndDerivative(double)>;

Field as_field(const ClosedFormSolution& exact);
Field as_field(const DiscreteSolution& sol);

/// Piecewise polynomial of degree p stored per element in the shape basis.
class PiecewiseInterpolant {
public:
    PiecewiseInterpolant(Mesh mesh, int p, std::vector<Eigen::VectorXd> element_coefficients);

    const Mesh& mesh() const { return mesh_; }
    int degree() const { return p_; }
    const Eigen::VectorXd& element_coefficients(std::size_t j) const { return coefficients_.at(j); }

    ValueAndDerivative evaluate_local(std::size_t j, double xi) const;
    ValueAndDerivative evaluate(double x) const;

private:
    Mesh mesh_;
    int p_;
    std::vector<Eigen::VectorXd> coefficients_;
};

/// On every element the derivative of the result is the degree p - 1
/// Legendre truncation of u', and the result interpolates u at both
/// element endpoints.
PiecewiseInterpolant build_interpolant(const Field& u, const Mesh& mesh, int p);

/// Composite rule per element: geometric halving toward both endpoints
/// (`levels` per side) with a Gauss rule of `points` nodes on every piece.
/// `points == 0` selects max(p + 2, 10) for the degree being measured.
struct EnergyQuadrature {
    int levels = 40;
    int points = 0;

    int points_for(int p) const { return points > 0 ? points : std::max(p + 2, 10); }
};

/// One node of the composite rule on [-1, 1], stored as a distance from
/// the nearer endpoint so that nodes very close to +-1 keep full precision.
struct CompositeNode {
    bool from_right;
    double offset;  ///< 1 + xi (left half) or 1 - xi (right half)
    double weight;
};

struct CompositeRule {
    std::vector<CompositeNode> nodes;
    std::size_t nodes_per_piece = 0;
};

CompositeRule composite_rule(int levels, int points);

struct ErrorNorms {
    double energy = 0.0;        ///< ||e||_E = sqrt(eps1 |e|_1^2 + ||e||_0^2)
    double l2 = 0.0;
    double h1_seminorm = 0.0;
    double truth_energy = 0.0;  ///< ||truth||_E with the same rule
    double relative_pct = 0.0;  ///< 100 ||e||_E / ||truth||_E
};

/// Approximant evaluated element by element: value and x-derivative at (j, xi).
using LocalEvaluator = std::function<ValueAndDerivative(std::size_t, double)>;

ErrorNorms energy_norm_error(const Field& truth, const Mesh& mesh, const LocalEvaluator& approximant, int p,
                             double eps1, const EnergyQuadrature& quad = {});

template <class T>
concept PiecewiseField = requires(const T& t, std::size_t j, double xi) {
    { t.mesh() } -> std::convertible_to<const Mesh&>;
    { t.degree() } -> std::convertible_to<int>;
    { t.evaluate_local(j, xi) } -> std::convertible_to<ValueAndDerivative>;
};

template <PiecewiseField T>
ErrorNorms energy_norm_error(const Field& truth, const T& approximant, double eps1,
                             const EnergyQuadrature& quad = {}) {
    return energy_norm_error(
        truth, approximant.mesh(), [&](std::size_t j, double xi) { return approximant.evaluate_local(j, xi); },
        approximant.degree(), eps1, quad);
}

/// Error of one discrete solution against another, integrated element by
/// element over the common refinement of their meshes.
ErrorNorms energy_norm_error(const DiscreteSolution& truth, const DiscreteSolution& approximant, double eps1,
                             const EnergyQuadrature& quad = {});

/// Starting degree of the reference solution, 2p.
int reference_degree(int p);

/// Solution of degree q on the layer-adapted mesh built for q, where q starts
/// at reference_degree(p) and is raised until the DOF count is at least twice
/// that of degree p on its own mesh (the q-mesh may have fewer elements).
DiscreteSolution reference_solution(const ProblemSpec& problem, const LayerParameters& layer, double kappa, int p);

/// Fixed-order pairwise sum.
double pairwise_sum(const double* data, std::size_t n);

}  // namespace sblfem
