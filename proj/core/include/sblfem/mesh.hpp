#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sblfem/problem.hpp"

namespace sblfem {

enum class MeshKind { SpectralBoundaryLayer, Uniform };

/// Which branch of the layer-adapted construction produced a mesh.
enum class MeshBranch {
    Asymptotic,      ///< {0, 1}: kappa p / mu1 >= 1/2
    RightLayerOnly,  ///< {0, 1 - kappa p / mu1, 1}: the left layer is wide enough for one element
    TwoLayers,       ///< {0, kappa p / mu0, 1 - kappa p / mu1, 1}
    Uniform,
};

std::string_view to_string(MeshBranch branch);

/// Affine map Q(xi) = x_left + (1 + xi) h / 2 from [-1, 1] onto one element.
/// Both endpoints are hit exactly: the right half of the reference element
/// is mapped from the right endpoint.
struct ElementMap {
    std::size_t index = 0;  ///< zero-based
    double left = 0.0;
    double right = 1.0;
    double width = 1.0;

    double jacobian() const { return 0.5 * width; }
    double to_physical(double xi) const;
    double to_reference(double x) const;
    /// x at distance `offset` (in reference units, 0..2) from the left end, or the right end.
    double from_left(double offset) const { return left + offset * jacobian(); }
    double from_right(double offset) const { return right - offset * jacobian(); }
};

class Mesh {
public:
    /// Breakpoints must start at 0, end at 1 and increase strictly. `widths`
    /// overrides breakpoint differences where they would lose digits.
    Mesh(std::vector<double> breakpoints, std::vector<double> widths, MeshKind kind, MeshBranch branch,
         double kappa, int p);

    std::span<const double> breakpoints() const { return breakpoints_; }
    std::size_t element_count() const { return breakpoints_.size() - 1; }
    double width(std::size_t j) const { return widths_.at(j); }
    MeshKind kind() const { return kind_; }
    MeshBranch branch() const { return branch_; }
    double kappa() const { return kappa_; }
    int degree() const { return p_; }

    /// Index of the element containing x. Breakpoints belong to the element on
    /// their left, except x = 0 which belongs to the first element.
    std::size_t locate(double x) const;

private:
    std::vector<double> breakpoints_;
    std::vector<double> widths_;
    MeshKind kind_;
    MeshBranch branch_;
    double kappa_;
    int p_;
};

Mesh build_sbl_mesh(const LayerParameters& layer, double kappa, int p);
Mesh build_uniform_mesh(int n_elements);

/// Union of the breakpoints of `a` and `b`. Elements present in either mesh
/// keep their stored width. Kind, branch, kappa and degree are taken from `a`.
Mesh common_refinement(const Mesh& a, const Mesh& b);

/// Throws DomainError for j >= element_count().
ElementMap element_map(const Mesh& mesh, std::size_t j);

/// "0 | 3.27482e-4 | 9.99973e-1 | 1"
std::string format_breakpoints(const Mesh& mesh);

}  // namespace sblfem
