#include "sblfem/approximation.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

#include "sblfem/errors.hpp"

namespace sblfem {

Field as_field(const ClosedFormSolution& exact) {
    return [exact](double x) { return ValueAndDerivative{exact.value(x), exact.derivative(x)}; };
}

Field as_field(const DiscreteSolution& sol) {
    auto shared = std::make_shared<const DiscreteSolution>(sol);
    return [shared](double x) { return evaluate_fem(*shared, x); };
}

PiecewiseInterpolant::PiecewiseInterpolant(Mesh mesh, int p, std::vector<Eigen::VectorXd> element_coefficients)
    : mesh_(std::move(mesh)), p_(p), coefficients_(std::move(element_coefficients)) {
    if (coefficients_.size() != mesh_.element_count()) {
        throw DomainError("interpolant needs one coefficient vector per element");
    }
    for (const auto& c : coefficients_) {
        if (c.size() != p_ + 1) throw DomainError("interpolant coefficient vector has wrong length");
    }
}

ValueAndDerivative PiecewiseInterpolant::evaluate_local(std::size_t j, double xi) const {
    std::vector<double> phi(p_ + 1), dphi(p_ + 1);
    shape_functions(p_, xi, phi.data(), dphi.data());
    const Eigen::VectorXd& c = coefficients_.at(j);
    ValueAndDerivative out;
    for (int k = 0; k <= p_; ++k) {
        out.value += c(k) * phi[k];
        out.derivative += c(k) * dphi[k];
    }
    out.derivative /= element_map(mesh_, j).jacobian();
    return out;
}

ValueAndDerivative PiecewiseInterpolant::evaluate(double x) const {
    const std::size_t j = mesh_.locate(x);
    return evaluate_local(j, element_map(mesh_, j).to_reference(x));
}

PiecewiseInterpolant build_interpolant(const Field& u, const Mesh& mesh, int p) {
    if (p < 1) throw DomainError("build_interpolant: degree must be >= 1");
    const QuadratureRule rule = gauss_rule(2 * p);
    std::vector<Eigen::VectorXd> coefficients;
    coefficients.reserve(mesh.element_count());

    for (std::size_t j = 0; j < mesh.element_count(); ++j) {
        const ElementMap emap = element_map(mesh, j);
        const double u_left = u(emap.left).value;
        const double u_right = u(emap.right).value;
        if (!std::isfinite(u_left) || !std::isfinite(u_right)) {
            throw DataError("build_interpolant: non-finite sample of u at an element endpoint");
        }

        // g(xi) = d/dxi u(Q(xi)) = J u'(x);  a_k = (2k+1)/2 int g P_k
        std::vector<double> a(static_cast<std::size_t>(p), 0.0);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double xi = rule.nodes[q];
            const double g = emap.jacobian() * u(emap.to_physical(xi)).derivative;
            if (!std::isfinite(g)) throw DataError("build_interpolant: non-finite sample of u'");
            const LegendreTable leg = legendre_eval(p - 1, xi);
            for (int k = 1; k < p; ++k) a[k] += rule.weights[q] * g * leg.values[k];
        }

        // int_{-1}^{xi} P_0 = 2 N1 and int_{-1}^{xi} P_k = psi_{k+1} / sqrt((2k+1)/2).
        // The P_0 coefficient is taken from the exact increment u_right - u_left.
        Eigen::VectorXd c(p + 1);
        c(0) = u_left;
        c(1) = u_right;
        for (int k = 1; k < p; ++k) {
            const double ak = 0.5 * (2 * k + 1) * a[k];
            c(k + 1) = ak / std::sqrt(0.5 * (2 * k + 1));
        }
        coefficients.push_back(std::move(c));
    }
    return PiecewiseInterpolant(mesh, p, std::move(coefficients));
}

CompositeRule composite_rule(int levels, int points) {
    if (levels < 0) throw DomainError("composite_rule: levels must be >= 0");
    const QuadratureRule g = gauss_rule(points);
    CompositeRule rule;
    rule.nodes_per_piece = g.size();

    // Pieces of the half [0, 1] in offset units: [0, 2^-L], [2^-(k+1), 2^-k] for k = L-1 .. 0.
    std::vector<std::pair<double, double>> pieces;
    pieces.emplace_back(0.0, std::ldexp(1.0, -levels));
    for (int k = levels - 1; k >= 0; --k) pieces.emplace_back(std::ldexp(1.0, -(k + 1)), std::ldexp(1.0, -k));

    for (bool right : {false, true}) {
        for (const auto& [lo, hi] : pieces) {
            const double half = 0.5 * (hi - lo);
            const double mid = 0.5 * (hi + lo);
            for (std::size_t q = 0; q < g.size(); ++q) {
                rule.nodes.push_back({right, mid + half * g.nodes[q], half * g.weights[q]});
            }
        }
    }
    return rule;
}

double pairwise_sum(const double* data, std::size_t n) {
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const std::size_t m = n / 2;
    return pairwise_sum(data, m) + pairwise_sum(data + m, n - m);
}

ErrorNorms energy_norm_error(const Field& truth, const Mesh& mesh, const LocalEvaluator& approximant, int p,
                             double eps1, const EnergyQuadrature& quad) {
    const CompositeRule rule = composite_rule(quad.levels, quad.points_for(p));
    const std::size_t per_piece = rule.nodes_per_piece;
    const std::size_t pieces = rule.nodes.size() / per_piece;

    std::vector<double> e0, e1, t0, t1;
    e0.reserve(pieces * mesh.element_count());
    e1.reserve(e0.capacity());
    t0.reserve(e0.capacity());
    t1.reserve(e0.capacity());

    for (std::size_t j = 0; j < mesh.element_count(); ++j) {
        const ElementMap emap = element_map(mesh, j);
        const double jac = emap.jacobian();
        for (std::size_t piece = 0; piece < pieces; ++piece) {
            double se0 = 0.0, se1 = 0.0, st0 = 0.0, st1 = 0.0;
            for (std::size_t q = piece * per_piece; q < (piece + 1) * per_piece; ++q) {
                const CompositeNode& node = rule.nodes[q];
                const double xi = node.from_right ? 1.0 - node.offset : -1.0 + node.offset;
                const double x = node.from_right ? emap.from_right(node.offset) : emap.from_left(node.offset);
                const ValueAndDerivative u = truth(x);
                const ValueAndDerivative uh = approximant(j, xi);
                if (!std::isfinite(u.value) || !std::isfinite(u.derivative)) {
                    throw DataError("energy_norm_error: non-finite truth value");
                }
                const double w = node.weight * jac;
                const double ev = u.value - uh.value;
                const double ed = u.derivative - uh.derivative;
                se0 += w * ev * ev;
                se1 += w * ed * ed;
                st0 += w * u.value * u.value;
                st1 += w * u.derivative * u.derivative;
            }
            e0.push_back(se0);
            e1.push_back(se1);
            t0.push_back(st0);
            t1.push_back(st1);
        }
    }

    ErrorNorms out;
    const double l2_sq = pairwise_sum(e0.data(), e0.size());
    const double semi_sq = pairwise_sum(e1.data(), e1.size());
    const double truth_sq = eps1 * pairwise_sum(t1.data(), t1.size()) + pairwise_sum(t0.data(), t0.size());
    out.l2 = std::sqrt(l2_sq);
    out.h1_seminorm = std::sqrt(semi_sq);
    out.energy = std::sqrt(eps1 * semi_sq + l2_sq);
    out.truth_energy = std::sqrt(truth_sq);
    if (!(out.truth_energy > 0.0)) throw DomainError("energy_norm_error: truth has zero energy norm");
    out.relative_pct = 100.0 * out.energy / out.truth_energy;
    return out;
}

ErrorNorms energy_norm_error(const DiscreteSolution& truth, const DiscreteSolution& approximant, double eps1,
                             const EnergyQuadrature& quad) {
    const Mesh mesh = common_refinement(approximant.mesh(), truth.mesh());
    const Field field = as_field(truth);
    return energy_norm_error(
        field, mesh,
        [&](std::size_t j, double xi) { return evaluate_fem(approximant, element_map(mesh, j).to_physical(xi)); },
        std::max(truth.degree(), approximant.degree()), eps1, quad);
}

int reference_degree(int p) {
    if (p < 1) throw DomainError("reference_degree: degree must be >= 1");
    // DOF = n p - 1 on n elements, so 2p is the smallest degree with
    // n p_ref - 1 >= 2 (n p - 1) for every n >= 1.
    return 2 * p;
}

DiscreteSolution reference_solution(const ProblemSpec& problem, const LayerParameters& layer, double kappa, int p) {
    const std::size_t target = 2 * DofMap(build_sbl_mesh(layer, kappa, p).element_count(), p).size();
    int q = reference_degree(p);
    while (DofMap(build_sbl_mesh(layer, kappa, q).element_count(), q).size() < target) ++q;
    return solve_fem(problem, build_sbl_mesh(layer, kappa, q), q);
}

}  // namespace sblfem
